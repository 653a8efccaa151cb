#include <doctest.h>

#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "tmc/csv.hpp"
#include "tmc/digest.hpp"
#include "tmc/error.hpp"
#include "tmc/pipeline.hpp"

using namespace tmc;
using namespace tmc::pipeline;
namespace fs = std::filesystem;

namespace {

const fs::path kDemo = TMC_DEMO_DIR;

RunConfig demo_config(const fs::path& out) {
  auto c = RunConfig::load(kDemo / "config.json");
  c.out_dir = out;
  return c;
}

std::ostringstream sink;

std::string slurp(const fs::path& f) {
  std::ifstream in(f, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> csv_rows(const fs::path& f) {
  std::ifstream in(f);
  csv::Reader r(in);
  std::vector<std::vector<std::string>> rows;
  while (auto row = r.next()) rows.push_back(row->fields);
  return rows;
}

std::map<std::string, std::string> summary_lines(const fs::path& f) {
  std::map<std::string, std::string> out;
  std::istringstream in(slurp(f));
  std::string line;
  while (std::getline(in, line)) {
    const auto colon = line.find(": ");
    if (colon != std::string::npos) out[line.substr(0, colon)] = line.substr(colon + 2);
  }
  return out;
}

const StageRecord& stage(const RunManifest& m, const std::string& name) {
  for (const auto& s : m.stages)
    if (s.name == name) return s;
  throw std::runtime_error("no stage " + name);
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = RunConfig::load(kDemo / "config.json");
  CHECK(c.inputs.size() == 2);
  CHECK(c.inputs[0].path == kDemo / "records.jsonl");
  CHECK(c.inputs[1].format == ingest::Format::csv);
  CHECK(c.topic_mode == stages::TopicMode::sweep);
  CHECK(c.sigma == 0.001);
  CHECK(c.seed == 7);

  const auto round = RunConfig::from_json(nlohmann::json::parse(c.to_json().dump()));
  CHECK(round.to_json() == c.to_json());

  CHECK_THROWS_AS(RunConfig::from_json({{"sigma", 0.1}, {"sigmaa", 1}}), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json({{"sigma", "high"}}), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json({{"topic-mode", "guess"}}), ConfigError);
  CHECK_THROWS_AS(RunConfig::load(kDemo / "missing.json"), ConfigError);
}

TEST_CASE("defaults") {
  const RunConfig c;
  CHECK(c.sigma == 0.001);
  CHECK(c.top_n == 35);
  CHECK(c.year_min == 1992);
  CHECK(c.year_max == 2022);
  CHECK(c.title_sim == 0.9);
  CHECK(c.k == 38);
}

TEST_CASE("negative sigma aborts before any stage") {
  const auto dir = fixture::scratch_dir("neg_sigma") / "out";
  auto c = demo_config(dir);
  c.sigma = -1;
  CHECK_THROWS_AS(run_pipeline(c, sink), ConfigError);
  CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("missing inputs are input errors") {
  auto c = demo_config(fixture::scratch_dir("missing_input"));
  c.inputs[0].path = kDemo / "nope.jsonl";
  CHECK_THROWS_AS(run_pipeline(c, sink), InputError);
}

TEST_CASE("full run, repeat run and resume") {
  const auto base = fixture::scratch_dir("e2e");
  const auto first = run_pipeline(demo_config(base / "a"), sink);
  const auto second = run_pipeline(demo_config(base / "b"), sink);

  for (const auto& s : first.stages) {
    CHECK(s.status == StageStatus::executed);
    for (const auto& [file, digest] : s.outputs) {
      CHECK(fs::exists(base / "a" / file));
      CHECK(slurp(base / "a" / file) == slurp(base / "b" / file));
    }
  }
  CHECK(first.output_digests() == second.output_digests());
  CHECK(first.config["sigma"] == 0.001);

  SUBCASE("unchanged inputs skip every stage") {
    const auto resumed = run_pipeline(demo_config(base / "a"), sink);
    for (const auto& s : resumed.stages) CHECK(s.status == StageStatus::skipped);
    CHECK(resumed.output_digests() == first.output_digests());
    for (const auto& p : plan_pipeline(demo_config(base / "a"))) CHECK(p.would_skip);
  }

  SUBCASE("a tampered output forces its stage to run again") {
    std::ofstream(base / "a" / "tmc.csv", std::ios::app) << "tampered,0,1,1,1,1,true\n";
    const auto resumed = run_pipeline(demo_config(base / "a"), sink);
    CHECK(stage(resumed, "topics").status == StageStatus::skipped);
    CHECK(stage(resumed, "tmc").status == StageStatus::executed);
    CHECK_FALSE(stage(resumed, "tmc").note.empty());
    CHECK(resumed.output_digests() == first.output_digests());
  }

  SUBCASE("a changed sigma reruns tmc and later stages only") {
    auto c = demo_config(base / "a");
    c.sigma = 0.05;
    const auto resumed = run_pipeline(c, sink);
    CHECK(stage(resumed, "ingest").status == StageStatus::skipped);
    CHECK(stage(resumed, "topics").status == StageStatus::skipped);
    CHECK(stage(resumed, "tmc").status == StageStatus::executed);
    CHECK(stage(resumed, "report").status == StageStatus::executed);
  }
}

TEST_CASE("report numbers agree with the files they summarize") {
  const auto dir = fixture::scratch_dir("report");
  run_pipeline(demo_config(dir), sink);
  const auto s = summary_lines(dir / "summary.txt");

  std::set<std::string> communities;
  const auto comm = csv_rows(dir / "comm.csv");
  for (std::size_t i = 1; i < comm.size(); ++i) communities.insert(comm[i][1]);
  CHECK(s.at("community_count") == std::to_string(communities.size()));

  std::size_t retained = 0;
  const auto tmc = csv_rows(dir / "tmc.csv");
  for (std::size_t i = 1; i < tmc.size(); ++i) retained += tmc[i][6] == "true";
  CHECK(s.at("retained_pairs") == std::to_string(retained));
  CHECK(s.at("tmc_pairs") == std::to_string(tmc.size() - 1));

  const auto top = csv_rows(dir / "top.csv");
  CHECK(top.size() - 1 <= 35);
  CHECK(s.at("top_tmc_rows") == std::to_string(top.size() - 1));
  CHECK(s.at("corpus_size") == "60");
  CHECK(s.at("sigma") == "0.001");
}

TEST_CASE("missing upstream output is named") {
  const auto dir = fixture::scratch_dir("report_missing");
  run_pipeline(demo_config(dir), sink);
  fs::remove(dir / "comm.csv");
  try {
    stages::emit_report({dir / "corpus.jsonl", dir / "methods.jsonl", dir / "topics.csv", dir / "tmc.csv",
                         dir / "comm.csv", dir / "network.json", dir / "top.csv", dir / "summary.txt"});
    FAIL("report ran without comm.csv");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("comm.csv") != std::string::npos);
  }
}

TEST_CASE("stage failure names the stage and marks outputs stale") {
  const auto dir = fixture::scratch_dir("failure");
  auto c = demo_config(dir / "out");
  run_pipeline(c, sink);
  std::ofstream(dir / "lex.json") << R"({"a": ["gis"], "b": ["gis"]})";
  c.lexicon = dir / "lex.json";
  try {
    run_pipeline(c, sink);
    FAIL("ambiguous lexicon accepted");
  } catch (const StageError& e) {
    CHECK(e.stage() == "extract");
  }
  const auto m = RunManifest::from_json(nlohmann::json::parse(slurp(dir / "out" / kManifestFile)));
  CHECK(stage(m, "ingest").status == StageStatus::skipped);
  CHECK(stage(m, "extract").status == StageStatus::failed);
  CHECK(stage(m, "tmc").status == StageStatus::not_run);
  const auto raw = nlohmann::json::parse(slurp(dir / "out" / kManifestFile));
  CHECK(raw["stages"][1]["stale"].size() == 2);
  CHECK(raw["stages"][3]["stale"].size() == 4);
}

TEST_CASE("digests") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
