#include "tmc/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <set>

#include "tmc/digest.hpp"
#include "tmc/error.hpp"
#include "tmc/text.hpp"

namespace tmc::pipeline {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string_view topic_mode_name(stages::TopicMode m) {
  switch (m) {
    case stages::TopicMode::fit: return "fit";
    case stages::TopicMode::sweep: return "sweep";
    case stages::TopicMode::import_external: return "import";
  }
  return "fit";
}

}  // namespace

std::string_view to_string(StageStatus s) {
  switch (s) {
    case StageStatus::executed: return "executed";
    case StageStatus::skipped: return "skipped";
    case StageStatus::failed: return "failed";
    case StageStatus::not_run: return "not_run";
  }
  return "not_run";
}

void RunConfig::validate() const {
  if (version != kConfigVersion) throw ConfigError("unsupported config version " + std::to_string(version));
  if (inputs.empty()) throw ConfigError("no input files configured");
  if (year_min > year_max) throw ConfigError("year-min exceeds year-max");
  if (!(title_sim >= 0 && title_sim <= 1)) throw ConfigError("title-sim must lie in [0,1]");
  if (lexicon.empty()) throw ConfigError("no method lexicon configured");
  if (!(sigma >= 0)) throw ConfigError("sigma must be >= 0");
  if (top_n < 1) throw ConfigError("top-n must be >= 1");
  if (min_token_len < 1) throw ConfigError("min-token-len must be >= 1");
  switch (topic_mode) {
    case stages::TopicMode::import_external:
      if (!topics_in) throw ConfigError("topic-mode import needs topics-in");
      break;
    case stages::TopicMode::sweep: {
      if (k_list.empty()) throw ConfigError("topic-mode sweep needs k-list");
      std::set<int> seen;
      for (int v : k_list) {
        if (v < 1) throw ConfigError("k-list values must be >= 1");
        if (!seen.insert(v).second) throw ConfigError("duplicate value in k-list");
      }
      [[fallthrough]];
    }
    case stages::TopicMode::fit: {
      topics::TopicModelConfig m;
      m.K = topic_mode == stages::TopicMode::fit ? k : *std::min_element(k_list.begin(), k_list.end());
      m.alpha = alpha;
      m.beta = beta;
      m.iterations = iterations;
      m.burn_in = burn_in;
      m.validate();
      break;
    }
  }
}

ordered_json RunConfig::to_json() const {
  ordered_json j;
  j["version"] = version;
  j["inputs"] = ordered_json::array();
  for (const auto& in : inputs) j["inputs"].push_back({{"path", in.path.string()}, {"format", ingest::to_string(in.format)}});
  j["year-min"] = year_min;
  j["year-max"] = year_max;
  j["title-sim"] = title_sim;
  j["lexicon"] = lexicon.string();
  j["candidates"] = candidates ? ordered_json(candidates->string()) : ordered_json(nullptr);
  j["fallback-rule"] = fallback_rule;
  j["topic-mode"] = topic_mode_name(topic_mode);
  j["k"] = k;
  j["k-list"] = k_list;
  j["topics-in"] = topics_in ? ordered_json(topics_in->string()) : ordered_json(nullptr);
  j["alpha"] = alpha ? ordered_json(*alpha) : ordered_json(nullptr);
  j["beta"] = beta;
  j["iterations"] = iterations;
  j["burn-in"] = burn_in ? ordered_json(*burn_in) : ordered_json(nullptr);
  j["min-token-len"] = min_token_len;
  j["sigma"] = sigma;
  j["top-n"] = top_n;
  j["weighted"] = weighting == network::EdgeWeighting::unweighted ? "unweighted" : "shared-intensity";
  j["seed"] = seed;
  j["out-dir"] = out_dir.string();
  return j;
}

RunConfig RunConfig::from_json(const json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known = {
      "version", "inputs", "year-min", "year-max", "title-sim", "lexicon", "candidates", "fallback-rule",
      "topic-mode", "k", "k-list", "topics-in", "alpha", "beta", "iterations", "burn-in", "min-token-len",
      "sigma", "top-n", "weighted", "seed", "out-dir"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");

  auto resolve = [&](const std::string& p) {
    fs::path path(p);
    return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
  };
  RunConfig c;
  try {
    auto has = [&](const char* key) { return j.contains(key) && !j.at(key).is_null(); };
    if (has("version")) c.version = j.at("version").get<int>();
    if (has("inputs")) {
      for (const auto& in : j.at("inputs")) {
        stages::InputSpec spec;
        spec.path = resolve(in.at("path").get<std::string>());
        spec.format = in.contains("format") ? ingest::format_from_string(in.at("format").get<std::string>())
                                            : ingest::Format::jsonl;
        c.inputs.push_back(spec);
      }
    }
    if (has("year-min")) c.year_min = j.at("year-min").get<int>();
    if (has("year-max")) c.year_max = j.at("year-max").get<int>();
    if (has("title-sim")) c.title_sim = j.at("title-sim").get<double>();
    if (has("lexicon")) c.lexicon = resolve(j.at("lexicon").get<std::string>());
    if (has("candidates")) c.candidates = resolve(j.at("candidates").get<std::string>());
    if (has("fallback-rule")) c.fallback_rule = j.at("fallback-rule").get<bool>();
    if (has("topic-mode")) {
      const auto m = j.at("topic-mode").get<std::string>();
      if (m == "fit") c.topic_mode = stages::TopicMode::fit;
      else if (m == "sweep") c.topic_mode = stages::TopicMode::sweep;
      else if (m == "import") c.topic_mode = stages::TopicMode::import_external;
      else throw ConfigError("topic-mode must be fit, sweep or import");
    }
    if (has("k")) c.k = j.at("k").get<int>();
    if (has("k-list")) c.k_list = j.at("k-list").get<std::vector<int>>();
    if (has("topics-in")) c.topics_in = resolve(j.at("topics-in").get<std::string>());
    if (has("alpha")) c.alpha = j.at("alpha").get<double>();
    if (has("beta")) c.beta = j.at("beta").get<double>();
    if (has("iterations")) c.iterations = j.at("iterations").get<int>();
    if (has("burn-in")) c.burn_in = j.at("burn-in").get<int>();
    if (has("min-token-len")) c.min_token_len = j.at("min-token-len").get<std::size_t>();
    if (has("sigma")) c.sigma = j.at("sigma").get<double>();
    if (has("top-n")) c.top_n = j.at("top-n").get<std::size_t>();
    if (has("weighted")) {
      const auto w = j.at("weighted").get<std::string>();
      if (w == "unweighted") c.weighting = network::EdgeWeighting::unweighted;
      else if (w == "shared-intensity") c.weighting = network::EdgeWeighting::shared_intensity;
      else throw ConfigError("weighted must be unweighted or shared-intensity");
    }
    if (has("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (has("out-dir")) c.out_dir = resolve(j.at("out-dir").get<std::string>());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  return c;
}

RunConfig RunConfig::load(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return from_json(j, path.parent_path());
}

ordered_json RunManifest::to_json() const {
  ordered_json j;
  j["tool_version"] = tool_version;
  j["config"] = config;
  j["stages"] = ordered_json::array();
  for (const auto& s : stages) {
    ordered_json e;
    e["name"] = s.name;
    e["status"] = to_string(s.status);
    e["config_digest"] = s.config_digest;
    e["inputs"] = s.inputs;
    e["outputs"] = s.outputs;
    e["stale"] = s.stale;
    e["note"] = s.note;
    e["wall_seconds"] = s.wall_seconds;
    j["stages"].push_back(std::move(e));
  }
  return j;
}

RunManifest RunManifest::from_json(const json& j) {
  RunManifest m;
  m.tool_version = j.at("tool_version").get<std::string>();
  m.config = j.at("config");
  for (const auto& e : j.at("stages")) {
    StageRecord s;
    s.name = e.at("name").get<std::string>();
    const auto status = e.at("status").get<std::string>();
    for (auto st : {StageStatus::executed, StageStatus::skipped, StageStatus::failed, StageStatus::not_run})
      if (status == to_string(st)) s.status = st;
    s.config_digest = e.at("config_digest").get<std::string>();
    s.inputs = e.at("inputs").get<std::map<std::string, std::string>>();
    s.outputs = e.at("outputs").get<std::map<std::string, std::string>>();
    m.stages.push_back(std::move(s));
  }
  return m;
}

std::map<std::string, std::string> RunManifest::output_digests() const {
  std::map<std::string, std::string> out;
  for (const auto& s : stages)
    for (const auto& [file, digest] : s.outputs) out[s.name + "/" + file] = digest;
  return out;
}

namespace {

struct StageDef {
  std::string name;
  std::vector<fs::path> inputs;
  ordered_json config;
  std::vector<std::string> outputs;  // file names inside out_dir
  std::function<void()> run;
};

std::vector<StageDef> define_stages(const RunConfig& c) {
  const auto& dir = c.out_dir;
  auto at = [&](const char* f) { return dir / f; };
  std::vector<StageDef> defs;

  {
    StageDef s{"ingest", {}, {}, {"corpus.jsonl", "dedup.json"}, {}};
    stages::IngestParams p;
    for (const auto& in : c.inputs) {
      s.inputs.push_back(in.path);
      p.inputs.push_back(in);
    }
    p.year_min = c.year_min;
    p.year_max = c.year_max;
    p.title_sim = c.title_sim;
    p.out = at("corpus.jsonl");
    p.report = at("dedup.json");
    s.config = {{"year-min", c.year_min}, {"year-max", c.year_max}, {"title-sim", c.title_sim}};
    for (const auto& in : c.inputs) s.config["formats"].push_back(ingest::to_string(in.format));
    s.run = [p] { stages::run_ingest(p); };
    defs.push_back(std::move(s));
  }
  {
    StageDef s{"extract", {at("corpus.jsonl"), c.lexicon}, {}, {"methods.jsonl", "extract.json"}, {}};
    stages::ExtractParams p;
    p.corpus = at("corpus.jsonl");
    p.lexicon = c.lexicon;
    p.candidates = c.candidates;
    p.fallback_rule = c.fallback_rule;
    p.out = at("methods.jsonl");
    p.report = at("extract.json");
    if (c.candidates) s.inputs.push_back(*c.candidates);
    s.config = {{"llmrule", c.candidates.has_value()}, {"fallback-rule", c.fallback_rule}};
    s.run = [p] { stages::run_extract(p); };
    defs.push_back(std::move(s));
  }
  {
    StageDef s{"topics", {}, {}, {"topics.csv", "topics.json"}, {}};
    stages::TopicParams p;
    p.mode = c.topic_mode;
    p.corpus = at("corpus.jsonl");
    p.import = c.topics_in;
    p.model.K = c.k;
    p.model.alpha = c.alpha;
    p.model.beta = c.beta;
    p.model.iterations = c.iterations;
    p.model.burn_in = c.burn_in;
    p.model.seed = c.seed + kTopicSeedOffset;
    p.k_list = c.k_list;
    p.min_token_len = c.min_token_len;
    p.out = at("topics.csv");
    p.report = at("topics.json");
    if (c.topic_mode == stages::TopicMode::import_external) {
      s.inputs.push_back(*c.topics_in);
    } else {
      s.inputs.push_back(at("corpus.jsonl"));
    }
    if (c.topic_mode == stages::TopicMode::sweep) {
      p.quality = at("quality.csv");
      s.outputs.push_back("quality.csv");
    }
    s.config = {{"mode", topic_mode_name(c.topic_mode)},
                {"k", c.k},
                {"k-list", c.k_list},
                {"alpha", c.alpha ? ordered_json(*c.alpha) : ordered_json(nullptr)},
                {"beta", c.beta},
                {"iterations", c.iterations},
                {"burn-in", p.model.burn_in_value()},
                {"min-token-len", c.min_token_len},
                {"seed", p.model.seed}};
    s.run = [p] { stages::run_topics(p); };
    defs.push_back(std::move(s));
  }
  {
    StageDef s{"tmc",
               {at("methods.jsonl"), at("topics.csv")},
               {{"sigma", c.sigma}},
               {"tmc.csv", "tmc.graphml", "tmc.gexf", "tmc.json"},
               {}};
    stages::TmcParams p;
    p.methods = at("methods.jsonl");
    p.topics = at("topics.csv");
    p.sigma = c.sigma;
    p.out = at("tmc.csv");
    p.graph = at("tmc.graphml");
    p.gexf = at("tmc.gexf");
    p.report = at("tmc.json");
    s.run = [p] { stages::run_tmc(p); };
    defs.push_back(std::move(s));
  }
  {
    StageDef s{"network",
               {at("tmc.csv")},
               {{"sigma", c.sigma}, {"top-n", c.top_n}, {"weighted", c.to_json()["weighted"]}},
               {"net.graphml", "net.gexf", "comm.csv", "hist.csv", "top.csv", "network.json"},
               {}};
    stages::NetworkParams p;
    p.tmc = at("tmc.csv");
    p.sigma = c.sigma;
    p.weighting = c.weighting;
    p.top_n = c.top_n;
    p.graph = at("net.graphml");
    p.gexf = at("net.gexf");
    p.communities = at("comm.csv");
    p.history = at("hist.csv");
    p.top = at("top.csv");
    p.summary = at("network.json");
    s.run = [p] { stages::run_network(p); };
    defs.push_back(std::move(s));
  }
  {
    StageDef s{"report",
               {at("corpus.jsonl"), at("methods.jsonl"), at("topics.csv"), at("tmc.csv"), at("comm.csv"),
                at("network.json"), at("top.csv")},
               ordered_json::object(),
               {"summary.txt"},
               {}};
    stages::ReportParams p{at("corpus.jsonl"), at("methods.jsonl"), at("topics.csv"), at("tmc.csv"),
                           at("comm.csv"),     at("network.json"),  at("top.csv"),    at("summary.txt")};
    s.run = [p] { stages::emit_report(p); };
    defs.push_back(std::move(s));
  }
  return defs;
}

std::optional<RunManifest> load_previous(const fs::path& dir) {
  const auto path = dir / kManifestFile;
  if (!fs::exists(path)) return std::nullopt;
  try {
    std::ifstream in(path, std::ios::binary);
    return RunManifest::from_json(json::parse(in));
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

const StageRecord* find_stage(const std::optional<RunManifest>& m, const std::string& name) {
  if (!m) return nullptr;
  for (const auto& s : m->stages)
    if (s.name == name) return &s;
  return nullptr;
}

std::map<std::string, std::string> digest_inputs(const StageDef& def) {
  std::map<std::string, std::string> out;
  for (const auto& p : def.inputs) out[p.string()] = fs::exists(p) ? file_sha256(p) : std::string("missing");
  return out;
}

enum class ResumeCheck { rerun, skip, tampered };

ResumeCheck check_resume(const StageDef& def, const StageRecord* prev, const std::string& config_digest,
                         const std::map<std::string, std::string>& inputs, const fs::path& dir) {
  if (!prev || (prev->status != StageStatus::executed && prev->status != StageStatus::skipped)) return ResumeCheck::rerun;
  if (prev->config_digest != config_digest || prev->inputs != inputs) return ResumeCheck::rerun;
  for (const auto& f : def.outputs) {
    const auto it = prev->outputs.find(f);
    if (it == prev->outputs.end() || !fs::exists(dir / f)) return ResumeCheck::rerun;
    if (file_sha256(dir / f) != it->second) return ResumeCheck::tampered;
  }
  return ResumeCheck::skip;
}

void write_manifest(const fs::path& dir, const RunManifest& m) {
  const auto tmp = dir / (std::string(kManifestFile) + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw InputError("cannot write manifest in " + dir.string());
    out << m.to_json().dump(2) << '\n';
  }
  fs::rename(tmp, dir / kManifestFile);
}

void check_inputs_exist(const RunConfig& c) {
  auto need = [](const fs::path& p, const char* what) {
    if (!fs::is_regular_file(p)) throw InputError(std::string(what) + " not found: " + p.string());
  };
  for (const auto& in : c.inputs) need(in.path, "input file");
  need(c.lexicon, "lexicon");
  if (c.candidates) need(*c.candidates, "candidate file");
  if (c.topic_mode == stages::TopicMode::import_external) need(*c.topics_in, "topic assignment file");
}

}  // namespace

std::vector<PlannedStage> plan_pipeline(const RunConfig& config) {
  config.validate();
  const auto prev = load_previous(config.out_dir);
  std::vector<PlannedStage> plan;
  bool upstream_reruns = false;
  for (const auto& def : define_stages(config)) {
    const auto digest = sha256_hex(def.config.dump());
    const auto check = check_resume(def, find_stage(prev, def.name), digest, digest_inputs(def), config.out_dir);
    const bool skip = !upstream_reruns && check == ResumeCheck::skip;
    upstream_reruns = upstream_reruns || !skip;
    plan.push_back({def.name, def.outputs, skip});
  }
  return plan;
}

RunManifest run_pipeline(const RunConfig& config, std::ostream& log) {
  config.validate();
  check_inputs_exist(config);
  fs::create_directories(config.out_dir);

  const auto prev = load_previous(config.out_dir);
  RunManifest manifest;
  manifest.config = config.to_json();
  const auto defs = define_stages(config);

  for (std::size_t i = 0; i < defs.size(); ++i) {
    const auto& def = defs[i];
    StageRecord rec;
    rec.name = def.name;
    rec.config_digest = sha256_hex(def.config.dump());
    rec.inputs = digest_inputs(def);

    const auto check = check_resume(def, find_stage(prev, def.name), rec.config_digest, rec.inputs, config.out_dir);
    if (check == ResumeCheck::skip) {
      rec.status = StageStatus::skipped;
      rec.outputs = find_stage(prev, def.name)->outputs;
      log << "[" << def.name << "] up to date, skipped\n";
      manifest.stages.push_back(std::move(rec));
      continue;
    }
    if (check == ResumeCheck::tampered) {
      rec.note = "output digest mismatch against previous manifest; stage re-executed";
      log << "[" << def.name << "] output digest mismatch, re-running\n";
    }

    const auto start = std::chrono::steady_clock::now();
    try {
      def.run();
      for (const auto& f : def.outputs) rec.outputs[f] = file_sha256(config.out_dir / f);
      rec.status = StageStatus::executed;
    } catch (const std::exception& e) {
      rec.status = StageStatus::failed;
      rec.note = e.what();
      for (const auto& f : def.outputs)
        if (fs::exists(config.out_dir / f)) rec.stale.push_back(f);
      rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      manifest.stages.push_back(std::move(rec));
      for (std::size_t k = i + 1; k < defs.size(); ++k) {
        StageRecord later;
        later.name = defs[k].name;
        for (const auto& f : defs[k].outputs)
          if (fs::exists(config.out_dir / f)) later.stale.push_back(f);
        manifest.stages.push_back(std::move(later));
      }
      write_manifest(config.out_dir, manifest);
      throw StageError(def.name, e.what());
    }
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    log << "[" << def.name << "] done in " << rec.wall_seconds << " s\n";
    manifest.stages.push_back(std::move(rec));
  }
  write_manifest(config.out_dir, manifest);
  return manifest;
}

}  // namespace tmc::pipeline
