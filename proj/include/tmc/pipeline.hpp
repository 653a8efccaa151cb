#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tmc/stages.hpp"

namespace tmc::pipeline {

namespace fs = std::filesystem;

inline constexpr const char* kToolVersion = "0.3.0";
inline constexpr int kConfigVersion = 1;
// Per-stage seed offsets added to the run seed; only topic modeling draws random numbers.
inline constexpr std::uint64_t kTopicSeedOffset = 0;
inline constexpr std::uint64_t kDefaultSeed = 7;

struct RunConfig {
  int version = kConfigVersion;
  std::vector<stages::InputSpec> inputs;
  int year_min = ingest::kDefaultYearMin;
  int year_max = ingest::kDefaultYearMax;
  double title_sim = ingest::kDefaultTitleSim;

  fs::path lexicon;
  std::optional<fs::path> candidates;
  bool fallback_rule = false;

  stages::TopicMode topic_mode = stages::TopicMode::fit;
  int k = 38;
  std::vector<int> k_list;
  std::optional<fs::path> topics_in;
  std::optional<double> alpha;
  double beta = 0.01;
  int iterations = 1000;
  std::optional<int> burn_in;
  std::size_t min_token_len = topics::kDefaultMinTokenLength;

  double sigma = core::kDefaultSigma;
  std::size_t top_n = network::kDefaultTopN;
  network::EdgeWeighting weighting = network::EdgeWeighting::unweighted;

  std::uint64_t seed = kDefaultSeed;
  fs::path out_dir = "run";

  // Throws ConfigError on any out-of-range value.
  void validate() const;
  nlohmann::ordered_json to_json() const;
  // Relative paths resolve against `base_dir`. Unknown keys are rejected.
  static RunConfig from_json(const nlohmann::json& j, const fs::path& base_dir = {});
  static RunConfig load(const fs::path& path);
};

enum class StageStatus { executed, skipped, failed, not_run };
std::string_view to_string(StageStatus s);

struct StageRecord {
  std::string name;
  StageStatus status = StageStatus::not_run;
  std::string config_digest;
  std::map<std::string, std::string> inputs;   // path -> sha256
  std::map<std::string, std::string> outputs;  // file name in out_dir -> sha256
  std::vector<std::string> stale;              // outputs left behind by a failed stage
  std::string note;
  double wall_seconds = 0;
};

struct RunManifest {
  std::string tool_version = kToolVersion;
  nlohmann::ordered_json config;
  std::vector<StageRecord> stages;

  nlohmann::ordered_json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
  // Every output digest keyed by "stage/file"; equal across runs with equal inputs and config.
  std::map<std::string, std::string> output_digests() const;
};

inline constexpr const char* kManifestFile = "manifest.json";

struct PlannedStage {
  std::string name;
  std::vector<std::string> outputs;
  bool would_skip = false;
};

// Stages that run_pipeline would execute, with resume decisions against an existing manifest.
std::vector<PlannedStage> plan_pipeline(const RunConfig& config);

// ingest -> extract -> topics -> tmc -> network -> report. A stage is skipped when the previous
// manifest records identical input and config digests and every output still matches its
// digest; an output whose digest no longer matches forces the stage to run again.
// Throws ConfigError before any stage on invalid config, InputError on missing inputs, and
// StageError naming the stage that failed (after writing the manifest).
RunManifest run_pipeline(const RunConfig& config, std::ostream& log);

}  // namespace tmc::pipeline
