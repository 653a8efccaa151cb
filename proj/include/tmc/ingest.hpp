#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace tmc::ingest {

enum class Source { wos, crossref, dimensions, generic };
std::string_view to_string(Source s);
Source source_from_string(std::string_view s);  // throws InputError on unknown tag

enum class Format { jsonl, csv, wos_tab };
std::string_view to_string(Format f);
Format format_from_string(std::string_view s);  // throws ConfigError on unknown tag

inline constexpr int kMinValidYear = 1000;
inline constexpr int kMaxValidYear = 3000;
inline constexpr int kDefaultYearMin = 1992;
inline constexpr int kDefaultYearMax = 2022;
inline constexpr double kDefaultTitleSim = 0.90;

struct BiblioRecord {
  std::string id;
  Source source = Source::generic;
  std::optional<std::string> doi;
  std::string title;
  std::string abstract;
  int year = 0;
  std::optional<std::string> venue;
  std::vector<std::string> authors;

  bool operator==(const BiblioRecord&) const = default;
};

struct Reject {
  std::size_t row = 0;  // 1-based physical line of the offending row
  std::string reason;
};

struct ParseResult {
  std::vector<BiblioRecord> records;
  std::vector<Reject> rejects;
};

// One record per well-formed row; malformed rows land in `rejects`.
// Throws InputError when the file cannot be opened.
ParseResult parse_records(const std::filesystem::path& path, Format format);
ParseResult parse_records(std::istream& in, Format format);

BiblioRecord normalize_record(BiblioRecord r);
std::optional<std::string> normalize_doi(std::string_view raw);

std::vector<BiblioRecord> filter_by_year(const std::vector<BiblioRecord>& records,
                                         int min_year = kDefaultYearMin,
                                         int max_year = kDefaultYearMax);

enum class MergeReason { doi_exact, title_exact, title_fuzzy };
std::string_view to_string(MergeReason r);

struct Merge {
  std::string kept_id;
  std::string removed_id;
  MergeReason reason;
};

struct DedupReport {
  std::size_t input_count = 0;
  std::size_t output_count = 0;
  std::vector<Merge> merges;
};

struct DedupResult {
  std::vector<BiblioRecord> records;
  DedupReport report;
};

// Three-stage cascade: identical DOI, identical match-key title + year, fuzzy title + year.
// Survivors keep input order.
DedupResult deduplicate(const std::vector<BiblioRecord>& records,
                        double title_sim_threshold = kDefaultTitleSim);

struct CorpusStats {
  std::size_t count = 0;
  std::map<int, std::size_t> per_year;
  std::map<std::string, std::size_t> per_source;
};
CorpusStats corpus_stats(const std::vector<BiblioRecord>& records);

// Canonical corpus file: JSON Lines with a fixed key order.
nlohmann::ordered_json to_json(const BiblioRecord& r);
void write_corpus(const std::filesystem::path& path, const std::vector<BiblioRecord>& records);
// Strict reader for files produced by write_corpus; throws InputError on any bad line.
std::vector<BiblioRecord> read_corpus(const std::filesystem::path& path);

nlohmann::ordered_json to_json(const DedupReport& report);
nlohmann::ordered_json to_json(const CorpusStats& stats);

}  // namespace tmc::ingest
