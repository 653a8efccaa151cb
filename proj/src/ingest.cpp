#include "tmc/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "tmc/csv.hpp"
#include "tmc/error.hpp"
#include "tmc/text.hpp"

namespace tmc::ingest {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(Source s) {
  switch (s) {
    case Source::wos: return "wos";
    case Source::crossref: return "crossref";
    case Source::dimensions: return "dimensions";
    case Source::generic: return "generic";
  }
  return "generic";
}

Source source_from_string(std::string_view s) {
  const auto v = text::lower(text::trim(s));
  if (v == "wos") return Source::wos;
  if (v == "crossref") return Source::crossref;
  if (v == "dimensions") return Source::dimensions;
  if (v == "generic" || v.empty()) return Source::generic;
  throw InputError("unknown source '" + std::string(s) + "'");
}

std::string_view to_string(Format f) {
  switch (f) {
    case Format::jsonl: return "jsonl";
    case Format::csv: return "csv";
    case Format::wos_tab: return "wos_tab";
  }
  return "jsonl";
}

Format format_from_string(std::string_view s) {
  if (s == "jsonl") return Format::jsonl;
  if (s == "csv") return Format::csv;
  if (s == "wos_tab") return Format::wos_tab;
  throw ConfigError("unknown input format '" + std::string(s) + "' (expected jsonl, csv or wos_tab)");
}

std::string_view to_string(MergeReason r) {
  switch (r) {
    case MergeReason::doi_exact: return "doi_exact";
    case MergeReason::title_exact: return "title_exact";
    case MergeReason::title_fuzzy: return "title_fuzzy";
  }
  return "";
}

namespace {

// Raw field bag shared by all three input formats before validation.
struct RawRow {
  std::string id;
  std::string source;
  std::string doi;
  std::string title;
  std::string abstract;
  std::string year;
  std::string venue;
  std::vector<std::string> authors;
};

std::optional<int> parse_year(std::string_view raw) {
  const auto s = text::trim(raw);
  if (s.empty() || s.size() > 4) return std::nullopt;
  if (!std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
    return std::nullopt;
  const int y = std::stoi(s);
  if (y < kMinValidYear || y > kMaxValidYear) return std::nullopt;
  return y;
}

std::vector<std::string> split_authors(std::string_view s) {
  std::vector<std::string> out;
  for (auto& a : text::split(s, ';')) {
    auto t = text::trim(a);
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

void strip_bom(std::string& line) {
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
}

class RowSink {
 public:
  explicit RowSink(ParseResult& out) : out_(out) {}

  void accept(std::size_t row, RawRow raw, Source default_source) {
    const auto year = parse_year(raw.year);
    if (!year) return reject(row, "bad year");
    if (text::trim(raw.title).empty() && text::trim(raw.doi).empty())
      return reject(row, "missing title and doi");

    BiblioRecord r;
    try {
      r.source = raw.source.empty() ? default_source : source_from_string(raw.source);
    } catch (const InputError&) {
      return reject(row, "bad source");
    }
    r.id = text::trim(raw.id);
    if (r.id.empty()) {
      const auto doi = normalize_doi(raw.doi);
      r.id = doi ? *doi : std::string(to_string(r.source)) + ":" + std::to_string(row);
    }
    if (!ids_.insert(r.id).second) return reject(row, "duplicate id");
    if (!text::trim(raw.doi).empty()) r.doi = std::move(raw.doi);
    r.title = std::move(raw.title);
    r.abstract = std::move(raw.abstract);
    r.year = *year;
    if (!text::trim(raw.venue).empty()) r.venue = std::move(raw.venue);
    r.authors = std::move(raw.authors);
    out_.records.push_back(std::move(r));
  }

  void reject(std::size_t row, std::string reason) { out_.rejects.push_back({row, std::move(reason)}); }

 private:
  ParseResult& out_;
  std::set<std::string> ids_;
};

std::string json_text(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return {};
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<long long>());
  throw std::invalid_argument(std::string("field '") + key + "' has unexpected type");
}

void parse_jsonl(std::istream& in, ParseResult& out) {
  RowSink sink(out);
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (row == 1) strip_bom(line);
    if (text::trim(line).empty()) continue;
    RawRow raw;
    try {
      const auto obj = json::parse(line);
      if (!obj.is_object()) {
        sink.reject(row, "malformed json");
        continue;
      }
      raw.id = json_text(obj, "id");
      raw.source = json_text(obj, "source");
      raw.doi = json_text(obj, "doi");
      raw.title = json_text(obj, "title");
      raw.abstract = json_text(obj, "abstract");
      raw.year = json_text(obj, "year");
      raw.venue = json_text(obj, "venue");
      if (const auto it = obj.find("authors"); it != obj.end() && !it->is_null()) {
        if (it->is_string()) {
          raw.authors = split_authors(it->get<std::string>());
        } else {
          for (const auto& a : *it) raw.authors.push_back(a.get<std::string>());
        }
      }
    } catch (const std::exception&) {
      sink.reject(row, "malformed json");
      continue;
    }
    sink.accept(row, std::move(raw), Source::generic);
  }
}

// Columns mapped by name; unknown columns ignored. `wos` selects the WoS field-tag table.
void parse_delimited(std::istream& in, ParseResult& out, bool wos) {
  RowSink sink(out);
  std::unordered_map<std::string, std::string> column_table;
  if (wos) {
    column_table = {{"ut", "id"},     {"di", "doi"}, {"ti", "title"}, {"ab", "abstract"},
                    {"py", "year"},   {"so", "venue"}, {"au", "authors"}};
  } else {
    for (const char* c : {"id", "source", "doi", "title", "abstract", "year", "venue", "authors"})
      column_table[c] = c;
  }

  // WoS exports are plain tab-separated without quoting; CSV follows RFC 4180.
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
  if (wos) {
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
      ++n;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (text::trim(line).empty()) continue;
      rows.emplace_back(n, text::split(line, '\t'));
    }
  } else {
    csv::Reader reader(in);
    while (auto r = reader.next()) {
      if (r->malformed) {
        sink.reject(r->line, "unterminated quote");
        continue;
      }
      rows.emplace_back(r->line, std::move(r->fields));
    }
  }
  if (rows.empty()) return;

  auto header = rows.front().second;
  if (!header.empty()) strip_bom(header.front());
  std::vector<std::string> roles(header.size());
  for (std::size_t i = 0; i < header.size(); ++i) {
    const auto it = column_table.find(text::lower(text::trim(header[i])));
    if (it != column_table.end()) roles[i] = it->second;
  }

  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto& [line, fields] = rows[k];
    // WoS exports commonly carry a trailing tab.
    if (fields.size() != header.size() &&
        !(wos && fields.size() == header.size() + 1 && fields.back().empty())) {
      sink.reject(line, "column count mismatch");
      continue;
    }
    RawRow raw;
    for (std::size_t i = 0; i < header.size(); ++i) {
      const auto& role = roles[i];
      const auto& v = fields[i];
      if (role == "id") raw.id = v;
      else if (role == "source") raw.source = v;
      else if (role == "doi") raw.doi = v;
      else if (role == "title") raw.title = v;
      else if (role == "abstract") raw.abstract = v;
      else if (role == "year") raw.year = v;
      else if (role == "venue") raw.venue = v;
      else if (role == "authors") raw.authors = split_authors(v);
    }
    sink.accept(line, std::move(raw), wos ? Source::wos : Source::generic);
  }
}

}  // namespace

ParseResult parse_records(std::istream& in, Format format) {
  ParseResult out;
  switch (format) {
    case Format::jsonl: parse_jsonl(in, out); break;
    case Format::csv: parse_delimited(in, out, false); break;
    case Format::wos_tab: parse_delimited(in, out, true); break;
  }
  return out;
}

ParseResult parse_records(const std::filesystem::path& path, Format format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open input file " + path.string());
  return parse_records(in, format);
}

std::optional<std::string> normalize_doi(std::string_view raw) {
  auto doi = text::lower(text::trim(raw));
  for (std::string_view prefix :
       {"https://doi.org/", "http://doi.org/", "https://dx.doi.org/", "http://dx.doi.org/", "doi:"}) {
    if (doi.rfind(prefix, 0) == 0) {
      doi = text::trim(std::string_view(doi).substr(prefix.size()));
      break;
    }
  }
  if (doi.rfind("10.", 0) != 0) return std::nullopt;
  return doi;
}

BiblioRecord normalize_record(BiblioRecord r) {
  r.doi = r.doi ? normalize_doi(*r.doi) : std::nullopt;
  r.title = text::collapse_whitespace(r.title);
  for (auto& a : r.authors) a = text::trim(a);
  if (r.venue) r.venue = text::trim(*r.venue);
  return r;
}

std::vector<BiblioRecord> filter_by_year(const std::vector<BiblioRecord>& records, int min_year,
                                         int max_year) {
  if (min_year > max_year)
    throw ConfigError("year-min " + std::to_string(min_year) + " exceeds year-max " +
                      std::to_string(max_year));
  std::vector<BiblioRecord> out;
  std::copy_if(records.begin(), records.end(), std::back_inserter(out),
               [&](const BiblioRecord& r) { return r.year >= min_year && r.year <= max_year; });
  return out;
}

DedupResult deduplicate(const std::vector<BiblioRecord>& records, double title_sim_threshold) {
  if (!(title_sim_threshold >= 0.0 && title_sim_threshold <= 1.0))
    throw ConfigError("title similarity threshold must lie in [0,1]");

  const std::size_t n = records.size();
  // Priority order: longer abstract first, then smaller id. The first record of a
  // duplicate group in this order is the one kept.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ra = records[a];
    const auto& rb = records[b];
    if (ra.abstract.size() != rb.abstract.size()) return ra.abstract.size() > rb.abstract.size();
    return ra.id < rb.id;
  });

  std::vector<bool> removed(n, false);
  DedupReport report;
  report.input_count = n;
  auto merge = [&](std::size_t kept, std::size_t gone, MergeReason why) {
    removed[gone] = true;
    report.merges.push_back({records[kept].id, records[gone].id, why});
  };

  {
    std::unordered_map<std::string, std::size_t> by_doi;
    for (auto i : order) {
      const auto& doi = records[i].doi;
      if (!doi || doi->empty()) continue;
      auto [it, fresh] = by_doi.emplace(*doi, i);
      if (!fresh) merge(it->second, i, MergeReason::doi_exact);
    }
  }

  std::vector<std::string> keys(n);
  for (std::size_t i = 0; i < n; ++i) keys[i] = text::match_key(records[i].title);

  {
    std::map<std::pair<int, std::string>, std::size_t> by_title;
    for (auto i : order) {
      if (removed[i] || keys[i].empty()) continue;
      auto [it, fresh] = by_title.emplace(std::make_pair(records[i].year, keys[i]), i);
      if (!fresh) merge(it->second, i, MergeReason::title_exact);
    }
  }

  {
    std::map<int, std::vector<std::size_t>> kept_by_year;
    for (auto i : order) {
      if (removed[i] || keys[i].empty()) continue;
      auto& kept = kept_by_year[records[i].year];
      const auto& key = keys[i];
      bool merged = false;
      for (auto k : kept) {
        const auto& other = keys[k];
        const double longest = static_cast<double>(std::max(key.size(), other.size()));
        const double len_gap = static_cast<double>(key.size() > other.size() ? key.size() - other.size()
                                                                             : other.size() - key.size());
        // Edit distance is at least the length gap, so this bound is exact.
        if (1.0 - len_gap / longest < title_sim_threshold) continue;
        if (text::similarity(key, other) >= title_sim_threshold) {
          merge(k, i, MergeReason::title_fuzzy);
          merged = true;
          break;
        }
      }
      if (!merged) kept.push_back(i);
    }
  }

  DedupResult result;
  for (std::size_t i = 0; i < n; ++i)
    if (!removed[i]) result.records.push_back(records[i]);
  report.output_count = result.records.size();
  result.report = std::move(report);
  return result;
}

CorpusStats corpus_stats(const std::vector<BiblioRecord>& records) {
  CorpusStats s;
  s.count = records.size();
  for (const auto& r : records) {
    ++s.per_year[r.year];
    ++s.per_source[std::string(to_string(r.source))];
  }
  return s;
}

ordered_json to_json(const BiblioRecord& r) {
  ordered_json j;
  j["id"] = r.id;
  j["source"] = to_string(r.source);
  j["doi"] = r.doi ? ordered_json(*r.doi) : ordered_json(nullptr);
  j["title"] = r.title;
  j["abstract"] = r.abstract;
  j["year"] = r.year;
  j["venue"] = r.venue ? ordered_json(*r.venue) : ordered_json(nullptr);
  j["authors"] = r.authors;
  return j;
}

void write_corpus(const std::filesystem::path& path, const std::vector<BiblioRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  for (const auto& r : records) out << to_json(r).dump() << '\n';
}

std::vector<BiblioRecord> read_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open corpus " + path.string());
  auto parsed = parse_records(in, Format::jsonl);
  if (!parsed.rejects.empty()) {
    const auto& r = parsed.rejects.front();
    throw InputError(path.string() + ":" + std::to_string(r.row) + ": " + r.reason);
  }
  return std::move(parsed.records);
}

ordered_json to_json(const DedupReport& report) {
  ordered_json j;
  j["input_count"] = report.input_count;
  j["output_count"] = report.output_count;
  j["merges"] = ordered_json::array();
  for (const auto& m : report.merges) {
    ordered_json e;
    e["kept_id"] = m.kept_id;
    e["removed_id"] = m.removed_id;
    e["reason"] = to_string(m.reason);
    j["merges"].push_back(std::move(e));
  }
  return j;
}

ordered_json to_json(const CorpusStats& stats) {
  ordered_json j;
  j["count"] = stats.count;
  ordered_json years = ordered_json::object();
  for (const auto& [y, c] : stats.per_year) years[std::to_string(y)] = c;
  j["per_year"] = std::move(years);
  ordered_json sources = ordered_json::object();
  for (const auto& [s, c] : stats.per_source) sources[s] = c;
  j["per_source"] = std::move(sources);
  return j;
}

}  // namespace tmc::ingest
