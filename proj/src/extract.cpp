#include "tmc/extract.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tmc/csv.hpp"
#include "tmc/error.hpp"
#include "tmc/text.hpp"

namespace tmc::extract {

using nlohmann::json;

std::string normalize_variant(std::string_view s) { return text::lower(text::collapse_whitespace(s)); }

namespace {

// Normalized buffer plus the raw offset of every normalized byte.
struct NormalizedText {
  std::string text;
  std::vector<std::size_t> raw_offset;
};

NormalizedText normalize_with_offsets(std::string_view raw) {
  NormalizedText out;
  out.text.reserve(raw.size());
  out.raw_offset.reserve(raw.size());
  bool pending_space = false;
  std::size_t space_at = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const char c = raw[i];
    if (text::is_space(c)) {
      if (!out.text.empty() && !pending_space) {
        pending_space = true;
        space_at = i;
      }
      continue;
    }
    if (pending_space) {
      out.text.push_back(' ');
      out.raw_offset.push_back(space_at);
      pending_space = false;
    }
    out.text.push_back(text::fold(c));
    out.raw_offset.push_back(i);
  }
  return out;
}

}  // namespace

void MethodLexicon::insert(const std::string& variant, std::size_t canonical) {
  std::size_t node = 0;
  for (char c : variant) {
    auto it = trie_[node].next.find(c);
    if (it == trie_[node].next.end()) {
      trie_.push_back(Node{});
      it = trie_[node].next.emplace(c, trie_.size() - 1).first;
    }
    node = it->second;
  }
  trie_[node].canonical = canonical;
}

MethodLexicon MethodLexicon::compile(const std::map<std::string, std::vector<std::string>>& entries) {
  if (entries.empty()) throw InputError("method lexicon is empty");
  MethodLexicon lex;
  for (const auto& [name, variants] : entries) {
    const auto canonical = text::collapse_whitespace(name);
    if (canonical.empty()) throw InputError("method lexicon has an empty canonical name");
    const std::size_t idx = lex.canonicals_.size();
    lex.canonicals_.push_back(canonical);

    std::vector<std::string> all{canonical};
    all.insert(all.end(), variants.begin(), variants.end());
    for (const auto& v : all) {
      const auto norm = normalize_variant(v);
      if (norm.empty()) throw InputError("empty variant for method '" + canonical + "'");
      auto [it, fresh] = lex.variant_to_canonical_.emplace(norm, idx);
      if (!fresh && it->second != idx)
        throw InputError("ambiguous variant '" + norm + "' claimed by both '" +
                         lex.canonicals_[it->second] + "' and '" + canonical + "'");
    }
  }
  for (const auto& [variant, idx] : lex.variant_to_canonical_) lex.insert(variant, idx);
  return lex;
}

std::optional<std::size_t> MethodLexicon::lookup(std::string_view normalized) const {
  const auto it = variant_to_canonical_.find(std::string(normalized));
  if (it == variant_to_canonical_.end()) return std::nullopt;
  return it->second;
}

std::vector<Match> MethodLexicon::scan(std::string_view s) const {
  std::vector<Match> found;
  const std::size_t n = s.size();
  std::size_t i = 0;
  while (i < n) {
    if (i > 0 && text::is_word_char(s[i - 1])) {
      ++i;
      continue;
    }
    std::size_t node = 0;
    std::optional<Match> best;
    for (std::size_t j = i; j < n; ++j) {
      const auto it = trie_[node].next.find(s[j]);
      if (it == trie_[node].next.end()) break;
      node = it->second;
      const std::size_t end = j + 1;
      if (trie_[node].canonical && (end == n || !text::is_word_char(s[end])))
        best = Match{i, end, *trie_[node].canonical};
    }
    if (best) {
      found.push_back(*best);
      i = best->end;
    } else {
      ++i;
    }
  }
  return found;
}

MethodLexicon compile_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open lexicon " + path.string());
  std::map<std::string, std::vector<std::string>> entries;

  if (text::lower(path.extension().string()) == ".csv") {
    csv::Reader reader(in);
    bool first = true;
    while (auto row = reader.next()) {
      if (row->malformed || row->fields.size() != 2)
        throw InputError(path.string() + ":" + std::to_string(row->line) + ": expected canonical,variant");
      if (first) {
        first = false;
        if (text::lower(text::trim(row->fields[0])) == "canonical") continue;
      }
      entries[text::trim(row->fields[0])].push_back(row->fields[1]);
    }
  } else {
    json doc;
    try {
      in >> doc;
    } catch (const json::exception& e) {
      throw InputError("lexicon " + path.string() + " is not valid JSON: " + e.what());
    }
    if (!doc.is_object()) throw InputError("lexicon " + path.string() + " must be a JSON object");
    for (const auto& [name, variants] : doc.items()) {
      auto& list = entries[name];
      if (!variants.is_array()) throw InputError("lexicon entry '" + name + "' must be an array");
      for (const auto& v : variants) {
        if (!v.is_string()) throw InputError("lexicon entry '" + name + "' has a non-string variant");
        list.push_back(v.get<std::string>());
      }
    }
  }
  return MethodLexicon::compile(entries);
}

std::string searched_text(const ingest::BiblioRecord& doc) { return doc.title + " " + doc.abstract; }

RuleExtraction rule_extract(const ingest::BiblioRecord& doc, const MethodLexicon& lexicon) {
  RuleExtraction out;
  const auto raw = searched_text(doc);
  const auto norm = normalize_with_offsets(raw);
  for (const auto& m : lexicon.scan(norm.text)) {
    const auto& canonical = lexicon.canonicals()[m.canonical];
    const std::size_t start = norm.raw_offset[m.start];
    const std::size_t end = norm.raw_offset[m.end - 1] + 1;
    out.methods.insert(canonical);
    out.mentions.push_back({doc.id, canonical, raw.substr(start, end - start), start, end});
  }
  return out;
}

CandidateImport import_candidates(std::istream& in, const std::set<std::string>* known_doc_ids) {
  CandidateImport out;
  std::set<std::string> unknown;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (text::trim(line).empty()) continue;
    try {
      const auto obj = json::parse(line);
      const auto& id = obj.at("doc_id");
      const auto& list = obj.at("candidates");
      if (!id.is_string() || !list.is_array()) throw std::invalid_argument("bad field types");
      std::vector<std::string> cands;
      for (const auto& c : list) cands.push_back(c.get<std::string>());
      const auto doc_id = id.get<std::string>();
      auto& slot = out.candidates[doc_id];
      slot.insert(slot.end(), cands.begin(), cands.end());
      if (known_doc_ids && !known_doc_ids->count(doc_id) && unknown.insert(doc_id).second)
        out.unknown_doc_ids.push_back(doc_id);
    } catch (const std::exception& e) {
      out.rejects.push_back({n, "malformed candidate line"});
    }
  }
  return out;
}

CandidateImport import_candidates(const std::filesystem::path& path, const std::set<std::string>* known_doc_ids) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open candidates " + path.string());
  return import_candidates(in, known_doc_ids);
}

namespace {

// Canonicals for one raw candidate; empty when nothing maps.
std::vector<std::size_t> standardize_one(const std::string& raw, const MethodLexicon& lexicon) {
  const auto norm = normalize_variant(raw);
  if (auto hit = lexicon.lookup(norm)) return {*hit};
  std::vector<std::size_t> out;
  for (const auto& m : lexicon.scan(norm)) out.push_back(m.canonical);
  return out;
}

}  // namespace

Standardized standardize_candidates(const std::map<std::string, std::vector<std::string>>& candidates,
                                    const MethodLexicon& lexicon, bool keep_unmapped) {
  Standardized out;
  for (const auto& [doc_id, raws] : candidates) {
    auto& set = out.methods[doc_id];
    for (const auto& raw : raws) {
      const auto hits = standardize_one(raw, lexicon);
      for (auto h : hits) set.insert(lexicon.canonicals()[h]);
      if (hits.empty()) {
        out.unmapped.push_back({doc_id, raw});
        if (keep_unmapped && !text::trim(raw).empty()) set.insert(raw);
      }
    }
  }
  return out;
}

MethodSet llmrule_extract(const ingest::BiblioRecord& doc, const std::vector<std::string>* candidates,
                          const MethodLexicon& lexicon, bool fallback_rule) {
  MethodSet out;
  if (candidates) {
    for (const auto& raw : *candidates)
      for (auto h : standardize_one(raw, lexicon)) out.insert(lexicon.canonicals()[h]);
  }
  if (fallback_rule) {
    auto rule = rule_extract(doc, lexicon);
    out.merge(rule.methods);
  }
  return out;
}

double f1_score(double precision, double recall) {
  return precision + recall > 0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

ExtractionEval evaluate_extraction(const DocMethods& predicted, const DocMethods& gold) {
  if (gold.empty()) throw InputError("gold annotations are empty");
  ExtractionEval ev;
  static const MethodSet kNone;
  for (const auto& [doc, pred] : predicted) {
    const auto it = gold.find(doc);
    if (it == gold.end()) ev.docs_missing_from_gold.push_back(doc);
    const auto& truth = it == gold.end() ? kNone : it->second;
    for (const auto& m : pred) (truth.count(m) ? ev.tp : ev.fp) += 1;
  }
  for (const auto& [doc, truth] : gold) {
    const auto it = predicted.find(doc);
    for (const auto& m : truth)
      if (it == predicted.end() || !it->second.count(m)) ++ev.fn;
  }
  if (ev.tp + ev.fp > 0) ev.precision = 100.0 * static_cast<double>(ev.tp) / static_cast<double>(ev.tp + ev.fp);
  if (ev.tp + ev.fn > 0) ev.recall = 100.0 * static_cast<double>(ev.tp) / static_cast<double>(ev.tp + ev.fn);
  ev.f1 = f1_score(ev.precision, ev.recall);
  return ev;
}

void write_doc_methods(const std::filesystem::path& path, const DocMethods& methods) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  for (const auto& [doc, set] : methods) {
    nlohmann::ordered_json j;
    j["doc_id"] = doc;
    j["methods"] = std::vector<std::string>(set.begin(), set.end());
    out << j.dump() << '\n';
  }
}

DocMethods read_doc_methods(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  DocMethods out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (text::trim(line).empty()) continue;
    try {
      const auto obj = json::parse(line);
      auto& set = out[obj.at("doc_id").get<std::string>()];
      for (const auto& m : obj.at("methods")) set.insert(m.get<std::string>());
    } catch (const std::exception&) {
      throw InputError(path.string() + ":" + std::to_string(n) + ": expected {doc_id, methods:[...]}");
    }
  }
  return out;
}

}  // namespace tmc::extract
