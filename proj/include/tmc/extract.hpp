#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tmc/ingest.hpp"

namespace tmc::extract {

using MethodSet = std::set<std::string>;
// doc_id -> distinct canonical method names
using DocMethods = std::map<std::string, MethodSet>;

// Lowercase + whitespace collapse; the form every variant and searched text is matched in.
std::string normalize_variant(std::string_view s);

struct Match {
  std::size_t start = 0;  // offsets into the searched (normalized) text
  std::size_t end = 0;
  std::size_t canonical = 0;  // index into MethodLexicon::canonicals()
};

// Canonical method names with their surface variants. Immutable once built; matching
// is leftmost-longest, non-overlapping, on word boundaries.
class MethodLexicon {
 public:
  // Throws InputError on an empty lexicon, an empty variant, or a variant claimed by two
  // canonicals (message names both).
  static MethodLexicon compile(const std::map<std::string, std::vector<std::string>>& entries);

  const std::vector<std::string>& canonicals() const { return canonicals_; }
  std::size_t variant_count() const { return variant_to_canonical_.size(); }
  // Exact lookup of an already-normalized variant.
  std::optional<std::size_t> lookup(std::string_view normalized) const;
  const std::map<std::string, std::size_t>& variants() const { return variant_to_canonical_; }

  std::vector<Match> scan(std::string_view normalized) const;

 private:
  struct Node {
    std::map<char, std::size_t> next;
    std::optional<std::size_t> canonical;
  };
  void insert(const std::string& variant, std::size_t canonical);

  std::vector<std::string> canonicals_;
  std::map<std::string, std::size_t> variant_to_canonical_;
  std::vector<Node> trie_{Node{}};
};

// JSON object {canonical: [variants...]} or two-column CSV (canonical,variant); the format is
// picked by extension (.csv) or otherwise parsed as JSON.
MethodLexicon compile_lexicon(const std::filesystem::path& path);

struct MethodMention {
  std::string doc_id;
  std::string canonical;
  std::string surface;
  std::size_t char_start = 0;  // byte offsets into title + " " + abstract
  std::size_t char_end = 0;
};

struct RuleExtraction {
  MethodSet methods;
  std::vector<MethodMention> mentions;
};

// Searched text is title + " " + abstract.
std::string searched_text(const ingest::BiblioRecord& doc);
RuleExtraction rule_extract(const ingest::BiblioRecord& doc, const MethodLexicon& lexicon);

struct CandidateReject {
  std::size_t line = 0;
  std::string reason;
};

struct CandidateImport {
  std::map<std::string, std::vector<std::string>> candidates;  // order kept per document
  std::vector<CandidateReject> rejects;
  std::vector<std::string> unknown_doc_ids;  // only filled when a known-id set is given
};

CandidateImport import_candidates(const std::filesystem::path& path,
                                  const std::set<std::string>* known_doc_ids = nullptr);
CandidateImport import_candidates(std::istream& in, const std::set<std::string>* known_doc_ids = nullptr);

struct UnmappedCandidate {
  std::string doc_id;
  std::string raw;
};

struct Standardized {
  DocMethods methods;
  std::vector<UnmappedCandidate> unmapped;
};

// Exact variant lookup first, then a leftmost-longest scan inside the candidate string.
// Misses are dropped, or kept verbatim as provisional canonicals with keep_unmapped.
Standardized standardize_candidates(const std::map<std::string, std::vector<std::string>>& candidates,
                                    const MethodLexicon& lexicon, bool keep_unmapped = false);

// LLM candidates are the recall source and the lexicon the precision gate. With
// fallback_rule the rule_extract set is unioned in.
MethodSet llmrule_extract(const ingest::BiblioRecord& doc, const std::vector<std::string>* candidates,
                          const MethodLexicon& lexicon, bool fallback_rule = false);

struct ExtractionEval {
  std::size_t tp = 0, fp = 0, fn = 0;
  double precision = 0, recall = 0, f1 = 0;  // percentages, unrounded
  std::vector<std::string> docs_missing_from_gold;
};

double f1_score(double precision, double recall);

// Micro-averaged over (doc, canonical) pairs. Throws InputError on an empty gold mapping.
ExtractionEval evaluate_extraction(const DocMethods& predicted, const DocMethods& gold);

// {doc_id, methods:[...]} JSON Lines, shared by extraction output and gold files.
void write_doc_methods(const std::filesystem::path& path, const DocMethods& methods);
DocMethods read_doc_methods(const std::filesystem::path& path);

}  // namespace tmc::extract
