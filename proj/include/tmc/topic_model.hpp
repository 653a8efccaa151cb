#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "tmc/ingest.hpp"

namespace tmc::topics {

inline constexpr std::size_t kDefaultMinTokenLength = 3;
inline constexpr int kFoldInSweeps = 100;
inline constexpr std::size_t kDefaultCoherenceTopN = 10;

const std::set<std::string>& default_stopwords();

// Lowercase alphanumeric runs of title + " " + abstract, stopwords and short tokens removed.
std::vector<std::string> tokenize(const ingest::BiblioRecord& doc, const std::set<std::string>& stopwords,
                                  std::size_t min_len = kDefaultMinTokenLength);

class Vocabulary {
 public:
  int add(const std::string& word);
  // -1 for words outside the vocabulary.
  int find(const std::string& word) const;
  const std::string& word(int id) const { return words_.at(static_cast<std::size_t>(id)); }
  std::size_t size() const { return words_.size(); }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, int> index_;
};

// Token ids per document; -1 marks an out-of-vocabulary token in held-out text.
using TokenDoc = std::vector<int>;

struct TokenCorpus {
  std::vector<std::string> doc_ids;
  std::vector<TokenDoc> docs;
  Vocabulary vocab;
};

// Vocabulary ids follow first occurrence in corpus order.
TokenCorpus build_token_corpus(const std::vector<ingest::BiblioRecord>& records,
                               const std::set<std::string>& stopwords = default_stopwords(),
                               std::size_t min_len = kDefaultMinTokenLength);
TokenCorpus build_token_corpus(const std::vector<std::string>& doc_ids,
                               const std::vector<std::vector<std::string>>& token_lists);
// Maps tokens onto an existing vocabulary (unknown words become -1).
TokenDoc encode(const std::vector<std::string>& tokens, const Vocabulary& vocab);

struct TopicModelConfig {
  int K = 1;
  std::optional<double> alpha;  // default 50/K
  double beta = 0.01;
  int iterations = 1000;
  std::optional<int> burn_in;  // default 4/5 of iterations
  std::uint64_t seed = 0;

  double alpha_value() const { return alpha.value_or(50.0 / K); }
  int burn_in_value() const { return burn_in.value_or(iterations * 4 / 5); }
  // Throws ConfigError when a field is out of range.
  void validate() const;
};

// Doubles are built from the top 53 bits of mt19937_64 output so draws are identical on
// every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next();
  double uniform();  // [0, 1)
  int below(int n);  // [0, n)

 private:
  std::mt19937_64 engine_;
};

// Point estimates of a topic model. Immutable after construction.
class TopicModel {
 public:
  TopicModel(int K, int V, double alpha, double beta, std::vector<double> phi, std::vector<double> theta,
             std::vector<double> unseen_phi, std::vector<std::int64_t> topic_word_counts = {});

  int K() const { return K_; }
  int V() const { return V_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  std::size_t num_docs() const { return theta_.size() / static_cast<std::size_t>(K_); }

  double phi(int topic, int word) const;  // word == -1 gives the smoothed unseen-word mass
  double theta(std::size_t doc, int topic) const {
    return theta_[doc * static_cast<std::size_t>(K_) + static_cast<std::size_t>(topic)];
  }
  std::vector<double> theta_row(std::size_t doc) const;
  // Words of a topic with positive count (all words when counts are absent), by descending
  // phi then ascending id.
  std::vector<int> top_words(int topic, std::size_t n) const;

 private:
  int K_, V_;
  double alpha_, beta_;
  std::vector<double> phi_;    // K x V
  std::vector<double> theta_;  // D x K
  std::vector<double> unseen_phi_;
  std::vector<std::int64_t> counts_;  // K x V, may be empty
};

// phi = 1/V for every topic and word, theta uniform over `docs` documents.
TopicModel uniform_model(int K, int V, std::size_t docs);

// Collapsed Gibbs sampling; estimates come from the final chain state.
// Throws InputError when every document is empty.
TopicModel fit_topic_model(const TokenCorpus& corpus, const TopicModelConfig& config);

struct DocTopicDist {
  std::string doc_id;
  std::vector<double> probs;
};

struct TopicAssignment {
  std::string doc_id;
  int topic_id = 0;
  bool operator==(const TopicAssignment&) const = default;
};

std::vector<DocTopicDist> doc_topic_dists(const TopicModel& model, const std::vector<std::string>& doc_ids);
// Argmax with lowest-index tie-break.
TopicAssignment assign_dominant_topic(const DocTopicDist& dist);
std::vector<std::size_t> topic_doc_counts(const std::vector<TopicAssignment>& assignments, int K);

// Fold-in Gibbs on held-out documents with phi fixed; theta from the final state.
std::vector<std::vector<double>> fold_in(const TopicModel& model, const std::vector<TokenDoc>& docs,
                                         std::uint64_t seed, int sweeps = kFoldInSweeps);

// exp(-mean log p(w)) over held-out tokens. Each document is split by token position:
// even positions are folded in to estimate theta, odd positions are scored. Single-token
// documents are scored against the prior (uniform theta).
double perplexity(const TopicModel& model, const std::vector<TokenDoc>& heldout, std::uint64_t seed,
                  int sweeps = kFoldInSweeps);

struct Coherence {
  double mean = 0;
  std::vector<double> per_topic;
  std::vector<int> short_topics;  // topics with fewer than top_n distinct words
};

// UMass: sum over word pairs of log((D(w_lo, w_hi) + 1) / D(w_hi)), w_hi the higher-ranked
// word, averaged over topics; D counts documents of `docs`.
Coherence coherence_umass(const TopicModel& model, const std::vector<TokenDoc>& docs,
                          std::size_t top_n = kDefaultCoherenceTopN);

struct TopicQualityPoint {
  int K = 0;
  double perplexity = 0;
  double coherence = 0;
};

struct SweepResult {
  std::vector<TopicQualityPoint> points;  // in the order of the K list
  int selected_K = 0;
};

// Picks the K minimizing rank(perplexity) + rank(coherence); ties go to the smaller K.
int select_topic_count(const std::vector<TopicQualityPoint>& points);

// Every fifth non-empty document (index % 5 == 4) is held out for perplexity; corpora with
// fewer than five non-empty documents are scored on the training set. Fit seed is seed + K.
SweepResult sweep_topic_counts(const TokenCorpus& corpus, const std::vector<int>& k_values,
                               const TopicModelConfig& config_template, unsigned threads = 0);

void write_quality_table(const std::filesystem::path& path, const SweepResult& sweep);

enum class ImportMode { argmax_rows, full_dist };

struct AssignmentReject {
  std::size_t line = 0;
  std::string reason;
};

struct ImportedAssignments {
  std::vector<TopicAssignment> assignments;  // remapped ids when remapping is on (argmax rows only)
  std::vector<DocTopicDist> dists;           // full_dist mode only
  std::map<int, int> remap;                  // original id -> contiguous id
  std::size_t unassigned_count = 0;
  std::vector<AssignmentReject> rejects;
  int K = 0;
};

// CSV doc_id,topic_id[,probability] (argmax_rows) or JSON Lines {doc_id, dist:[...]}
// (full_dist). Topic -1 marks an unassigned outlier. Throws InputError when nothing is assigned.
ImportedAssignments import_assignments(const std::filesystem::path& path, ImportMode mode, bool remap = true);
ImportedAssignments import_assignments(std::istream& in, ImportMode mode, bool remap = true);

struct AssignmentRow {
  TopicAssignment assignment;
  std::optional<double> probability;
};
void write_assignments(const std::filesystem::path& path, const std::vector<AssignmentRow>& rows);

}  // namespace tmc::topics
