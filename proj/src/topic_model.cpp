#include "tmc/topic_model.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "tmc/csv.hpp"
#include "tmc/error.hpp"
#include "tmc/text.hpp"

namespace tmc::topics {

const std::set<std::string>& default_stopwords() {
  static const std::set<std::string> words = {
      "a",     "about", "above", "after", "again", "against", "all",   "also",  "am",    "an",
      "and",   "any",   "are",   "as",    "at",    "be",      "been",  "being", "below", "between",
      "both",  "but",   "by",    "can",   "could", "did",     "do",    "does",  "doing", "down",
      "during", "each", "few",   "for",   "from",  "further", "had",   "has",   "have",  "having",
      "he",    "her",   "here",  "hers",  "him",   "his",     "how",   "however", "i",   "if",
      "in",    "into",  "is",    "it",    "its",   "itself",  "may",   "more",  "most",  "much",
      "must",  "new",   "no",    "nor",   "not",   "of",      "off",   "on",    "once",  "one",
      "only",  "or",    "other", "our",   "ours",  "out",     "over",  "own",   "paper", "same",
      "she",   "should", "so",   "some",  "such",  "than",    "that",  "the",   "their", "theirs",
      "them",  "then",  "there", "these", "they",  "this",    "those", "through", "thus", "to",
      "too",   "two",   "under", "until", "up",    "upon",    "use",   "used",  "using", "very",
      "was",   "we",    "were",  "what",  "when",  "where",   "which", "while", "who",   "whom",
      "why",   "will",  "with",  "within", "would", "you",    "your",  "yours", "study", "based"};
  return words;
}

std::vector<std::string> tokenize(const ingest::BiblioRecord& doc, const std::set<std::string>& stopwords,
                                  std::size_t min_len) {
  std::vector<std::string> tokens;
  const std::string joined = doc.title + " " + doc.abstract;
  std::string cur;
  auto flush = [&] {
    if (cur.size() >= min_len && !stopwords.count(cur)) tokens.push_back(cur);
    cur.clear();
  };
  for (char c : joined) {
    if (text::is_word_char(c))
      cur.push_back(text::fold(c));
    else
      flush();
  }
  flush();
  return tokens;
}

int Vocabulary::add(const std::string& word) {
  auto [it, fresh] = index_.emplace(word, static_cast<int>(words_.size()));
  if (fresh) words_.push_back(word);
  return it->second;
}

int Vocabulary::find(const std::string& word) const {
  const auto it = index_.find(word);
  return it == index_.end() ? -1 : it->second;
}

TokenCorpus build_token_corpus(const std::vector<std::string>& doc_ids,
                               const std::vector<std::vector<std::string>>& token_lists) {
  TokenCorpus c;
  c.doc_ids = doc_ids;
  c.docs.reserve(token_lists.size());
  for (const auto& tokens : token_lists) {
    TokenDoc d;
    d.reserve(tokens.size());
    for (const auto& t : tokens) d.push_back(c.vocab.add(t));
    c.docs.push_back(std::move(d));
  }
  return c;
}

TokenCorpus build_token_corpus(const std::vector<ingest::BiblioRecord>& records,
                               const std::set<std::string>& stopwords, std::size_t min_len) {
  std::vector<std::string> ids;
  std::vector<std::vector<std::string>> lists;
  for (const auto& r : records) {
    ids.push_back(r.id);
    lists.push_back(tokenize(r, stopwords, min_len));
  }
  return build_token_corpus(ids, lists);
}

TokenDoc encode(const std::vector<std::string>& tokens, const Vocabulary& vocab) {
  TokenDoc d;
  d.reserve(tokens.size());
  for (const auto& t : tokens) d.push_back(vocab.find(t));
  return d;
}

void TopicModelConfig::validate() const {
  if (K < 1) throw ConfigError("topic count K must be >= 1");
  if (!(alpha_value() > 0)) throw ConfigError("alpha must be positive");
  if (!(beta > 0)) throw ConfigError("beta must be positive");
  if (iterations < 1) throw ConfigError("iterations must be >= 1");
  if (burn_in_value() < 0 || burn_in_value() >= iterations) throw ConfigError("burn-in must lie in [0, iterations)");
}

// mt19937_64's output sequence is fixed by the standard; the distributions are not, so
// draws are derived from raw engine output.
Rng::Rng(std::uint64_t seed) : engine_(seed) {}

std::uint64_t Rng::next() { return engine_(); }

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

int Rng::below(int n) {
  const int v = static_cast<int>(uniform() * n);
  return std::min(v, n - 1);
}

TopicModel::TopicModel(int K, int V, double alpha, double beta, std::vector<double> phi, std::vector<double> theta,
                       std::vector<double> unseen_phi, std::vector<std::int64_t> topic_word_counts)
    : K_(K),
      V_(V),
      alpha_(alpha),
      beta_(beta),
      phi_(std::move(phi)),
      theta_(std::move(theta)),
      unseen_phi_(std::move(unseen_phi)),
      counts_(std::move(topic_word_counts)) {
  const auto kv = static_cast<std::size_t>(K) * static_cast<std::size_t>(V);
  if (K < 1 || V < 1 || phi_.size() != kv || theta_.size() % static_cast<std::size_t>(K) != 0 ||
      unseen_phi_.size() != static_cast<std::size_t>(K) || (!counts_.empty() && counts_.size() != kv))
    throw std::invalid_argument("inconsistent topic model dimensions");
}

double TopicModel::phi(int topic, int word) const {
  if (word < 0) return unseen_phi_[static_cast<std::size_t>(topic)];
  return phi_[static_cast<std::size_t>(topic) * static_cast<std::size_t>(V_) + static_cast<std::size_t>(word)];
}

std::vector<double> TopicModel::theta_row(std::size_t doc) const {
  const auto k = static_cast<std::size_t>(K_);
  return {theta_.begin() + static_cast<std::ptrdiff_t>(doc * k),
          theta_.begin() + static_cast<std::ptrdiff_t>((doc + 1) * k)};
}

std::vector<int> TopicModel::top_words(int topic, std::size_t n) const {
  std::vector<int> words;
  for (int w = 0; w < V_; ++w) {
    if (counts_.empty() ||
        counts_[static_cast<std::size_t>(topic) * static_cast<std::size_t>(V_) + static_cast<std::size_t>(w)] > 0)
      words.push_back(w);
  }
  std::stable_sort(words.begin(), words.end(), [&](int a, int b) { return phi(topic, a) > phi(topic, b); });
  if (words.size() > n) words.resize(n);
  return words;
}

TopicModel uniform_model(int K, int V, std::size_t docs) {
  return TopicModel(K, V, 1.0, 1.0, std::vector<double>(static_cast<std::size_t>(K) * V, 1.0 / V),
                    std::vector<double>(docs * static_cast<std::size_t>(K), 1.0 / K),
                    std::vector<double>(static_cast<std::size_t>(K), 1.0 / V));
}

TopicModel fit_topic_model(const TokenCorpus& corpus, const TopicModelConfig& config) {
  config.validate();
  const int K = config.K;
  const int V = static_cast<int>(corpus.vocab.size());
  const std::size_t D = corpus.docs.size();
  std::size_t total_tokens = 0;
  for (const auto& d : corpus.docs) total_tokens += d.size();
  if (total_tokens == 0 || V == 0) throw InputError("topic model input has no tokens");
  for (const auto& d : corpus.docs)
    for (int w : d)
      if (w < 0 || w >= V) throw InputError("training corpus contains out-of-vocabulary token ids");

  const double alpha = config.alpha_value();
  const double beta = config.beta;
  const double vbeta = V * beta;
  const auto k = static_cast<std::size_t>(K);

  std::vector<std::int64_t> n_dk(D * k, 0), n_kw(k * static_cast<std::size_t>(V), 0), n_k(k, 0);
  std::vector<std::vector<int>> z(D);
  Rng rng(config.seed);

  for (std::size_t d = 0; d < D; ++d) {
    z[d].resize(corpus.docs[d].size());
    for (std::size_t i = 0; i < corpus.docs[d].size(); ++i) {
      const int t = rng.below(K);
      const int w = corpus.docs[d][i];
      z[d][i] = t;
      ++n_dk[d * k + t];
      ++n_kw[static_cast<std::size_t>(t) * V + w];
      ++n_k[t];
    }
  }

  std::vector<double> cumulative(k);
  for (int sweep = 0; sweep < config.iterations; ++sweep) {
    for (std::size_t d = 0; d < D; ++d) {
      const auto& doc = corpus.docs[d];
      for (std::size_t i = 0; i < doc.size(); ++i) {
        const int w = doc[i];
        int t = z[d][i];
        --n_dk[d * k + t];
        --n_kw[static_cast<std::size_t>(t) * V + w];
        --n_k[t];

        double total = 0;
        for (std::size_t j = 0; j < k; ++j) {
          total += (static_cast<double>(n_dk[d * k + j]) + alpha) *
                   (static_cast<double>(n_kw[j * V + w]) + beta) / (static_cast<double>(n_k[j]) + vbeta);
          cumulative[j] = total;
        }
        const double u = rng.uniform() * total;
        t = static_cast<int>(std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
        t = std::min(t, K - 1);

        z[d][i] = t;
        ++n_dk[d * k + t];
        ++n_kw[static_cast<std::size_t>(t) * V + w];
        ++n_k[t];
      }
    }
  }

  std::vector<double> phi(k * static_cast<std::size_t>(V)), unseen(k);
  for (std::size_t j = 0; j < k; ++j) {
    const double denom = static_cast<double>(n_k[j]) + vbeta;
    for (int w = 0; w < V; ++w) phi[j * V + w] = (static_cast<double>(n_kw[j * V + w]) + beta) / denom;
    unseen[j] = beta / denom;
  }
  std::vector<double> theta(D * k);
  for (std::size_t d = 0; d < D; ++d) {
    const double denom = static_cast<double>(corpus.docs[d].size()) + K * alpha;
    for (std::size_t j = 0; j < k; ++j) theta[d * k + j] = (static_cast<double>(n_dk[d * k + j]) + alpha) / denom;
  }
  return TopicModel(K, V, alpha, beta, std::move(phi), std::move(theta), std::move(unseen), std::move(n_kw));
}

std::vector<DocTopicDist> doc_topic_dists(const TopicModel& model, const std::vector<std::string>& doc_ids) {
  if (doc_ids.size() != model.num_docs()) throw std::invalid_argument("doc id count does not match the model");
  std::vector<DocTopicDist> out;
  out.reserve(doc_ids.size());
  for (std::size_t d = 0; d < doc_ids.size(); ++d) out.push_back({doc_ids[d], model.theta_row(d)});
  return out;
}

TopicAssignment assign_dominant_topic(const DocTopicDist& dist) {
  if (dist.probs.empty()) throw std::invalid_argument("empty topic distribution");
  const auto it = std::max_element(dist.probs.begin(), dist.probs.end());
  return {dist.doc_id, static_cast<int>(it - dist.probs.begin())};
}

std::vector<std::size_t> topic_doc_counts(const std::vector<TopicAssignment>& assignments, int K) {
  std::vector<std::size_t> counts(static_cast<std::size_t>(std::max(K, 0)), 0);
  for (const auto& a : assignments) {
    if (a.topic_id < 0 || a.topic_id >= K)
      throw InputError("topic id " + std::to_string(a.topic_id) + " of document " + a.doc_id + " outside [0, " +
                       std::to_string(K) + ")");
    ++counts[static_cast<std::size_t>(a.topic_id)];
  }
  return counts;
}

std::vector<std::vector<double>> fold_in(const TopicModel& model, const std::vector<TokenDoc>& docs,
                                         std::uint64_t seed, int sweeps) {
  const int K = model.K();
  const auto k = static_cast<std::size_t>(K);
  const double alpha = model.alpha();
  Rng rng(seed);
  std::vector<std::vector<double>> thetas;
  thetas.reserve(docs.size());
  std::vector<double> cumulative(k);
  for (const auto& doc : docs) {
    std::vector<std::int64_t> n(k, 0);
    std::vector<int> z(doc.size());
    for (std::size_t i = 0; i < doc.size(); ++i) {
      z[i] = rng.below(K);
      ++n[static_cast<std::size_t>(z[i])];
    }
    for (int s = 0; s < sweeps; ++s) {
      for (std::size_t i = 0; i < doc.size(); ++i) {
        --n[static_cast<std::size_t>(z[i])];
        double total = 0;
        for (std::size_t j = 0; j < k; ++j) {
          total += (static_cast<double>(n[j]) + alpha) * model.phi(static_cast<int>(j), doc[i]);
          cumulative[j] = total;
        }
        const double u = rng.uniform() * total;
        int t = static_cast<int>(std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
        z[i] = std::min(t, K - 1);
        ++n[static_cast<std::size_t>(z[i])];
      }
    }
    std::vector<double> theta(k);
    const double denom = static_cast<double>(doc.size()) + K * alpha;
    for (std::size_t j = 0; j < k; ++j) theta[j] = (static_cast<double>(n[j]) + alpha) / denom;
    thetas.push_back(std::move(theta));
  }
  return thetas;
}

double perplexity(const TopicModel& model, const std::vector<TokenDoc>& heldout, std::uint64_t seed, int sweeps) {
  std::vector<TokenDoc> observed(heldout.size()), scored(heldout.size());
  std::size_t n_scored = 0;
  for (std::size_t d = 0; d < heldout.size(); ++d) {
    for (std::size_t i = 0; i < heldout[d].size(); ++i) (i % 2 == 0 ? observed : scored)[d].push_back(heldout[d][i]);
    if (heldout[d].size() == 1) {
      // Nothing left to fold in; the single token is scored against the prior.
      scored[d] = std::move(observed[d]);
      observed[d].clear();
    }
    n_scored += scored[d].size();
  }
  if (n_scored == 0) throw InputError("held-out set has no tokens to score");

  const auto thetas = fold_in(model, observed, seed, sweeps);
  // Extended precision keeps a flat model at exactly V after rounding back to double.
  long double loglik = 0;
  for (std::size_t d = 0; d < heldout.size(); ++d) {
    for (int w : scored[d]) {
      long double p = 0;
      for (int j = 0; j < model.K(); ++j) p += static_cast<long double>(thetas[d][static_cast<std::size_t>(j)]) * model.phi(j, w);
      loglik += std::log(p);
    }
  }
  return static_cast<double>(std::exp(-loglik / static_cast<long double>(n_scored)));
}

Coherence coherence_umass(const TopicModel& model, const std::vector<TokenDoc>& docs, std::size_t top_n) {
  if (top_n < 2) throw ConfigError("coherence top_n must be >= 2");
  std::vector<std::vector<int>> doc_sets;
  doc_sets.reserve(docs.size());
  for (const auto& d : docs) {
    std::vector<int> s;
    for (int w : d)
      if (w >= 0) s.push_back(w);
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    doc_sets.push_back(std::move(s));
  }

  Coherence out;
  for (int t = 0; t < model.K(); ++t) {
    const auto top = model.top_words(t, top_n);
    if (top.size() < top_n) out.short_topics.push_back(t);
    const std::size_t m = top.size();
    std::vector<std::int64_t> single(m, 0), pair(m * m, 0);
    std::vector<std::size_t> present;
    for (const auto& s : doc_sets) {
      present.clear();
      for (std::size_t a = 0; a < m; ++a)
        if (std::binary_search(s.begin(), s.end(), top[a])) present.push_back(a);
      for (std::size_t x = 0; x < present.size(); ++x) {
        ++single[present[x]];
        for (std::size_t y = x + 1; y < present.size(); ++y) ++pair[present[x] * m + present[y]];
      }
    }
    double score = 0;
    for (std::size_t hi = 0; hi < m; ++hi) {
      for (std::size_t lo = hi + 1; lo < m; ++lo) {
        if (single[hi] == 0) continue;  // word absent from the scoring documents
        score += std::log((static_cast<double>(pair[hi * m + lo]) + 1.0) / static_cast<double>(single[hi]));
      }
    }
    out.per_topic.push_back(score);
  }
  out.mean = std::accumulate(out.per_topic.begin(), out.per_topic.end(), 0.0) / model.K();
  return out;
}

namespace {

// Competition ranks (1 = best); equal values share the better rank.
std::vector<int> ranks(const std::vector<double>& values, bool ascending) {
  std::vector<int> r(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    int better = 0;
    for (double v : values) better += ascending ? (v < values[i]) : (v > values[i]);
    r[i] = better + 1;
  }
  return r;
}

}  // namespace

int select_topic_count(const std::vector<TopicQualityPoint>& points) {
  if (points.empty()) throw ConfigError("topic-count sweep needs at least one K");
  std::vector<double> ppl, coh;
  for (const auto& p : points) {
    ppl.push_back(p.perplexity);
    coh.push_back(p.coherence);
  }
  const auto rp = ranks(ppl, true);
  const auto rc = ranks(coh, false);
  std::size_t best = 0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const int si = rp[i] + rc[i];
    const int sb = rp[best] + rc[best];
    if (si < sb || (si == sb && points[i].K < points[best].K)) best = i;
  }
  return points[best].K;
}

SweepResult sweep_topic_counts(const TokenCorpus& corpus, const std::vector<int>& k_values,
                               const TopicModelConfig& config_template, unsigned threads) {
  if (k_values.empty()) throw ConfigError("topic-count sweep needs at least one K");
  std::set<int> seen;
  for (int K : k_values) {
    if (K < 1) throw ConfigError("topic count K must be >= 1");
    if (!seen.insert(K).second) throw ConfigError("duplicate K " + std::to_string(K) + " in sweep list");
  }

  TokenCorpus train;
  train.vocab = corpus.vocab;
  std::vector<TokenDoc> heldout;
  std::size_t nonempty = 0;
  for (const auto& d : corpus.docs) nonempty += !d.empty();
  std::size_t idx = 0;
  for (std::size_t d = 0; d < corpus.docs.size(); ++d) {
    const bool hold = nonempty >= 5 && !corpus.docs[d].empty() && (idx++ % 5 == 4);
    if (hold) {
      heldout.push_back(corpus.docs[d]);
    } else {
      train.doc_ids.push_back(corpus.doc_ids[d]);
      train.docs.push_back(corpus.docs[d]);
    }
  }
  if (heldout.empty()) heldout = train.docs;

  SweepResult result;
  result.points.resize(k_values.size());
  auto run = [&](std::size_t i) {
    auto cfg = config_template;
    cfg.K = k_values[i];
    cfg.seed = config_template.seed + static_cast<std::uint64_t>(cfg.K);
    if (!config_template.alpha) cfg.alpha.reset();
    const auto model = fit_topic_model(train, cfg);
    result.points[i] = {cfg.K, perplexity(model, heldout, cfg.seed), coherence_umass(model, train.docs).mean};
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(k_values.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < k_values.size(); ++i) run(i);
  } else {
    std::vector<std::exception_ptr> errors(k_values.size());
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < k_values.size(); i = next++) {
          try {
            run(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  result.selected_K = select_topic_count(result.points);
  return result;
}

void write_quality_table(const std::filesystem::path& path, const SweepResult& sweep) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << "K,perplexity,coherence,selected\n";
  for (const auto& p : sweep.points) {
    csv::write_row(out, {std::to_string(p.K), text::format_double(p.perplexity), text::format_double(p.coherence),
                         p.K == sweep.selected_K ? "true" : "false"});
  }
}

namespace {

std::optional<long long> parse_int(const std::string& s) {
  const auto t = text::trim(s);
  if (t.empty()) return std::nullopt;
  std::size_t used = 0;
  try {
    const long long v = std::stoll(t, &used);
    if (used != t.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

ImportedAssignments import_assignments(std::istream& in, ImportMode mode, bool remap) {
  ImportedAssignments out;
  std::set<std::string> seen_docs;
  std::size_t dist_len = 0;

  auto add = [&](std::size_t line, std::string doc_id, long long topic) {
    if (doc_id.empty()) return out.rejects.push_back({line, "empty doc_id"});
    if (!seen_docs.insert(doc_id).second) return out.rejects.push_back({line, "duplicate doc_id"});
    if (topic == -1) {
      ++out.unassigned_count;
      return;
    }
    if (topic < 0 || topic > std::numeric_limits<int>::max()) return out.rejects.push_back({line, "bad topic id"});
    out.assignments.push_back({std::move(doc_id), static_cast<int>(topic)});
  };

  if (mode == ImportMode::argmax_rows) {
    csv::Reader reader(in);
    bool first = true;
    while (auto row = reader.next()) {
      const bool header = first && row->fields.size() >= 2 && text::trim(row->fields[1]) == "topic_id";
      first = false;
      if (header) continue;
      if (row->malformed || row->fields.size() < 2 || row->fields.size() > 3) {
        out.rejects.push_back({row->line, "expected doc_id,topic_id[,probability]"});
        continue;
      }
      const auto topic = parse_int(row->fields[1]);
      if (!topic) {
        out.rejects.push_back({row->line, "bad topic id"});
        continue;
      }
      add(row->line, text::trim(row->fields[0]), *topic);
    }
  } else {
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
      ++n;
      if (text::trim(line).empty()) continue;
      DocTopicDist dist;
      try {
        const auto obj = nlohmann::json::parse(line);
        dist.doc_id = obj.at("doc_id").get<std::string>();
        dist.probs = obj.at("dist").get<std::vector<double>>();
      } catch (const std::exception&) {
        out.rejects.push_back({n, "malformed json"});
        continue;
      }
      if (dist.probs.empty() || (dist_len && dist.probs.size() != dist_len)) {
        out.rejects.push_back({n, "inconsistent distribution length"});
        continue;
      }
      const double sum = std::accumulate(dist.probs.begin(), dist.probs.end(), 0.0);
      if (std::any_of(dist.probs.begin(), dist.probs.end(), [](double p) { return !(p >= 0); }) ||
          std::abs(sum - 1.0) > 1e-6) {
        out.rejects.push_back({n, "distribution does not sum to 1"});
        continue;
      }
      dist_len = dist.probs.size();
      const auto before = out.assignments.size();
      add(n, dist.doc_id, assign_dominant_topic(dist).topic_id);
      if (out.assignments.size() > before) out.dists.push_back(std::move(dist));
    }
  }

  if (out.assignments.empty()) throw InputError("topic assignment import has no assigned documents");

  std::set<int> ids;
  for (const auto& a : out.assignments) ids.insert(a.topic_id);
  if (mode == ImportMode::full_dist) {
    out.K = static_cast<int>(dist_len);  // ids are columns of the distribution, never renumbered
  } else if (remap) {
    int next = 0;
    for (int id : ids) out.remap[id] = next++;
    for (auto& a : out.assignments) a.topic_id = out.remap.at(a.topic_id);
    out.K = next;
  } else {
    out.K = *ids.rbegin() + 1;
  }
  return out;
}

ImportedAssignments import_assignments(const std::filesystem::path& path, ImportMode mode, bool remap) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open topic assignments " + path.string());
  return import_assignments(in, mode, remap);
}

void write_assignments(const std::filesystem::path& path, const std::vector<AssignmentRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << "doc_id,topic_id,probability\n";
  for (const auto& r : rows) {
    csv::write_row(out, {r.assignment.doc_id, std::to_string(r.assignment.topic_id),
                         r.probability ? text::format_double(*r.probability) : std::string()});
  }
}

}  // namespace tmc::topics
