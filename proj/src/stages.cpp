#include "tmc/stages.hpp"

#include <fstream>
#include <iostream>
#include <set>

#include <nlohmann/json.hpp>

#include "tmc/csv.hpp"
#include "tmc/error.hpp"
#include "tmc/extract.hpp"
#include "tmc/text.hpp"

namespace tmc::stages {

using nlohmann::ordered_json;

namespace {

void write_json(const fs::path& path, const ordered_json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void require_file(const fs::path& path, std::string_view what) {
  if (!fs::is_regular_file(path)) throw InputError(std::string(what) + " not found: " + path.string());
}

}  // namespace

IngestSummary run_ingest(const IngestParams& p) {
  if (p.inputs.empty()) throw ConfigError("ingest needs at least one input file");
  if (p.year_min > p.year_max) throw ConfigError("year-min exceeds year-max");
  if (!(p.title_sim >= 0 && p.title_sim <= 1)) throw ConfigError("title-sim must lie in [0,1]");

  IngestSummary summary;
  ordered_json inputs = ordered_json::array();
  std::vector<ingest::BiblioRecord> all;
  std::set<std::string> ids;
  for (const auto& in : p.inputs) {
    auto parsed = ingest::parse_records(in.path, in.format);
    ordered_json rejects = ordered_json::array();
    for (const auto& r : parsed.rejects) rejects.push_back({{"row", r.row}, {"reason", r.reason}});
    std::size_t accepted = 0;
    for (auto& r : parsed.records) {
      if (!ids.insert(r.id).second) {
        rejects.push_back({{"row", nullptr}, {"reason", "duplicate id across inputs: " + r.id}});
        continue;
      }
      all.push_back(ingest::normalize_record(std::move(r)));
      ++accepted;
    }
    summary.parsed += accepted;
    summary.rejected += rejects.size();
    ordered_json entry;
    entry["file"] = in.path.filename().string();
    entry["format"] = ingest::to_string(in.format);
    entry["records"] = accepted;
    entry["rejects"] = std::move(rejects);
    inputs.push_back(std::move(entry));
  }

  const auto filtered = ingest::filter_by_year(all, p.year_min, p.year_max);
  summary.after_year_filter = filtered.size();
  auto dedup = ingest::deduplicate(filtered, p.title_sim);
  summary.merged = dedup.report.merges.size();
  summary.kept = dedup.records.size();
  ingest::write_corpus(p.out, dedup.records);

  ordered_json report;
  report["inputs"] = std::move(inputs);
  report["year_filter"] = {{"min", p.year_min}, {"max", p.year_max}, {"excluded", all.size() - filtered.size()}};
  report["title_sim"] = p.title_sim;
  report["dedup"] = ingest::to_json(dedup.report);
  report["stats"] = ingest::to_json(ingest::corpus_stats(dedup.records));
  write_json(p.report, report);
  return summary;
}

ExtractSummary run_extract(const ExtractParams& p) {
  const auto corpus = ingest::read_corpus(p.corpus);
  const auto lexicon = extract::compile_lexicon(p.lexicon);

  std::set<std::string> known;
  for (const auto& r : corpus) known.insert(r.id);

  ExtractSummary summary;
  summary.documents = corpus.size();
  extract::DocMethods out;
  ordered_json report;
  report["mode"] = p.candidates ? (p.fallback_rule ? "llmrule+fallback" : "llmrule") : "rule";
  report["lexicon_canonicals"] = lexicon.canonicals().size();
  report["lexicon_variants"] = lexicon.variant_count();

  if (p.candidates) {
    const auto imported = extract::import_candidates(*p.candidates, &known);
    for (const auto& r : corpus) {
      const auto it = imported.candidates.find(r.id);
      out[r.id] = extract::llmrule_extract(r, it == imported.candidates.end() ? nullptr : &it->second, lexicon,
                                           p.fallback_rule);
    }
    // Unmapped report over documents of this corpus only.
    std::map<std::string, std::vector<std::string>> in_corpus;
    for (const auto& [doc, cands] : imported.candidates)
      if (known.count(doc)) in_corpus.emplace(doc, cands);
    const auto standardized = extract::standardize_candidates(in_corpus, lexicon);
    ordered_json unmapped = ordered_json::array();
    for (const auto& u : standardized.unmapped) unmapped.push_back({{"doc_id", u.doc_id}, {"candidate", u.raw}});
    summary.unmapped = standardized.unmapped.size();
    report["unmapped"] = std::move(unmapped);
    report["unknown_doc_ids"] = imported.unknown_doc_ids;
    ordered_json rejects = ordered_json::array();
    for (const auto& r : imported.rejects) rejects.push_back({{"line", r.line}, {"reason", r.reason}});
    report["candidate_rejects"] = std::move(rejects);
  } else {
    std::size_t mentions = 0;
    for (const auto& r : corpus) {
      auto res = extract::rule_extract(r, lexicon);
      mentions += res.mentions.size();
      out[r.id] = std::move(res.methods);
    }
    report["mentions"] = mentions;
  }
  for (const auto& [doc, set] : out) summary.docs_with_methods += !set.empty();
  report["documents"] = summary.documents;
  report["docs_with_methods"] = summary.docs_with_methods;
  extract::write_doc_methods(p.out, out);
  if (p.report) write_json(*p.report, report);
  return summary;
}

TopicSummary run_topics(const TopicParams& p) {
  TopicSummary summary;
  ordered_json report;

  if (p.mode == TopicMode::import_external) {
    if (!p.import) throw ConfigError("topic import needs an input file");
    const auto ext = text::lower(p.import->extension().string());
    const auto mode = (ext == ".jsonl" || ext == ".json") ? topics::ImportMode::full_dist : topics::ImportMode::argmax_rows;
    const auto imported = topics::import_assignments(*p.import, mode);
    std::vector<topics::AssignmentRow> rows;
    for (std::size_t i = 0; i < imported.assignments.size(); ++i) {
      std::optional<double> prob;
      if (!imported.dists.empty()) {
        const auto& probs = imported.dists[i].probs;
        prob = *std::max_element(probs.begin(), probs.end());
      }
      rows.push_back({imported.assignments[i], prob});
    }
    topics::write_assignments(p.out, rows);
    summary.K = imported.K;
    summary.assigned = imported.assignments.size();
    summary.unassigned = imported.unassigned_count;
    report["mode"] = "import";
    report["K"] = imported.K;
    ordered_json remap = ordered_json::object();
    for (const auto& [from, to] : imported.remap) remap[std::to_string(from)] = to;
    report["remap"] = std::move(remap);
    report["unassigned_count"] = imported.unassigned_count;
    ordered_json rejects = ordered_json::array();
    for (const auto& r : imported.rejects) rejects.push_back({{"line", r.line}, {"reason", r.reason}});
    report["rejects"] = std::move(rejects);
    if (p.report) write_json(*p.report, report);
    return summary;
  }

  const auto records = ingest::read_corpus(p.corpus);
  const auto corpus = topics::build_token_corpus(records, topics::default_stopwords(), p.min_token_len);

  auto config = p.model;
  if (p.mode == TopicMode::sweep) {
    const auto sweep = topics::sweep_topic_counts(corpus, p.k_list, p.model, p.threads);
    if (p.quality) topics::write_quality_table(*p.quality, sweep);
    config.K = sweep.selected_K;
    config.seed = p.model.seed + static_cast<std::uint64_t>(sweep.selected_K);
    ordered_json points = ordered_json::array();
    for (const auto& pt : sweep.points)
      points.push_back({{"K", pt.K}, {"perplexity", pt.perplexity}, {"coherence", pt.coherence}});
    report["mode"] = "sweep";
    report["sweep"] = std::move(points);
    report["selected_K"] = sweep.selected_K;
  } else {
    report["mode"] = "fit";
  }
  config.alpha = p.model.alpha;

  std::size_t tokens = 0;
  for (const auto& d : corpus.docs) tokens += d.size();
  if (tokens < static_cast<std::size_t>(config.K))
    std::cerr << "warning: K=" << config.K << " exceeds the corpus token count (" << tokens << ")\n";

  const auto model = topics::fit_topic_model(corpus, config);
  const auto dists = topics::doc_topic_dists(model, corpus.doc_ids);
  std::vector<topics::AssignmentRow> rows;
  std::vector<topics::TopicAssignment> assignments;
  for (const auto& d : dists) {
    const auto a = topics::assign_dominant_topic(d);
    rows.push_back({a, d.probs[static_cast<std::size_t>(a.topic_id)]});
    assignments.push_back(a);
  }
  topics::write_assignments(p.out, rows);

  const auto coherence = topics::coherence_umass(model, corpus.docs);
  ordered_json top_words = ordered_json::array();
  for (int t = 0; t < model.K(); ++t) {
    std::vector<std::string> words;
    for (int w : model.top_words(t, topics::kDefaultCoherenceTopN)) words.push_back(corpus.vocab.word(w));
    top_words.push_back(words);
  }
  report["K"] = config.K;
  report["alpha"] = config.alpha_value();
  report["beta"] = config.beta;
  report["iterations"] = config.iterations;
  report["burn_in"] = config.burn_in_value();
  report["seed"] = config.seed;
  report["vocabulary_size"] = corpus.vocab.size();
  report["tokens"] = tokens;
  report["topic_doc_counts"] = topics::topic_doc_counts(assignments, config.K);
  report["coherence_metric"] = "umass";
  report["coherence"] = coherence.mean;
  report["short_topics"] = coherence.short_topics;
  report["top_words"] = std::move(top_words);
  if (p.report) write_json(*p.report, report);

  summary.K = config.K;
  summary.assigned = assignments.size();
  return summary;
}

core::TmcTable run_tmc(const TmcParams& p) {
  if (!(p.sigma >= 0)) throw ConfigError("sigma must be >= 0");
  auto methods = extract::read_doc_methods(p.methods);
  std::erase_if(methods, [](const auto& kv) { return kv.second.empty(); });
  const auto imported = topics::import_assignments(p.topics, topics::ImportMode::argmax_rows, /*remap=*/false);
  core::Assignments assignments;
  for (const auto& a : imported.assignments) assignments[a.doc_id] = a.topic_id;

  auto table = core::build_tmc_table(methods, assignments, p.sigma);
  core::write_tmc_csv(p.out, table);
  const auto graph = core::export_bipartite(table);
  for (const auto& path : {p.graph, p.gexf}) {
    if (!path) continue;
    if (path->extension() == ".gexf")
      core::write_bipartite_gexf(*path, graph);
    else
      core::write_bipartite_graphml(*path, graph);
  }
  if (p.report) {
    ordered_json r;
    r["sigma"] = table.sigma;
    r["corpus_size"] = table.corpus_size;
    r["pairs"] = table.pairs.size();
    r["retained_pairs"] = table.retained_count;
    r["coverage"] = {{"docs_with_both", table.coverage.docs_with_both},
                     {"docs_methods_only", table.coverage.docs_methods_only},
                     {"docs_topic_only", table.coverage.docs_topic_only}};
    r["bipartite_nodes"] = graph.nodes.size();
    r["bipartite_edges"] = graph.edges.size();
    write_json(*p.report, r);
  }
  return table;
}

NetworkSummary run_network(const NetworkParams& p) {
  const auto table = core::read_tmc_csv(p.tmc, p.sigma);
  const auto net = network::build_network(table, p.weighting);

  NetworkSummary s;
  s.nodes = net.nodes.size();
  s.edges = net.edges.size();
  std::optional<network::CommunityPartition> partition;
  if (!net.edges.empty()) {
    partition = network::greedy_communities(network::to_graph(net));
    s.communities = partition->community_count();
    s.q = partition->q;
    s.merges_applied = partition->merges_applied;
  } else {
    // No shared elements: every TMC is its own community and Q is undefined.
    std::cerr << "warning: TMC network has no edges; modularity is undefined\n";
    partition.emplace();
    partition->assignment.resize(net.nodes.size());
    for (std::size_t v = 0; v < net.nodes.size(); ++v) partition->assignment[v] = static_cast<int>(v);
    s.communities = net.nodes.size();
  }

  const auto bipartite = core::export_bipartite(table);
  const auto bgraph = network::to_graph(bipartite);
  if (!bgraph.edges.empty()) {
    const auto bp = network::greedy_communities(bgraph);
    s.bipartite_q = bp.q;
    s.bipartite_communities = bp.community_count();
  }

  if (p.graph) network::write_network_graph(*p.graph, net, &*partition);
  if (p.gexf) network::write_network_graph(*p.gexf, net, &*partition);
  if (p.communities) network::write_communities_csv(*p.communities, net, *partition);
  if (p.history) network::write_history_csv(*p.history, *partition);
  if (p.top) network::write_popularity_csv(*p.top, network::rank_popularity(table, p.top_n));
  if (p.summary) {
    ordered_json j;
    j["sigma"] = p.sigma;
    j["weighting"] = p.weighting == network::EdgeWeighting::unweighted ? "unweighted" : "shared-intensity";
    j["nodes"] = s.nodes;
    j["edges"] = s.edges;
    j["communities"] = s.communities;
    j["modularity"] = net.edges.empty() ? ordered_json(nullptr) : ordered_json(s.q);
    j["merges_applied"] = s.merges_applied;
    j["merge_steps"] = partition->merge_history.size();
    j["bipartite_modularity"] = s.bipartite_q ? ordered_json(*s.bipartite_q) : ordered_json(nullptr);
    j["bipartite_communities"] = s.bipartite_communities;
    write_json(*p.summary, j);
  }
  return s;
}

namespace {

std::vector<std::vector<std::string>> read_csv_rows(const fs::path& path) {
  require_file(path, "upstream output");
  std::ifstream in(path, std::ios::binary);
  csv::Reader reader(in);
  std::vector<std::vector<std::string>> rows;
  bool header = true;
  while (auto r = reader.next()) {
    if (header) {
      header = false;
      continue;
    }
    rows.push_back(std::move(r->fields));
  }
  return rows;
}

}  // namespace

ReportNumbers emit_report(const ReportParams& p) {
  for (const auto& f : {p.corpus, p.methods, p.topics, p.tmc, p.communities, p.network_summary, p.top})
    require_file(f, "upstream output");

  ReportNumbers n;
  n.corpus_size = ingest::read_corpus(p.corpus).size();
  std::set<std::string> methods;
  for (const auto& [doc, set] : extract::read_doc_methods(p.methods)) methods.insert(set.begin(), set.end());
  n.method_count = methods.size();

  std::set<std::string> topic_ids;
  for (const auto& row : read_csv_rows(p.topics))
    if (row.size() >= 2) topic_ids.insert(row[1]);
  n.topic_count = topic_ids.size();

  const auto tmc_rows = read_csv_rows(p.tmc);
  n.tmc_pairs = tmc_rows.size();
  for (const auto& row : tmc_rows)
    if (row.size() == 7 && row[6] == "true") ++n.retained_pairs;

  std::set<std::string> communities;
  for (const auto& row : read_csv_rows(p.communities))
    if (row.size() == 2) communities.insert(row[1]);
  n.community_count = communities.size();
  n.top_rows = read_csv_rows(p.top).size();

  std::ifstream in(p.network_summary, std::ios::binary);
  const auto net = nlohmann::json::parse(in);
  if (net.at("communities").get<std::size_t>() != n.community_count)
    throw InputError("community count in network summary disagrees with " + p.communities.filename().string());
  const bool has_q = !net.at("modularity").is_null();
  if (has_q) n.modularity = net.at("modularity").get<double>();

  std::ofstream out(p.out, std::ios::binary);
  if (!out) throw InputError("cannot write " + p.out.string());
  out << "corpus_size: " << n.corpus_size << '\n'
      << "method_count: " << n.method_count << '\n'
      << "topic_count: " << n.topic_count << '\n'
      << "tmc_pairs: " << n.tmc_pairs << '\n'
      << "retained_pairs: " << n.retained_pairs << '\n'
      << "sigma: " << text::format_double(net.at("sigma").get<double>()) << '\n'
      << "community_count: " << n.community_count << '\n'
      << "modularity: " << (has_q ? text::format_double(n.modularity) : std::string("undefined")) << '\n'
      << "top_tmc_rows: " << n.top_rows << '\n'
      << "coherence_metric: umass\n";
  return n;
}

}  // namespace tmc::stages
