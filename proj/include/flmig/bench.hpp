#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "flmig/baselines.hpp"
#include "flmig/flmig.hpp"
#include "flmig/graph.hpp"
#include "flmig/partition.hpp"
#include "flmig/quality.hpp"
#include "flmig/rng.hpp"

namespace flmig {

/// Girvan-Newman planted partition: `communities` groups of `community_size`, expected degree k.
struct GnSpec {
  std::size_t communities = 4;
  std::size_t community_size = 32;
  double expected_degree = 16.0;
  double mixing = 0.1;

  std::size_t node_count() const noexcept { return communities * community_size; }
  double p_in() const { return (1.0 - mixing) * expected_degree / static_cast<double>(community_size - 1); }
  double p_out() const {
    return mixing * expected_degree / static_cast<double>(node_count() - community_size);
  }

  void validate() const {
    if (communities < 2 || community_size < 2) throw std::invalid_argument("GN benchmark needs >= 2 groups of >= 2 nodes");
    if (!(mixing >= 0.0 && mixing <= 1.0)) throw std::invalid_argument("mixing must lie in [0, 1]");
    if (!(expected_degree >= 0.0)) throw std::invalid_argument("expected degree must be non-negative");
    if (p_in() > 1.0 || p_out() > 1.0) throw std::invalid_argument("GN edge probability exceeds 1");
  }
};

/// A graph with its external labels and, optionally, a ground-truth partition.
struct Dataset {
  std::string name;
  LabeledGraph data;
  std::optional<std::vector<CommunityId>> truth;

  const Graph& graph() const noexcept { return data.graph; }
  const NodeLabelMap& labels() const noexcept { return data.labels; }
};

/**
 * Independent Bernoulli edges: p_in inside a group, p_out across groups.
 * Node i belongs to group i / community_size; labels are "0".."n-1".
 */
inline Dataset generate_gn(const GnSpec& spec, Rng& rng) {
  spec.validate();
  const std::size_t n = spec.node_count();
  const double p_in = spec.p_in();
  const double p_out = spec.p_out();
  GraphBuilder builder(n);
  std::vector<CommunityId> truth(n);
  for (NodeId u = 0; u < n; ++u) {
    truth[u] = static_cast<CommunityId>(u / spec.community_size);
    for (NodeId v = u + 1; v < n; ++v) {
      const bool same = u / spec.community_size == v / spec.community_size;
      if (rng.uniform() < (same ? p_in : p_out)) builder.add_edge(u, v, 1.0);
    }
  }
  Dataset out;
  out.name = "gn-u" + std::to_string(spec.mixing);
  out.data.graph = std::move(builder).build();
  out.data.labels = NodeLabelMap::identity(n);
  out.truth = std::move(truth);
  return out;
}

/**
 * Loads the LFR tool layout: network.dat with "u v" pairs (each edge listed in
 * both directions; a weight column is ignored) and community.dat with
 * "node community". Repeated pairs collapse to one edge of weight 1.
 */
inline Dataset load_lfr(std::istream& network, std::istream& communities) {
  Dataset out;
  out.name = "lfr";
  EdgeListOptions options;
  options.duplicates = DuplicateEdges::keep_first;
  out.data = parse_edge_list(network, options);
  out.truth = read_membership(communities, out.data.labels);
  return out;
}

inline Dataset load_lfr(const std::filesystem::path& network, const std::filesystem::path& communities) {
  std::ifstream net(network);
  if (!net) throw GraphError("cannot open " + network.string());
  std::ifstream com(communities);
  if (!com) throw GraphError("cannot open " + communities.string());
  Dataset d = load_lfr(net, com);
  d.name = network.stem().string();
  return d;
}

/// Edge-list file plus optional membership file as ground truth.
inline Dataset load_dataset(const std::filesystem::path& graph_path, const EdgeListOptions& options,
                            const std::optional<std::filesystem::path>& truth_path = std::nullopt) {
  std::ifstream in(graph_path);
  if (!in) throw GraphError("cannot open " + graph_path.string());
  Dataset d;
  d.name = graph_path.stem().string();
  d.data = parse_edge_list(in, options);
  if (truth_path) {
    std::ifstream t(*truth_path);
    if (!t) throw GraphError("cannot open " + truth_path->string());
    d.truth = read_membership(t, d.data.labels);
  }
  return d;
}

/// Stall limit by network size: 100 below 2,000 nodes, 50 below 100,000, else 10.
inline std::size_t default_stall_limit(std::size_t n) {
  if (n < 2000) return 100;
  if (n < 100000) return 50;
  return 10;
}

struct RunRow {
  std::size_t run = 0;
  std::uint64_t seed = 0;
  double q = 0.0;
  std::optional<double> nmi;
  std::size_t communities = 0;
  std::size_t iterations = 0;
  double wall_s = 0.0;
};

struct Summary {
  double best = 0.0;
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation
};

inline Summary summarize(const std::vector<double>& values) {
  Summary s;
  if (values.empty()) return s;
  s.best = *std::max_element(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(sq / static_cast<double>(values.size()));
  return s;
}

struct ExperimentReport {
  std::string dataset;
  Algorithm algorithm = Algorithm::flmig;
  RunConfig config;  // config.seed holds the master seed
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::vector<RunRow> rows;
  std::vector<RunResult> results;  // parallel to rows

  Summary q_summary() const {
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(r.q);
    return summarize(v);
  }
  std::optional<Summary> nmi_summary() const {
    std::vector<double> v;
    for (const auto& r : rows)
      if (r.nmi) v.push_back(*r.nmi);
    if (v.empty()) return std::nullopt;
    return summarize(v);
  }
  const RunResult& best_run() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < rows.size(); ++i)
      if (rows[i].q > rows[best].q) best = i;
    return results.at(best);
  }
};

/**
 * Runs `runs` independent repetitions. Run i uses derive_seed(master, i), so
 * the outcome does not depend on `threads`.
 */
inline ExperimentReport run_experiment(const Dataset& dataset, Algorithm algorithm, const RunConfig& base,
                                       std::size_t runs, std::size_t threads = 1) {
  if (runs == 0) throw std::invalid_argument("runs must be at least 1");
  ExperimentReport report;
  report.dataset = dataset.name;
  report.algorithm = algorithm;
  report.config = base;
  report.nodes = dataset.graph().node_count();
  report.edges = dataset.graph().edge_count();
  report.rows.resize(runs);
  report.results.resize(runs);

  auto one = [&](std::size_t i) {
    RunConfig cfg = base;
    cfg.seed = derive_seed(base.seed, i);
    RunResult r = run_algorithm(algorithm, dataset.graph(), cfg);
    RunRow row;
    row.run = i;
    row.seed = cfg.seed;
    row.q = r.best_q;
    if (dataset.truth) row.nmi = nmi(r.best_partition, *dataset.truth);
    row.communities = r.best_partition.empty()
                          ? 0
                          : *std::max_element(r.best_partition.begin(), r.best_partition.end()) + std::size_t{1};
    row.iterations = r.iterations;
    row.wall_s = r.times.total_s;
    report.rows[i] = row;
    report.results[i] = std::move(r);
  };

  threads = std::max<std::size_t>(1, std::min(threads, runs));
  if (threads == 1) {
    for (std::size_t i = 0; i < runs; ++i) one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    {
      std::vector<std::jthread> pool;
      for (std::size_t t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
          try {
            for (std::size_t i = next++; i < runs; i = next++) one(i);
          } catch (...) {
            errors[t] = std::current_exception();
          }
        });
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Output

/// Shortest round-trip decimal form of a double.
inline std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

inline void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace, bool include_timing = true) {
  out << "iteration,elapsed_s,Q_current,Q_best,temperature\n";
  for (const auto& t : trace)
    out << t.iteration << ',' << format_double(include_timing ? t.elapsed_s : 0.0) << ',' << format_double(t.q_current)
        << ',' << format_double(t.q_best) << ',' << format_double(t.temperature) << '\n';
}

inline constexpr const char* kReportHeader = "# flmig-report 1";

/**
 * Line-oriented summary: "key value" lines, a tab-separated run table, then
 * aggregates. With include_timing == false every wall-clock field is written
 * as 0 so equal seeds give byte-identical files.
 */
inline void write_report(std::ostream& out, const ExperimentReport& report, bool include_timing = true) {
  const auto& c = report.config;
  out << kReportHeader << '\n';
  out << "dataset " << report.dataset << '\n';
  out << "algorithm " << to_string(report.algorithm) << '\n';
  out << "nodes " << report.nodes << '\n';
  out << "edges " << report.edges << '\n';
  out << "runs " << report.rows.size() << '\n';
  out << "master_seed " << c.seed << '\n';
  out << "beta " << format_double(c.beta) << '\n';
  out << "epsilon " << format_double(c.epsilon) << '\n';
  out << "rho " << format_double(c.rho.value()) << '\n';
  out << "stall " << c.stall_limit << '\n';
  out << "max_iter " << c.max_iterations << '\n';
  out << "# run\tseed\tQ\tNMI\tcommunities\titerations\twall_s\n";
  for (const auto& r : report.rows)
    out << "run\t" << r.run << '\t' << r.seed << '\t' << format_double(r.q) << '\t'
        << (r.nmi ? format_double(*r.nmi) : std::string("-")) << '\t' << r.communities << '\t' << r.iterations << '\t'
        << format_double(include_timing ? r.wall_s : 0.0) << '\n';
  const auto q = report.q_summary();
  out << "best_q " << format_double(q.best) << '\n';
  out << "mean_q " << format_double(q.mean) << '\n';
  out << "std_q " << format_double(q.stddev) << '\n';
  if (auto n = report.nmi_summary()) {
    out << "best_nmi " << format_double(n->best) << '\n';
    out << "mean_nmi " << format_double(n->mean) << '\n';
    out << "std_nmi " << format_double(n->stddev) << '\n';
  }
  double total = 0.0;
  for (const auto& r : report.rows) total += r.wall_s;
  out << "total_wall_s " << format_double(include_timing ? total : 0.0) << '\n';
}

struct OutputOptions {
  std::filesystem::path directory;
  bool memberships = true;
  bool traces = true;
  bool include_timing = true;
};

/**
 * Writes summary.txt, partitions/run-<i>.txt and traces/run-<i>.csv under
 * options.directory. Returns the summary path.
 */
inline std::filesystem::path emit_outputs(const ExperimentReport& report, const NodeLabelMap& labels,
                                          const OutputOptions& options) {
  namespace fs = std::filesystem;
  auto open = [](const fs::path& p) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    return f;
  };
  fs::create_directories(options.directory);
  const fs::path summary = options.directory / "summary.txt";
  {
    auto f = open(summary);
    write_report(f, report, options.include_timing);
  }
  if (options.memberships) {
    fs::create_directories(options.directory / "partitions");
    for (std::size_t i = 0; i < report.results.size(); ++i) {
      auto f = open(options.directory / "partitions" / ("run-" + std::to_string(i) + ".txt"));
      write_membership(f, report.results[i].best_partition, labels);
    }
  }
  if (options.traces) {
    fs::create_directories(options.directory / "traces");
    for (std::size_t i = 0; i < report.results.size(); ++i) {
      auto f = open(options.directory / "traces" / ("run-" + std::to_string(i) + ".csv"));
      write_trace_csv(f, report.results[i].trace, options.include_timing);
    }
  }
  return summary;
}

}  // namespace flmig
