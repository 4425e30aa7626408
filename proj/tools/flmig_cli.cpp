// flmig: command-line front end for the community detection toolkit.
//
//   flmig run    --graph G [--ground-truth T] [--trace F] [--out F]
//   flmig bench  --graph G --runs N [--out DIR] [--deterministic]
//   flmig gen-gn --mixing U --out PREFIX
//   flmig score  --graph G --partition P [--ground-truth T]
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "flmig/bench.hpp"

namespace fs = std::filesystem;
using namespace flmig;

namespace {

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GraphOptions {
  std::string graph;
  std::string format = "edgelist";
  bool weighted = false;
  bool self_loops = false;
  std::string ground_truth;

  void attach(CLI::App& app, bool truth_option = true) {
    app.add_option("-g,--graph", graph, "Edge list, or network.dat with --format lfr")->required();
    app.add_option("--format", format, "Input layout")->check(CLI::IsMember({"edgelist", "lfr"}));
    app.add_flag("--weighted", weighted, "Read a third column as edge weight");
    app.add_flag("--self-loops", self_loops, "Accept self-loops");
    if (truth_option)
      app.add_option("--ground-truth", ground_truth, "Membership file (community.dat with --format lfr)");
  }

  Dataset load() const {
    try {
      if (format == "lfr") {
        if (ground_truth.empty()) throw DataError("--format lfr needs --ground-truth community.dat");
        return load_lfr(fs::path(graph), fs::path(ground_truth));
      }
      EdgeListOptions opt;
      opt.weighted = weighted;
      opt.allow_self_loops = self_loops;
      std::optional<fs::path> truth;
      if (!ground_truth.empty()) truth = ground_truth;
      return load_dataset(graph, opt, truth);
    } catch (const ParseError& e) {
      throw DataError(graph + ": line " + std::to_string(e.line()) + ": " + e.what());
    } catch (const GraphError& e) {
      throw DataError(e.what());
    }
  }
};

struct AlgorithmOptions {
  std::string algorithm = "flmig";
  RunConfig cfg;
  double rho = 1.0;
  std::optional<std::size_t> stall;

  void attach(CLI::App& app) {
    app.add_option("-a,--algorithm", algorithm, "flmig, louvain, louvain-prune or lpa")
        ->check(CLI::IsMember({"flmig", "louvain", "louvain-prune", "lpa"}));
    app.add_option("--beta", cfg.beta, "Fraction of nodes ejected per destruction");
    app.add_option("--epsilon", cfg.epsilon, "Softness of the random community choice");
    app.add_option("--rho", rho, "Resolution");
    app.add_option("--stall", stall, "Iterations without a new best before stopping (default by size)");
    app.add_option("--max-iter", cfg.max_iterations, "Hard cap on iterations, 0 for none");
    app.add_option("--seed", cfg.seed, "Master seed");
  }

  RunConfig resolve(std::size_t node_count) const {
    RunConfig out = cfg;
    out.rho = Resolution(rho);
    out.stall_limit = stall.value_or(default_stall_limit(node_count));
    out.validate();
    return out;
  }
};

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write " + path);
  return f;
}

std::size_t count_communities(const std::vector<CommunityId>& dense) {
  return dense.empty() ? 0 : *std::max_element(dense.begin(), dense.end()) + std::size_t{1};
}

void print_row(std::ostream& out, const RunRow& row, bool timing) {
  out << "seed " << row.seed << '\n';
  out << "Q " << format_double(row.q) << '\n';
  if (row.nmi) out << "NMI " << format_double(*row.nmi) << '\n';
  out << "communities " << row.communities << '\n';
  out << "iterations " << row.iterations << '\n';
  out << "wall_s " << format_double(timing ? row.wall_s : 0.0) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Community detection by fast-local-move iterated greedy search"};
  app.require_subcommand(1);

  GraphOptions run_graph;
  AlgorithmOptions run_algo;
  std::string run_trace, run_out;
  bool run_deterministic = false;
  auto* run = app.add_subcommand("run", "One run on one dataset");
  run_graph.attach(*run);
  run_algo.attach(*run);
  run->add_option("--trace", run_trace, "Write the convergence trace CSV here");
  run->add_option("-o,--out", run_out, "Write the membership file here");
  run->add_flag("--deterministic", run_deterministic, "Write zero for wall-clock fields");

  GraphOptions bench_graph;
  AlgorithmOptions bench_algo;
  std::size_t runs = 10;
  std::size_t threads = 1;
  std::string bench_out;
  bool bench_deterministic = false;
  auto* bench = app.add_subcommand("bench", "Repeated seeded runs with a summary report");
  bench_graph.attach(*bench);
  bench_algo.attach(*bench);
  bench->add_option("--runs", runs, "Number of runs")->check(CLI::PositiveNumber);
  bench->add_option("--threads", threads, "Concurrent runs")->check(CLI::PositiveNumber);
  bench->add_option("-o,--out", bench_out, "Directory for summary, partitions and traces");
  bench->add_flag("--deterministic", bench_deterministic, "Write zero for wall-clock fields");

  GnSpec gn;
  std::uint64_t gn_seed = 1;
  std::string gn_out;
  auto* gen = app.add_subcommand("gen-gn", "Emit a planted-partition benchmark instance");
  gen->add_option("-u,--mixing", gn.mixing, "Fraction of each node's edges leaving its group")->required();
  gen->add_option("--communities", gn.communities, "Number of groups");
  gen->add_option("--community-size", gn.community_size, "Nodes per group");
  gen->add_option("--degree", gn.expected_degree, "Expected degree");
  gen->add_option("--seed", gn_seed, "Seed");
  gen->add_option("-o,--out", gn_out, "Writes PREFIX.txt and PREFIX.truth.txt")->required();

  GraphOptions score_graph;
  std::string score_partition;
  double score_rho = 1.0;
  auto* score = app.add_subcommand("score", "Q and NMI of a membership file");
  score_graph.attach(*score);
  score->add_option("-p,--partition", score_partition, "Membership file to score")->required();
  score->add_option("--rho", score_rho, "Resolution");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*run) {
      const Dataset d = run_graph.load();
      const RunConfig cfg = run_algo.resolve(d.graph().node_count());
      const RunResult r = run_algorithm(parse_algorithm(run_algo.algorithm), d.graph(), cfg);
      RunRow row;
      row.seed = cfg.seed;
      row.q = r.best_q;
      if (d.truth) row.nmi = nmi(r.best_partition, *d.truth);
      row.communities = count_communities(r.best_partition);
      row.iterations = r.iterations;
      row.wall_s = r.times.total_s;
      print_row(std::cout, row, !run_deterministic);
      if (!run_out.empty()) {
        auto f = open_out(run_out);
        write_membership(f, r.best_partition, d.labels());
      }
      if (!run_trace.empty()) {
        auto f = open_out(run_trace);
        write_trace_csv(f, r.trace, !run_deterministic);
      }
    } else if (*bench) {
      const Dataset d = bench_graph.load();
      const RunConfig cfg = bench_algo.resolve(d.graph().node_count());
      const auto report = run_experiment(d, parse_algorithm(bench_algo.algorithm), cfg, runs, threads);
      write_report(std::cout, report, !bench_deterministic);
      if (!bench_out.empty()) {
        OutputOptions opt;
        opt.directory = bench_out;
        opt.include_timing = !bench_deterministic;
        emit_outputs(report, d.labels(), opt);
      }
    } else if (*gen) {
      Rng rng(gn_seed);
      const Dataset d = generate_gn(gn, rng);
      auto edges = open_out(gn_out + ".txt");
      for (NodeId u = 0; u < d.graph().node_count(); ++u)
        for (const auto& nb : d.graph().neighbors(u))
          if (u < nb.node) edges << d.labels().label(u) << ' ' << d.labels().label(nb.node) << '\n';
      auto truth = open_out(gn_out + ".truth.txt");
      write_membership(truth, *d.truth, d.labels());
      std::cout << "nodes " << d.graph().node_count() << "\nedges " << d.graph().edge_count() << '\n';
    } else if (*score) {
      const Dataset d = score_graph.load();
      std::ifstream in(score_partition);
      if (!in) throw DataError("cannot open " + score_partition);
      std::vector<CommunityId> p;
      try {
        p = read_membership(in, d.labels());
      } catch (const ParseError& e) {
        throw DataError(score_partition + ": line " + std::to_string(e.line()) + ": " + e.what());
      } catch (const GraphError& e) {
        throw DataError(e.what());
      }
      std::cout << "Q " << format_double(modularity(d.graph(), p, Resolution(score_rho))) << '\n';
      if (d.truth) std::cout << "NMI " << format_double(nmi(p, *d.truth)) << '\n';
      std::cout << "communities " << count_communities(p) << '\n';
    }
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const UndefinedModularity& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return 0;
}
