#pragma once

#include <chrono>
#include <cstdint>
#include <vector>

#include "flmig/partition.hpp"

namespace flmig {

/// One row of a convergence trace.
struct TraceRecord {
  std::size_t iteration = 0;
  double elapsed_s = 0.0;
  double q_current = 0.0;
  double q_best = 0.0;
  double temperature = 0.0;
};

struct PhaseTimes {
  double initial_s = 0.0;
  double destruction_s = 0.0;
  double reconstruction_s = 0.0;
  double total_s = 0.0;
};

/// Outcome of one algorithm run.
struct RunResult {
  std::vector<CommunityId> best_partition;  // dense labels, first occurrence order
  double best_q = 0.0;
  std::size_t iterations = 0;
  std::uint64_t gain_evaluations = 0;
  PhaseTimes times;
  std::vector<TraceRecord> trace;
};

class Stopwatch {
public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace flmig
