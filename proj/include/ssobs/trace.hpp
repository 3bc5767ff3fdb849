#pragma once

#include <string>
#include <vector>

namespace ssobs {

/// One row of a run trace: outer time step for the observers, inner iteration
/// for the static estimator. Vectors are indexed by node.
struct TraceRecord {
  int t = 0;
  std::vector<double> err;   // ||x_i - x[t-tau+1]||_2
  std::vector<double> cons;  // ||x_i - mean_j x_j||_2
  std::vector<double> r;     // primal residuals
  std::vector<double> s;     // dual residuals
  std::vector<double> rho;   // penalty parameters
  int inner_rounds = 0;
  long messages = 0;
};

struct Trace {
  int num_nodes = 0;
  std::vector<TraceRecord> records;
};

struct RunSummary {
  std::string termination;  // "converged" | "capped"
  double final_max_error = 0.0;
  double final_max_consensus = 0.0;
  long total_inner_rounds = 0;
  double mean_inner_rounds = 0.0;
  int time_steps = 0;
  int solver_nonconverged_rounds = 0;  // rounds with an inner solve at cap
  int inner_cap_hits = 0;              // time steps stopped by the round cap
};

struct RunResult {
  Trace trace;
  RunSummary summary;
};

/// CSV with one header row and one row per record, 17 significant digits.
std::string trace_to_csv(const Trace& trace);
void write_trace(const Trace& trace, const std::string& path);
/// Parses a CSV produced by write_trace. Throws std::runtime_error on
/// malformed input.
Trace read_trace(const std::string& path);

}  // namespace ssobs
