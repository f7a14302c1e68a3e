#pragma once

#include <string>
#include <vector>

#include "cheegerlab/eigensolver.hpp"
#include "cheegerlab/shapeopt.hpp"

namespace cheegerlab {

struct SweepRow {
  std::string domain;
  double p = 0.0;
  double q = 0.0;
  double lambda_root_p = 0.0;
  double lambda_root_q = 0.0;
  double F = 0.0;
  int checks_passed = 0;
  int checks_total = 0;
  std::string error;  // non-empty when the row failed

  bool ok() const { return error.empty(); }
};

struct SweepSummary {
  double p = 0.0;
  double q = 0.0;
  double min_F = 0.0;
  std::string min_domain;
  double max_F = 0.0;
  std::string max_domain;
  std::string note;
  std::vector<PunctureRow> punctures;
};

struct SweepReport {
  std::vector<SweepRow> rows;  // sorted by (domain, p, q)
  std::vector<SweepSummary> summaries;  // sorted by (p, q)
};

struct SweepOptions {
  int resolution = 128;
  int min_short_cells = 16;
  SolverOptions solver;
  std::vector<int> punctures;  // puncture series attached to pairs with q <= 2 <= p
  std::uint64_t seed = 0;
  int threads = 0;  // 0: hardware concurrency
};

/// F_{p,q} over domains x p_list x q_list. Every pair must satisfy q <= p
/// (checked before any computation). Domains run in parallel, each with
/// its own solvers; a failing domain records its error in its rows.
SweepReport run_sweep(const std::vector<std::string>& domains, const std::vector<double>& p_list,
                      const std::vector<double>& q_list, const SweepOptions& opts = {});

}  // namespace cheegerlab
