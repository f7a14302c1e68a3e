#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cheegerlab/cheeger.hpp"
#include "cheegerlab/eigensolver.hpp"
#include "cheegerlab/geometry.hpp"

namespace cheegerlab {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// pi_p = 2 pi (p-1)^(1/p) / (p sin(pi/p)) for 1 < p < inf, and 2 at p = 1, inf.
double pi_p(double p);

/// lambda_p^(1/p) of the mask for p in [1, inf]:
///   p = 1        isotropic Cheeger constant h
///   1 < p < inf  principal_eigen(p).lambda^(1/p)
///   p = inf      1 / inradius
double lambda_root(const DomainMask& mask, const Grid2D& grid, double p, const SolverOptions& opts = {});

/// lambda_root for a sequence of nearby masks on one grid. Each solve is
/// warm-started from the previous minimizer for the same p.
class RootEvaluator {
 public:
  explicit RootEvaluator(SolverOptions opts = {}) : opts_(opts) {}

  double operator()(const DomainMask& mask, const Grid2D& grid, double p);

  const SolverOptions& options() const { return opts_; }
  /// Last eigenfunction computed for p, or nullptr.
  const ScalarField* eigenfunction(double p) const;
  /// Drops every stored warm start.
  void reset();

 private:
  SolverOptions opts_;
  std::map<double, ScalarField> eigenfunctions_;
  std::optional<CheegerResult> cheeger_;
};

struct RatioReport {
  double p = 2.0;
  double q = 1.0;
  double lambda_root_p = 0.0;
  double lambda_root_q = 0.0;
  double F = 0.0;
  std::string domain;
  Grid2D grid;
};

/// F_{p,q} = lambda_root(p) / lambda_root(q), 1 <= q <= p <= inf.
RatioReport ratio_F(const DomainMask& mask, const Grid2D& grid, double p, double q, const SolverOptions& opts = {},
                    const std::string& domain = {});
RatioReport ratio_F(RootEvaluator& roots, const DomainMask& mask, const Grid2D& grid, double p, double q,
                    const std::string& domain = {});

/// Throws InvalidArgument unless 1 <= q <= p <= inf.
void check_regime(double p, double q);

struct Check {
  std::string name;
  std::string domain;
  double p = 0.0;
  double q = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
  std::string reference;

  /// lhs - rhs for lower bounds, rhs - lhs for upper bounds; positive when passing.
  double margin = 0.0;
};

struct CheckReport {
  std::vector<Check> rows;

  std::size_t failures() const;
  bool all_passed() const { return failures() == 0; }
  void append(const CheckReport& other) { rows.insert(rows.end(), other.rows.begin(), other.rows.end()); }
};

/// Records lhs >= rhs (or lhs <= rhs) with the given slack; failures are
/// recorded, not thrown.
Check lower_bound_check(std::string name, const RatioReport& r, double lhs, double rhs, std::string reference,
                        double slack = 0.0);
Check upper_bound_check(std::string name, const RatioReport& r, double lhs, double rhs, std::string reference,
                        double slack = 0.0);

/// Inequalities that hold for the report's (p, q):
///   generalized   F >= q/p                                       (q/inf = 0)
///   cheeger       sqrt(lambda_2)/h >= 1/2                         (p = 2, q = 1)
///   convex_lower  F >= max{q/p, pi_p / (d pi_q)}                  (convex only)
///   convex_upper  F <= pi_p min{q/2, d/pi_q}                      (convex only)
CheckReport verify_inequalities(const RatioReport& report, bool convex, int d = 2);

/// (p, p lambda_root(p)) for an ascending list of finite exponents in [1, inf).
std::vector<std::pair<double, double>> monotonicity_scan(const DomainMask& mask, const Grid2D& grid,
                                                         const std::vector<double>& p_list,
                                                         const SolverOptions& opts = {});

/// "inf" for infinity, shortest round-trip decimal otherwise.
std::string format_exponent(double p);
/// Accepts "inf", "infinity" or a decimal number.
double parse_exponent(const std::string& s);

}  // namespace cheegerlab
