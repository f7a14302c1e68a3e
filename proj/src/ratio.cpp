#include "cheegerlab/ratio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "cheegerlab/error.hpp"

namespace cheegerlab {

double pi_p(double p) {
  if (!(p >= 1.0)) throw InvalidArgument("pi_p needs p >= 1");
  if (p == 1.0 || std::isinf(p)) return 2.0;
  const double pi = std::numbers::pi;
  return 2.0 * pi * std::pow(p - 1.0, 1.0 / p) / (p * std::sin(pi / p));
}

namespace {

void require_exponent(double p) {
  if (!(p >= 1.0)) throw InvalidArgument("exponent must lie in [1, inf]");
}

}  // namespace

double lambda_root(const DomainMask& mask, const Grid2D& grid, double p, const SolverOptions& opts) {
  RootEvaluator roots(opts);
  return roots(mask, grid, p);
}

double RootEvaluator::operator()(const DomainMask& mask, const Grid2D& grid, double p) {
  require_exponent(p);
  if (!mask.same_shape(grid)) throw InvalidArgument("mask does not match grid");
  if (mask.empty()) throw InvalidArgument("empty mask");
  if (std::isinf(p)) return 1.0 / inradius(mask, grid);
  if (p == 1.0) {
    const CheegerResult* warm = cheeger_ && cheeger_->cheeger_set.same_shape(grid) ? &*cheeger_ : nullptr;
    CheegerResult r = cheeger_dinkelbach(mask, grid, PerimeterMode::isotropic, opts_, warm);
    const double h = r.h;
    cheeger_ = std::move(r);
    return h;
  }
  const auto it = eigenfunctions_.find(p);
  const ScalarField* warm = it != eigenfunctions_.end() && it->second.grid.nx == grid.nx && it->second.grid.ny == grid.ny
                                ? &it->second
                                : nullptr;
  EigenResult r = principal_eigen(mask, grid, p, opts_, warm);
  const double root = std::pow(r.lambda, 1.0 / p);
  eigenfunctions_[p] = std::move(r.eigenfunction);
  return root;
}

const ScalarField* RootEvaluator::eigenfunction(double p) const {
  const auto it = eigenfunctions_.find(p);
  return it == eigenfunctions_.end() ? nullptr : &it->second;
}

void RootEvaluator::reset() {
  eigenfunctions_.clear();
  cheeger_.reset();
}

void check_regime(double p, double q) {
  require_exponent(p);
  require_exponent(q);
  if (q > p) throw InvalidArgument("regime q ≤ p only");
}

RatioReport ratio_F(RootEvaluator& roots, const DomainMask& mask, const Grid2D& grid, double p, double q,
                    const std::string& domain) {
  check_regime(p, q);
  RatioReport r;
  r.p = p;
  r.q = q;
  r.domain = domain;
  r.grid = grid;
  r.lambda_root_p = roots(mask, grid, p);
  r.lambda_root_q = p == q ? r.lambda_root_p : roots(mask, grid, q);
  r.F = r.lambda_root_p / r.lambda_root_q;
  return r;
}

RatioReport ratio_F(const DomainMask& mask, const Grid2D& grid, double p, double q, const SolverOptions& opts,
                    const std::string& domain) {
  RootEvaluator roots(opts);
  return ratio_F(roots, mask, grid, p, q, domain);
}

std::size_t CheckReport::failures() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const Check& c) { return !c.pass; }));
}

Check lower_bound_check(std::string name, const RatioReport& r, double lhs, double rhs, std::string reference,
                        double slack) {
  Check c{std::move(name), r.domain, r.p, r.q, lhs, rhs, false, std::move(reference), lhs - rhs};
  c.pass = lhs >= rhs - slack;
  return c;
}

Check upper_bound_check(std::string name, const RatioReport& r, double lhs, double rhs, std::string reference,
                        double slack) {
  Check c{std::move(name), r.domain, r.p, r.q, lhs, rhs, false, std::move(reference), rhs - lhs};
  c.pass = lhs <= rhs + slack;
  return c;
}

CheckReport verify_inequalities(const RatioReport& report, bool convex, int d) {
  check_regime(report.p, report.q);
  if (d < 1) throw InvalidArgument("dimension must be positive");
  const double p = report.p, q = report.q, F = report.F;
  const double q_over_p = std::isinf(p) ? 0.0 : q / p;
  CheckReport out;
  out.rows.push_back(lower_bound_check("generalized", report, F, q_over_p, "F >= q/p for q <= p"));
  if (p == 2.0 && q == 1.0)
    out.rows.push_back(lower_bound_check("cheeger", report, F, 0.5, "sqrt(lambda_2)/h >= 1/2"));
  if (convex) {
    const double lower = std::max(q_over_p, pi_p(p) / (d * pi_p(q)));
    const double upper = pi_p(p) * std::min(q / 2.0, d / pi_p(q));
    out.rows.push_back(lower_bound_check("convex_lower", report, F, lower, "convex: F >= max{q/p, pi_p/(d pi_q)}"));
    out.rows.push_back(upper_bound_check("convex_upper", report, F, upper, "convex: F <= pi_p min{q/2, d/pi_q}"));
  }
  if (std::isinf(p))
    for (Check& c : out.rows) c.reference += "; lambda_inf^(1/inf) taken as 1/inradius";
  return out;
}

std::vector<std::pair<double, double>> monotonicity_scan(const DomainMask& mask, const Grid2D& grid,
                                                         const std::vector<double>& p_list,
                                                         const SolverOptions& opts) {
  if (p_list.empty()) throw InvalidArgument("empty exponent list");
  for (std::size_t k = 0; k < p_list.size(); ++k) {
    require_exponent(p_list[k]);
    if (std::isinf(p_list[k])) throw InvalidArgument("p = inf has unbounded p lambda_p^(1/p); not scanned");
    if (k > 0 && !(p_list[k] > p_list[k - 1])) throw InvalidArgument("exponent list must be ascending");
  }
  RootEvaluator roots(opts);
  std::vector<std::pair<double, double>> out;
  for (double p : p_list) out.emplace_back(p, p * roots(mask, grid, p));
  return out;
}

std::string format_exponent(double p) {
  if (std::isinf(p)) return p > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, p);
  return std::string(buf, res.ptr);
}

double parse_exponent(const std::string& s) {
  if (s == "inf" || s == "infinity" || s == "Inf") return kInfinity;
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw InvalidArgument("not a number: '" + s + "'");
  return v;
}

}  // namespace cheegerlab
