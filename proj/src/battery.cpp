#include "cheegerlab/battery.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "cheegerlab/error.hpp"

namespace cheegerlab {

std::vector<std::string> default_battery_domains() {
  return {"unit-disk", "unit-square", "rect-0.5", "rect-0.2", "rect-0.1",
          "rect-0.05", "l-shape",     "annulus",  "punctured-disk"};
}

std::vector<std::pair<double, double>> default_battery_pairs() {
  return {{2.0, 1.0}, {3.0, 1.0}, {3.0, 2.0}, {4.0, 2.0}, {kInfinity, 1.0}, {kInfinity, 2.0}};
}

BatteryOptions battery_from_config(const ExperimentConfig& cfg) {
  BatteryOptions b;
  if (cfg.battery == "default") {
    b.domains = default_battery_domains();
  } else if (cfg.battery != "none") {
    std::stringstream ss(cfg.battery);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) b.domains.push_back(item);
  }
  b.pairs = default_battery_pairs();
  b.resolution = cfg.resolution;
  b.min_short_cells = cfg.min_short_cells;
  b.monotonicity_slack = cfg.monotonicity_slack;
  b.solver = cfg.solver_options();
  return b;
}

namespace {

struct DomainData {
  std::string name;
  Grid2D grid;
  DomainMask mask;
  std::map<double, double> roots;
  const ScalarField* field2 = nullptr;
  const ScalarField* field3 = nullptr;
};

RatioReport make_report(const DomainData& d, double p, double q) {
  RatioReport r;
  r.p = p;
  r.q = q;
  r.domain = d.name;
  r.grid = d.grid;
  r.lambda_root_p = d.roots.at(p);
  r.lambda_root_q = d.roots.at(q);
  r.F = r.lambda_root_p / r.lambda_root_q;
  return r;
}

RatioReport label(const std::string& domain, double p, double q) {
  RatioReport r;
  r.domain = domain;
  r.p = p;
  r.q = q;
  return r;
}

// 1-D lambda_p^(1/p) on an interval of length L; p = 1 and p = inf are
// both 2 / L (Cheeger constant and inverse inradius of the interval).
double interval_root(double length, double p, int nodes, const SolverOptions& opts) {
  if (p == 1.0 || std::isinf(p)) return 2.0 / length;
  return std::pow(eigen_1d(length, p, nodes, opts), 1.0 / p);
}

}  // namespace

CheckReport run_battery(const BatteryOptions& opts) {
  if (opts.domains.empty()) throw InvalidArgument("nothing to verify");
  for (const auto& [p, q] : opts.pairs) check_regime(p, q);

  std::vector<double> exponents;
  for (const auto& [p, q] : opts.pairs) {
    exponents.push_back(p);
    exponents.push_back(q);
  }
  exponents.push_back(2.0);
  exponents.push_back(3.0);

  CheckReport report;
  std::vector<RootEvaluator> evaluators;
  evaluators.reserve(opts.domains.size());
  std::vector<DomainData> data;
  data.reserve(opts.domains.size());
  for (const auto& name : opts.domains) {
    DomainData d;
    d.name = name;
    const ShapePtr shape = parse_shape(name);
    d.grid = domain_grid(*shape, opts.resolution, opts.min_short_cells);
    d.mask = rasterize(*shape, d.grid);
    evaluators.emplace_back(opts.solver);
    RootEvaluator& roots = evaluators.back();
    std::vector<double> ps = exponents;
    if (std::find(opts.monotonicity_domains.begin(), opts.monotonicity_domains.end(), name) !=
        opts.monotonicity_domains.end())
      ps.insert(ps.end(), opts.monotonicity_p.begin(), opts.monotonicity_p.end());
    for (double p : ps)
      if (!d.roots.count(p)) d.roots[p] = roots(d.mask, d.grid, p);
    d.field2 = roots.eigenfunction(2.0);
    d.field3 = roots.eigenfunction(3.0);
    data.push_back(std::move(d));
  }

  for (const DomainData& d : data) {
    const bool convex = is_convex_shape(d.name);
    for (const auto& [p, q] : opts.pairs) {
      const bool convex_pair = convex && p == 2.0 && q == 1.0;
      report.append(verify_inequalities(make_report(d, p, q), convex_pair));
    }
  }

  for (const DomainData& d : data) {
    if (std::find(opts.monotonicity_domains.begin(), opts.monotonicity_domains.end(), d.name) ==
        opts.monotonicity_domains.end())
      continue;
    for (std::size_t k = 1; k < opts.monotonicity_p.size(); ++k) {
      const double p0 = opts.monotonicity_p[k - 1], p1 = opts.monotonicity_p[k];
      const double v0 = p0 * d.roots.at(p0), v1 = p1 * d.roots.at(p1);
      report.rows.push_back(lower_bound_check("monotonicity", label(d.name, p1, p0), v1,
                                              (1.0 - opts.monotonicity_slack) * v0,
                                              "p lambda_p^(1/p) nondecreasing in p (relative slack applied)"));
    }
  }

  // Nested battery domains: the smaller one has the larger lambda and h.
  const std::vector<std::pair<std::string, std::string>> nested{
      {"punctured-disk", "unit-disk"}, {"annulus", "unit-disk"}, {"l-shape", "unit-square"}};
  auto find = [&](const std::string& name) -> const DomainData* {
    for (const auto& d : data)
      if (d.name == name) return &d;
    return nullptr;
  };
  for (const auto& [inner, outer] : nested) {
    const DomainData* a = find(inner);
    const DomainData* b = find(outer);
    if (a == nullptr || b == nullptr || !(a->grid == b->grid) || !a->mask.subset_of(b->mask)) continue;
    const std::string pair_name = inner + "<" + outer;
    const double la = std::pow(a->roots.at(2.0), 2.0), lb = std::pow(b->roots.at(2.0), 2.0);
    report.rows.push_back(lower_bound_check("domain_monotonicity", label(pair_name, 2.0, 2.0), la,
                                            lb * (1.0 - 2.0 * opts.solver.tolerance),
                                            "A subset of B implies lambda_2(A) >= lambda_2(B)"));
    if (a->roots.count(1.0) && b->roots.count(1.0))
      report.rows.push_back(lower_bound_check("domain_monotonicity", label(pair_name, 1.0, 1.0), a->roots.at(1.0),
                                              0.98 * b->roots.at(1.0), "A subset of B implies h(A) >= h(B) (2% slack)"));
  }

  for (const DomainData& d : data) {
    for (const auto& [p, field] : {std::pair{2.0, d.field2}, std::pair{3.0, d.field3}}) {
      if (field == nullptr) continue;
      const double base = rayleigh_quotient(*field, p);
      ScalarField scaled = *field;
      scaled.grid = rescale_spacing(field->grid, 2.0);
      const double err = std::abs(rayleigh_quotient(scaled, p) / (std::pow(2.0, -p) * base) - 1.0);
      report.rows.push_back(upper_bound_check("scaling", label(d.name, p, p), err, 1e-12,
                                              "quotient under spacing t h equals t^-p times the quotient"));
    }
  }

  for (const auto& [p, q] : opts.pairs) {
    const double target = pi_p(p) / pi_p(q);
    for (double length : opts.one_d_lengths) {
      const double F = interval_root(length, p, opts.one_d_nodes, opts.solver) /
                       interval_root(length, q, opts.one_d_nodes, opts.solver);
      std::ostringstream name;
      name << "interval-" << length;
      report.rows.push_back(upper_bound_check("one_d", label(name.str(), p, q), std::abs(F / target - 1.0),
                                              opts.one_d_tolerance, "1-D F_{p,q} equals pi_p / pi_q"));
    }
  }
  return report;
}

}  // namespace cheegerlab
