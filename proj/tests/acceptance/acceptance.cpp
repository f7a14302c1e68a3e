// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Optional arguments select criteria by number, e.g. `acceptance 3 7`.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cheegerlab/battery.hpp"
#include "cheegerlab/cheeger.hpp"
#include "cheegerlab/config.hpp"
#include "cheegerlab/eigensolver.hpp"
#include "cheegerlab/ratio.hpp"
#include "cheegerlab/shapeopt.hpp"

using namespace cheegerlab;

namespace {

constexpr double kPi = std::numbers::pi;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double rel(double value, double target) { return std::abs(value / target - 1.0); }

// Accumulates sub-checks of one criterion and the text of its line.
struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::string fmt(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

Grid2D disk_grid(int n) { return make_grid(n, n, {2.2, 2.2}, {-1.1, -1.1}); }
Grid2D unit_grid(int n) { return make_grid(n, n, {1, 1}); }

// The default battery at 128^2 feeds criteria 4 to 7 and 10; it runs once.
const CheckReport& default_battery() {
  static const CheckReport report = [] {
    BatteryOptions b;
    b.domains = default_battery_domains();
    b.pairs = default_battery_pairs();
    return run_battery(b);
  }();
  return report;
}

void summarize_rows(Verdict& v, const std::string& name, const std::string& pair_filter = {}) {
  std::size_t total = 0, failed = 0;
  double min_margin = INFINITY;
  std::string worst;
  for (const Check& c : default_battery().rows) {
    if (c.name != name) continue;
    if (!pair_filter.empty() && c.domain.find(pair_filter) == std::string::npos) continue;
    ++total;
    if (!c.pass) {
      ++failed;
      v.require(false, name + " " + c.domain + " lhs=" + fmt(c.lhs) + " rhs=" + fmt(c.rhs));
    }
    if (c.margin < min_margin) {
      min_margin = c.margin;
      worst = c.domain;
    }
  }
  v.require(total > 0, "no " + name + " rows");
  v.detail << " " << name << ": " << total - failed << "/" << total << " pass, min margin " << fmt(min_margin, 4)
           << " (" << worst << ")";
}

Verdict criterion_1() {
  Verdict v;
  for (double p : {1.5, 2.0, 3.0, 5.0}) {
    const auto t0 = Clock::now();
    const double lambda = eigen_1d(1.0, p, 2000);
    const double dt = seconds_since(t0);
    const double target = std::pow(pi_p(p), p);
    const double err = rel(lambda, target);
    v.detail << " p=" << p << " lambda=" << fmt(lambda) << " target=" << fmt(target) << " err=" << fmt(err, 3)
             << " t=" << fmt(dt, 3) << "s;";
    v.require(err <= 0.005, "p=" + fmt(p) + " error");
    v.require(dt < 10.0, "p=" + fmt(p) + " runtime");
  }
  return v;
}

Verdict criterion_2() {
  Verdict v;
  const double j01 = 2.404825557695773;
  {
    const Grid2D g = disk_grid(256);
    const auto t0 = Clock::now();
    const EigenResult r = principal_eigen(rasterize(*make_disk({0, 0}, 1), g), g, 2);
    const double dt = seconds_since(t0);
    const double err = rel(r.lambda, j01 * j01);
    v.detail << " disk lambda=" << fmt(r.lambda) << " err=" << fmt(err, 3) << " t=" << fmt(dt, 3) << "s;";
    v.require(err <= 0.02 && dt < 60.0, "disk");
  }
  {
    const Grid2D g = unit_grid(256);
    const auto t0 = Clock::now();
    const EigenResult r = principal_eigen(DomainMask(256, 256, true), g, 2);
    const double dt = seconds_since(t0);
    const double err = rel(r.lambda, 2 * kPi * kPi);
    v.detail << " square lambda=" << fmt(r.lambda) << " err=" << fmt(err, 3) << " t=" << fmt(dt, 3) << "s";
    v.require(err <= 0.02 && dt < 60.0, "square");
  }
  return v;
}

Verdict criterion_3() {
  Verdict v;
  {
    const Grid2D g = unit_grid(256);
    const auto t0 = Clock::now();
    const CheegerResult r = cheeger_dinkelbach(DomainMask(256, 256, true), g, PerimeterMode::isotropic);
    const double err = rel(r.h, 2 + std::sqrt(kPi));
    v.detail << " square h=" << fmt(r.h) << " err=" << fmt(err, 3) << " t=" << fmt(seconds_since(t0), 3) << "s;";
    v.require(err <= 0.03, "square");
  }
  {
    const Grid2D g = disk_grid(256);
    const auto t0 = Clock::now();
    const CheegerResult r =
        cheeger_dinkelbach(rasterize(*make_disk({0, 0}, 1), g), g, PerimeterMode::isotropic);
    const double err = rel(r.h, 2.0);
    v.detail << " disk h=" << fmt(r.h) << " err=" << fmt(err, 3) << " t=" << fmt(seconds_since(t0), 3) << "s;";
    v.require(err <= 0.03, "disk");
  }
  std::mt19937_64 rng(2024);
  double worst = 0.0, slowest = 0.0;
  int masks = 0;
  while (masks < 30) {
    const int n = 4 + static_cast<int>(rng() % 3);
    const Grid2D g = make_grid(n, n, {1, 1});
    DomainMask m(n, n);
    const int target = 1 + static_cast<int>(rng() % 16);
    while (static_cast<int>(m.count()) < target) m.set(static_cast<std::size_t>(rng() % m.size()), true);
    const auto t0 = Clock::now();
    const CheegerResult bf = cheeger_bruteforce(m, g);
    slowest = std::max(slowest, seconds_since(t0));
    const CheegerResult dk = cheeger_dinkelbach(m, g, PerimeterMode::anisotropic);
    worst = std::max(worst, rel(dk.h, bf.h));
    ++masks;
  }
  v.detail << " random masks: " << masks << " worst rel diff " << fmt(worst, 3) << " slowest brute force "
           << fmt(slowest, 3) << "s";
  v.require(worst <= 1e-6, "oracle equivalence");
  v.require(slowest < 5.0, "brute-force runtime");
  return v;
}

Verdict criterion_4() {
  Verdict v;
  summarize_rows(v, "cheeger");
  return v;
}

Verdict criterion_5() {
  Verdict v;
  summarize_rows(v, "generalized");
  return v;
}

Verdict criterion_6() {
  Verdict v;
  summarize_rows(v, "monotonicity");
  return v;
}

Verdict criterion_7() {
  Verdict v;
  summarize_rows(v, "scaling");
  const Grid2D g = disk_grid(96);
  const DomainMask m = rasterize(*make_disk({0, 0}, 1), g);
  const SolverOptions opts;
  const double base = ratio_F(m, g, 2, 1, opts).F;
  for (double t : {0.5, 2.0}) {
    const double Ft = ratio_F(m, rescale_spacing(g, t), 2, 1, opts).F;
    const double err = rel(Ft, base);
    v.detail << "; re-solve t=" << t << " F=" << fmt(Ft, 10) << " vs " << fmt(base, 10) << " rel " << fmt(err, 3);
    v.require(err <= 2 * opts.tolerance, "re-solve t=" + fmt(t));
  }
  return v;
}

Verdict criterion_8() {
  Verdict v;
  const Grid2D g = disk_grid(256);
  const DomainMask big = rasterize(*make_disk({0, 0}, 1.0), g);
  const DomainMask small = rasterize(*make_disk({0, 0}, 0.5), g);
  // Radial torsions (1 - r^2)/4 and (1/4 - r^2)/4 differ by 3/16 inside r = 1/2.
  const double inner = kPi * 0.25 * std::pow(3.0 / 16.0, 2);
  const double outer = kPi / 8.0 * std::pow(0.75, 3) / 6.0;
  const double oracle = std::sqrt(inner + outer);
  const auto t0 = Clock::now();
  const double dab = gamma_distance(big, small, g, 2);
  const double dba = gamma_distance(small, big, g, 2);
  const double daa = gamma_distance(big, big, g, 2);
  const double err = rel(dab, oracle);
  v.detail << " d=" << fmt(dab) << " oracle=" << fmt(oracle) << " err=" << fmt(err, 3) << " d(A,A)=" << fmt(daa, 3)
           << " |d(A,B)-d(B,A)|=" << fmt(std::abs(dab - dba), 3) << " t=" << fmt(seconds_since(t0), 3) << "s";
  v.require(err <= 0.03, "value");
  v.require(daa <= 1e-6, "identity");
  v.require(dab == dba, "symmetry");
  return v;
}

Verdict criterion_9() {
  Verdict v;
  const Grid2D g = disk_grid(256);
  const DomainMask m = rasterize(*make_disk({0, 0}, 1.0), g);
  const TorsionResult r = torsion(m, g, 2);
  double wmax = 0.0;
  bool nonneg = true, supported = true;
  for (std::size_t k = 0; k < m.size(); ++k) {
    const double w = r.field.values[k];
    wmax = std::max(wmax, w);
    nonneg = nonneg && w >= 0.0;
    supported = supported && (m.at(k) || w == 0.0);
  }
  bool descending = true;
  for (std::size_t k = 1; k < r.energy_history.size(); ++k)
    descending = descending && r.energy_history[k] <= r.energy_history[k - 1];
  const double err = rel(wmax, 0.25);
  v.detail << " max w=" << fmt(wmax) << " err=" << fmt(err, 3) << " iterations=" << r.iterations
           << " clamp=" << fmt(r.clamp_magnitude, 3);
  v.require(err <= 0.02, "max w");
  v.require(nonneg, "w >= 0");
  v.require(supported, "support");
  v.require(descending && r.energy_history.size() > 1, "energy non-increase");
  return v;
}

Verdict criterion_10() {
  Verdict v;
  summarize_rows(v, "convex_lower");
  summarize_rows(v, "convex_upper");
  ParametricOptions o;
  o.golden_iterations = 0;
  const ParametricResult r = optimize_parametric(Family::rectangle, 2, 1, o);
  v.detail << "; thin-slab F:";
  double previous = 0.0;
  bool increasing = true;
  // The fixed sample curve comes first; the search points follow it.
  const std::size_t curve = o.sample_aspects.size();
  for (std::size_t k = 0; k < curve; ++k) {
    const ParametricSample& s = r.samples[k];
    v.detail << " " << s.aspect << "->" << fmt(s.F, 5);
    increasing = increasing && s.F > previous;
    previous = s.F;
  }
  const ParametricSample& thin = r.samples[curve - 1];
  const double err = rel(thin.F, kPi / 2);
  v.detail << " err(0.05 vs pi/2)=" << fmt(err, 3);
  v.require(thin.aspect == 0.05, "sample order");
  v.require(increasing, "monotone in aspect");
  v.require(err <= 0.06, "thin slab");
  return v;
}

Verdict criterion_11() {
  Verdict v;
  const auto t0 = Clock::now();
  const auto rows = puncture_experiment({0, 5, 20, 80}, kInfinity, 1, disk_grid(256), 0);
  bool increasing = true;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    v.detail << " n=" << rows[k].n << " F=" << fmt(rows[k].F, 5);
    if (k > 0) increasing = increasing && rows[k].F > rows[k - 1].F;
  }
  const double err = rel(rows.front().F, 0.5);
  v.detail << " err(n=0)=" << fmt(err, 3) << " t=" << fmt(seconds_since(t0), 3) << "s";
  v.require(increasing, "strict increase");
  v.require(err <= 0.03, "n=0 value");
  return v;
}

Verdict criterion_12() {
  Verdict v;
  const Grid2D g = unit_grid(64);
  const ShapePtr D = make_rectangle({0, 0}, 1, 1);
  AnnealOptions a;
  a.steps = 2000;
  a.seed = 7;
  SolverOptions s;
  s.seed = 7;
  s.inner_iterations = 200;

  const auto t0 = Clock::now();
  const ShapeOptResult r1 = optimize_mask(*D, g, 2, 1, a, s);
  const double dt = seconds_since(t0);
  const ShapeOptResult r2 = optimize_mask(*D, g, 2, 1, a, s);

  bool identical = r1.trace.size() == r2.trace.size() && r1.best_mask == r2.best_mask && r1.best_F == r2.best_F;
  for (std::size_t k = 0; identical && k < r1.trace.size(); ++k)
    identical = r1.trace[k].F == r2.trace[k].F && r1.trace[k].accepted == r2.trace[k].accepted &&
                r1.trace[k].best_F == r2.trace[k].best_F;

  bool monotone = true, bounded = true;
  for (std::size_t k = 1; k < r1.trace.size(); ++k) monotone = monotone && r1.trace[k].best_F <= r1.trace[k - 1].best_F;
  for (const TraceEntry& e : r1.trace)
    if (std::isfinite(e.F)) bounded = bounded && e.F >= 0.5;

  const double F_square = ratio_F(DomainMask(64, 64, true), g, 2, 1, s).F;
  v.detail << " initial F=" << fmt(r1.initial_F) << " best F=" << fmt(r1.best_F) << " F(square)=" << fmt(F_square)
           << " accepted=" << r1.accepted << " solver failures=" << r1.solver_failures
           << " rescaled lambda=" << fmt(r1.lambda_p_rescaled, 10) << " t=" << fmt(dt, 4) << "s per run";
  v.require(identical, "bit reproducibility");
  v.require(monotone, "best-so-far monotone");
  v.require(r1.rescaled && std::abs(r1.lambda_p_rescaled - 1.0) <= 0.01, "rescaled lambda");
  v.require(r1.best_F <= 1.02 * F_square, "best F vs square");
  v.require(bounded, "trace >= q/p");
  v.require(dt < 15 * 60, "runtime");
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"1-D closed form", criterion_1},
      {"2-D p=2 oracles", criterion_2},
      {"Cheeger oracles", criterion_3},
      {"Cheeger inequality on the battery", criterion_4},
      {"generalized inequality F >= q/p", criterion_5},
      {"monotonicity of p lambda_p^(1/p)", criterion_6},
      {"scaling invariance", criterion_7},
      {"gamma_p distance", criterion_8},
      {"torsion", criterion_9},
      {"convex bounds and thin slabs", criterion_10},
      {"puncture divergence", criterion_11},
      {"optimizer properties", criterion_12},
  };
  std::set<int> selected;
  for (int k = 1; k < argc; ++k) selected.insert(std::stoi(argv[k]));

  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << " [exception: " << e.what() << "]";
    }
    if (!v.pass) ++failures;
    std::cout << (v.pass ? "PASS" : "FAIL") << " C" << id << " " << criteria[k].first << " ("
              << fmt(seconds_since(t0), 4) << " s):" << v.detail.str() << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
