#include "cheegerlab/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <tuple>

#include "cheegerlab/config.hpp"
#include "cheegerlab/error.hpp"
#include "cheegerlab/ratio.hpp"

namespace cheegerlab {

namespace {

std::vector<SweepRow> sweep_domain(const std::string& domain, const std::vector<double>& p_list,
                                   const std::vector<double>& q_list, const SweepOptions& opts) {
  std::vector<SweepRow> rows;
  for (double p : p_list)
    for (double q : q_list) {
      SweepRow r;
      r.domain = domain;
      r.p = p;
      r.q = q;
      rows.push_back(r);
    }
  try {
    const ShapePtr shape = parse_shape(domain);
    const Grid2D grid = domain_grid(*shape, opts.resolution, opts.min_short_cells);
    const DomainMask mask = rasterize(*shape, grid);
    RootEvaluator roots(opts.solver);
    std::vector<std::pair<double, double>> cache;
    auto root = [&](double p) {
      for (const auto& [k, v] : cache)
        if (k == p) return v;
      const double v = roots(mask, grid, p);
      cache.emplace_back(p, v);
      return v;
    };
    for (SweepRow& r : rows) {
      try {
        RatioReport rep;
        rep.p = r.p;
        rep.q = r.q;
        rep.domain = domain;
        rep.grid = grid;
        rep.lambda_root_p = root(r.p);
        rep.lambda_root_q = root(r.q);
        rep.F = rep.lambda_root_p / rep.lambda_root_q;
        r.lambda_root_p = rep.lambda_root_p;
        r.lambda_root_q = rep.lambda_root_q;
        r.F = rep.F;
        const CheckReport checks =
            verify_inequalities(rep, is_convex_shape(domain) && r.p == 2.0 && r.q == 1.0);
        r.checks_total = static_cast<int>(checks.rows.size());
        r.checks_passed = r.checks_total - static_cast<int>(checks.failures());
      } catch (const Error& e) {
        r.error = e.what();
      }
    }
  } catch (const Error& e) {
    for (SweepRow& r : rows) r.error = e.what();
  }
  return rows;
}

}  // namespace

SweepReport run_sweep(const std::vector<std::string>& domains, const std::vector<double>& p_list,
                      const std::vector<double>& q_list, const SweepOptions& opts) {
  if (domains.empty() || p_list.empty() || q_list.empty()) throw InvalidArgument("sweep lists must be non-empty");
  for (double p : p_list)
    for (double q : q_list) check_regime(p, q);
  check_options(opts.solver);

  std::vector<std::vector<SweepRow>> per_domain(domains.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < domains.size(); k = next++)
      per_domain[k] = sweep_domain(domains[k], p_list, q_list, opts);
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n_threads =
      std::min<std::size_t>(domains.size(), opts.threads > 0 ? static_cast<std::size_t>(opts.threads) : hw);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  SweepReport report;
  for (auto& rows : per_domain) report.rows.insert(report.rows.end(), rows.begin(), rows.end());
  std::sort(report.rows.begin(), report.rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::tie(a.domain, a.p, a.q) < std::tie(b.domain, b.p, b.q);
  });

  std::vector<std::pair<double, double>> pairs;
  for (double p : p_list)
    for (double q : q_list)
      if (std::find(pairs.begin(), pairs.end(), std::pair{p, q}) == pairs.end()) pairs.emplace_back(p, q);
  std::sort(pairs.begin(), pairs.end());
  for (const auto& [p, q] : pairs) {
    SweepSummary s;
    s.p = p;
    s.q = q;
    bool any = false;
    for (const SweepRow& r : report.rows) {
      if (r.p != p || r.q != q || !r.ok()) continue;
      if (!any || r.F < s.min_F) {
        s.min_F = r.F;
        s.min_domain = r.domain;
      }
      if (!any || r.F > s.max_F) {
        s.max_F = r.F;
        s.max_domain = r.domain;
      }
      any = true;
    }
    if (!any) s.note = "no successful rows";
    if (q <= 2.0) {
      s.note += std::string(s.note.empty() ? "" : "; ") +
                "sup over domains is infinite for q <= d = 2 (punctured disks), max is a sample only";
      if (!opts.punctures.empty() && p >= 2.0) {
        const Grid2D grid = make_grid(opts.resolution, opts.resolution, {2.2, 2.2}, {-1.1, -1.1});
        s.punctures = puncture_experiment(opts.punctures, p, q, grid, opts.seed, opts.solver);
      }
    }
    report.summaries.push_back(std::move(s));
  }
  return report;
}

}  // namespace cheegerlab
