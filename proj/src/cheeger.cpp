#include "cheegerlab/cheeger.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <limits>
#include <variant>

namespace cheegerlab {

namespace {

constexpr int kPad = 2;  // largest stencil offset
constexpr int kLevels = 99;
constexpr int kCheckEvery = 50;
constexpr double kInnerTolerance = 1e-6;
constexpr int kEscalations = 1;

/// Pairwise total variation on a padded copy of the grid.
///
/// Every field is dense over the padded array. u vanishes off the mask, so
/// edges with both ends outside keep a zero dual value and the flat index
/// wrap-around at row ends only ever touches padding.
class RelaxedProblem {
 public:
  RelaxedProblem(const DomainMask& mask, const Grid2D& grid, PerimeterMode mode)
      : grid_(grid), width_(grid.nx + 2 * kPad), height_(grid.ny + 2 * kPad) {
    const std::size_t n = static_cast<std::size_t>(width_) * height_;
    inside_.assign(n, 0.0);
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i)
        if (mask(i, j)) {
          inside_[padded(i, j)] = 1.0;
          cells_.push_back(static_cast<int>(padded(i, j)));
        }
    double w2 = 0.0;
    for (const NeighborOffset& e : perimeter_stencil(mode)) {
      Direction dir;
      dir.offset = e.dx + width_ * e.dy;
      dir.weight = e.weight;
      dir.begin = static_cast<std::size_t>(std::max(0, -dir.offset));
      dir.end = n - static_cast<std::size_t>(std::max(0, dir.offset));
      w2 += e.weight * e.weight;
      directions_.push_back(dir);
    }
    step_ = 1.0 / std::sqrt(4.0 * w2);
  }

  std::size_t padded(int i, int j) const {
    return static_cast<std::size_t>(i + kPad) + static_cast<std::size_t>(width_) * static_cast<std::size_t>(j + kPad);
  }
  std::size_t padded_size() const { return inside_.size(); }
  const std::vector<int>& cells() const { return cells_; }
  std::size_t dual_size() const { return directions_.size() * inside_.size(); }

  /// Runs primal-dual steps on u and y for  sum w |Du| - c sum u  until the
  /// largest change of u over kCheckEvery steps drops below kInnerTolerance
  /// or `iterations` steps are done. Returns the number of steps taken.
  int solve(std::vector<double>& u, std::vector<double>& y, double c, int iterations) const {
    const std::size_t n = inside_.size();
    std::vector<double> ubar = u, div(n), u_check = u;
    const double sigma = step_, tau = step_;
    int done = 0;
    while (done < iterations) {
      // Dual ascent with projection onto |y| <= 1.
      for (std::size_t k = 0; k < directions_.size(); ++k) {
        const Direction& dir = directions_[k];
        double* yk = y.data() + k * n;
        const double* ub = ubar.data();
        const double* ua = ubar.data() + dir.offset;
        const double sw = sigma * dir.weight;
        for (std::size_t a = dir.begin; a < dir.end; ++a)
          yk[a] = std::clamp(yk[a] + sw * (ua[a] - ub[a]), -1.0, 1.0);
      }
      // div = K^T y
      std::fill(div.begin(), div.end(), 0.0);
      for (std::size_t k = 0; k < directions_.size(); ++k) {
        const Direction& dir = directions_[k];
        const double* yk = y.data() + k * n;
        double* dt = div.data() + dir.offset;
        const double w = dir.weight;
        for (std::size_t a = dir.begin; a < dir.end; ++a) {
          dt[a] += w * yk[a];
          div[a] -= w * yk[a];
        }
      }
      // Primal descent with projection onto [0, 1] on the mask, then extrapolation.
      const double* in = inside_.data();
      for (std::size_t a = 0; a < n; ++a) {
        const double prev = u[a];
        const double next = in[a] * std::clamp(prev - tau * (div[a] - c), 0.0, 1.0);
        u[a] = next;
        ubar[a] = 2.0 * next - prev;
      }
      ++done;
      if (done % kCheckEvery == 0 || done == iterations) {
        double change = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
          change = std::max(change, std::abs(u[a] - u_check[a]));
          u_check[a] = u[a];
        }
        if (change < kInnerTolerance) {
          converged_ = true;
          return done;
        }
      }
    }
    converged_ = false;
    return done;
  }

  bool last_converged() const { return converged_; }

  /// Best superlevel set {u >= t} on the level ladder; returns (ratio in
  /// grid units, level index), level index -1 when every set is empty.
  std::pair<double, int> best_level(const std::vector<double>& u) const {
    std::array<double, kLevels + 1> perim{};
    std::array<double, kLevels + 1> area{};
    // Number of ladder levels (m + 1) / 100 that are <= v.
    auto levels_below = [](double v) {
      int m = static_cast<int>(std::floor(v * 100.0));
      m = std::clamp(m, 0, kLevels);
      while (m < kLevels && (m + 1) / 100.0 <= v) ++m;
      while (m > 0 && m / 100.0 > v) --m;
      return m;
    };
    for (const Direction& dir : directions_) {
      for (std::size_t a = dir.begin; a < dir.end; ++a) {
        const double ua = u[a], ub = u[a + static_cast<std::size_t>(dir.offset)];
        if (ua == ub) continue;
        // Level index m separates the pair when lo < t_m <= hi.
        const int m0 = levels_below(std::min(ua, ub)), m1 = levels_below(std::max(ua, ub));
        if (m0 >= m1) continue;
        perim[static_cast<std::size_t>(m0)] += dir.weight;
        perim[static_cast<std::size_t>(m1)] -= dir.weight;
      }
    }
    for (int a : cells_) {
      area[0] += 1.0;
      area[static_cast<std::size_t>(levels_below(u[static_cast<std::size_t>(a)]))] -= 1.0;
    }
    double best = std::numeric_limits<double>::infinity();
    int best_m = -1;
    double p = 0.0, q = 0.0;
    for (int m = 0; m < kLevels; ++m) {
      p += perim[static_cast<std::size_t>(m)];
      q += area[static_cast<std::size_t>(m)];
      if (q < 0.5) continue;
      const double r = p / q;
      if (r < best) {
        best = r;
        best_m = m;
      }
    }
    return {best, best_m};
  }

  DomainMask level_set(const std::vector<double>& u, int m) const {
    const double level = (m + 1) / 100.0;
    DomainMask out(grid_.nx, grid_.ny);
    for (int j = 0; j < grid_.ny; ++j)
      for (int i = 0; i < grid_.nx; ++i)
        if (inside_[padded(i, j)] > 0.0 && u[padded(i, j)] >= level) out.set(i, j, true);
    return out;
  }

  std::vector<double> indicator(const DomainMask& set) const {
    std::vector<double> u(inside_.size(), 0.0);
    for (int j = 0; j < grid_.ny; ++j)
      for (int i = 0; i < grid_.nx; ++i)
        if (set(i, j) && inside_[padded(i, j)] > 0.0) u[padded(i, j)] = 1.0;
    return u;
  }

 private:
  struct Direction {
    int offset = 0;
    double weight = 0.0;
    std::size_t begin = 0, end = 0;  // lower ends a with a and a + offset in the array
  };

  Grid2D grid_;
  int width_, height_;
  std::vector<double> inside_;
  std::vector<int> cells_;
  std::vector<Direction> directions_;
  double step_ = 0.0;
  mutable bool converged_ = false;
};

double set_ratio(const DomainMask& set, const Grid2D& grid, PerimeterMode mode) {
  const PerimeterArea pa = perimeter_area(set, grid, mode);
  return pa.perimeter / pa.area;
}

}  // namespace

CheegerResult cheeger_dinkelbach(const DomainMask& mask, const Grid2D& grid, PerimeterMode mode,
                                 const SolverOptions& opts, const CheegerResult* warm) {
  if (!mask.same_shape(grid)) throw InvalidArgument("mask does not match grid");
  if (mask.empty()) throw InvalidArgument("empty mask");
  check_options(opts);

  const RelaxedProblem problem(mask, grid, mode);
  CheegerResult result;
  result.mode = mode;
  result.cheeger_set = mask;
  result.h = set_ratio(mask, grid, mode);

  std::vector<double> u, y;
  if (warm != nullptr && warm->cheeger_set.same_shape(grid)) {
    DomainMask candidate = warm->cheeger_set;
    for (std::size_t k = 0; k < candidate.size(); ++k)
      if (!mask.at(k)) candidate.set(k, false);
    if (!candidate.empty()) {
      const double r = set_ratio(candidate, grid, mode);
      if (r < result.h) {
        result.h = r;
        result.cheeger_set = candidate;
      }
    }
    if (warm->relaxation.size() == problem.padded_size() && warm->dual.size() == problem.dual_size()) {
      u.assign(problem.padded_size(), 0.0);
      for (int a : problem.cells()) u[static_cast<std::size_t>(a)] = warm->relaxation[static_cast<std::size_t>(a)];
      y = warm->dual;
    }
  }
  if (u.empty()) u = problem.indicator(result.cheeger_set);
  if (y.empty()) y.assign(problem.dual_size(), 0.0);
  result.history.push_back(result.h);

  bool converged = false;
  for (int outer = 0; outer < opts.max_iterations; ++outer) {
    const double current = result.h;
    const double c = current * grid.h;  // ratio in grid units
    int budget = opts.inner_iterations;
    bool improved = false;
    for (int attempt = 0; attempt <= kEscalations; ++attempt) {
      const int used = problem.solve(u, y, c, budget);
      result.inner_iterations += used;
      const auto [ratio_grid, level] = problem.best_level(u);
      if (level >= 0 && ratio_grid / grid.h < current * (1.0 - 1e-13)) {
        DomainMask set = problem.level_set(u, level);
        const double r = set_ratio(set, grid, mode);
        if (r < current) {
          result.h = r;
          result.cheeger_set = std::move(set);
          improved = true;
          break;
        }
      }
      if (problem.last_converged()) break;  // a longer solve would not move u
      budget *= 4;
    }
    if (!improved) {
      converged = true;
      break;
    }
    result.iterations = outer + 1;
    result.history.push_back(result.h);
    if (current - result.h < opts.tolerance * current) {
      converged = true;
      break;
    }
  }
  result.relaxation = std::move(u);
  result.dual = std::move(y);
  if (!converged) throw CheegerNonConvergence(std::move(result));
  return result;
}

CheegerResult cheeger_bruteforce(const DomainMask& mask, const Grid2D& grid) {
  if (!mask.same_shape(grid)) throw InvalidArgument("mask does not match grid");
  std::vector<std::pair<int, int>> cells;
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      if (mask(i, j)) cells.emplace_back(i, j);
  const int n = static_cast<int>(cells.size());
  if (n == 0) throw InvalidArgument("empty mask");
  if (n > 20) throw InvalidArgument("oracle bound exceeded");

  // Storage order is lexicographic in (j, i); bit k is the k-th cell.
  std::vector<std::uint32_t> neighbours(static_cast<std::size_t>(n), 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const int di = std::abs(cells[a].first - cells[b].first), dj = std::abs(cells[a].second - cells[b].second);
      if (di + dj == 1) neighbours[a] |= 1u << b;
    }

  std::uint32_t set = 0, best_set = 0;
  long faces = 0, best_faces = 0;
  int size = 0, best_size = 0;
  auto better = [&](long f, int s, std::uint32_t bits) {
    if (best_size == 0) return true;
    const long lhs = f * best_size, rhs = best_faces * s;
    if (lhs != rhs) return lhs < rhs;
    if (s != best_size) return s < best_size;
    const std::uint32_t diff = bits ^ best_set;
    return diff != 0 && (bits & (diff & (~diff + 1))) != 0;
  };
  const std::uint32_t total = 1u << n;
  for (std::uint32_t step = 1; step < total; ++step) {
    const int bit = std::countr_zero(step);
    const std::uint32_t m = 1u << bit;
    const int touching = std::popcount(neighbours[bit] & set);
    if (set & m) {
      set &= ~m;
      faces -= 4 - 2 * touching;
      --size;
    } else {
      set |= m;
      faces += 4 - 2 * touching;
      ++size;
    }
    if (size > 0 && better(faces, size, set)) {
      best_set = set;
      best_faces = faces;
      best_size = size;
    }
  }

  CheegerResult result;
  result.mode = PerimeterMode::anisotropic;
  result.cheeger_set = DomainMask(grid.nx, grid.ny);
  for (int k = 0; k < n; ++k)
    if (best_set & (1u << k)) result.cheeger_set.set(cells[k].first, cells[k].second, true);
  result.h = static_cast<double>(best_faces) / (static_cast<double>(best_size) * grid.h);
  result.history.push_back(result.h);
  return result;
}

double cheeger_convex_oracle(const ShapeSpec& shape) {
  validate(shape);
  if (const auto* disk = std::get_if<Disk>(&shape.value)) return 2.0 / disk->radius;
  if (const auto* rect = std::get_if<Rectangle>(&shape.value)) {
    const double a = rect->width, b = rect->height;
    auto f = [&](double r) { return (a - 2.0 * r) * (b - 2.0 * r) - std::numbers::pi * r * r; };
    double lo = 0.0, hi = 0.5 * std::min(a, b);
    while (hi - lo > 1e-12 * std::max(1.0, hi)) {
      const double mid = 0.5 * (lo + hi);
      (f(mid) > 0.0 ? lo : hi) = mid;
    }
    return 1.0 / (0.5 * (lo + hi));
  }
  throw InvalidArgument("convex oracle supports disks and rectangles only");
}

}  // namespace cheegerlab
