#include "cheegerlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

#include "cheegerlab/error.hpp"

namespace cheegerlab {

Grid2D make_grid(int nx, int ny, Point2 extent, Point2 origin) {
  if (nx < 2 || ny < 2) throw InvalidArgument("grid needs at least 2 cells per axis");
  if (!(extent.x > 0.0) || !(extent.y > 0.0)) throw InvalidArgument("grid extent must be positive");
  const double hx = extent.x / nx;
  const double hy = extent.y / ny;
  if (std::abs(hx - hy) > 1e-12 * std::max(hx, hy)) throw InvalidArgument("anisotropic grid unsupported");
  return Grid2D{nx, ny, hx, origin.x, origin.y};
}

Grid2D rescale_spacing(const Grid2D& grid, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("rescale factor must be positive");
  Grid2D out = grid;
  out.h *= t;
  out.ox *= t;
  out.oy *= t;
  return out;
}

// ---------------------------------------------------------------------------

DomainMask::DomainMask(int nx, int ny, bool value)
    : nx_(nx), ny_(ny), cells_(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny), value ? 1 : 0) {
  if (nx < 1 || ny < 1) throw InvalidArgument("mask dimensions must be positive");
}

std::size_t DomainMask::count() const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

bool DomainMask::subset_of(const DomainMask& other) const {
  if (other.nx_ != nx_ || other.ny_ != ny_) return false;
  for (std::size_t k = 0; k < cells_.size(); ++k)
    if (cells_[k] && !other.cells_[k]) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Shapes

ShapePtr make_disk(Point2 center, double radius) {
  return std::make_shared<const ShapeSpec>(ShapeSpec{Disk{center, radius}});
}
ShapePtr make_rectangle(Point2 corner, double width, double height) {
  return std::make_shared<const ShapeSpec>(ShapeSpec{Rectangle{corner, width, height}});
}
ShapePtr make_polygon(std::vector<Point2> vertices) {
  return std::make_shared<const ShapeSpec>(ShapeSpec{Polygon{std::move(vertices)}});
}
ShapePtr make_punctured(ShapePtr base, std::vector<Point2> points, double radius_cells) {
  return std::make_shared<const ShapeSpec>(ShapeSpec{Punctured{std::move(base), std::move(points), radius_cells}});
}
ShapePtr make_union(ShapePtr a, ShapePtr b) {
  return std::make_shared<const ShapeSpec>(ShapeSpec{Union{std::move(a), std::move(b)}});
}
ShapePtr make_difference(ShapePtr a, ShapePtr b) {
  return std::make_shared<const ShapeSpec>(ShapeSpec{Difference{std::move(a), std::move(b)}});
}

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double cross(Point2 o, Point2 a, Point2 b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

bool on_segment(Point2 a, Point2 b, Point2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d) {
  const double d1 = cross(c, d, a), d2 = cross(c, d, b), d3 = cross(a, b, c), d4 = cross(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
  if (d1 == 0 && on_segment(c, d, a)) return true;
  if (d2 == 0 && on_segment(c, d, b)) return true;
  if (d3 == 0 && on_segment(a, b, c)) return true;
  if (d4 == 0 && on_segment(a, b, d)) return true;
  return false;
}

bool polygon_contains(const Polygon& poly, Point2 p) {
  const auto& v = poly.vertices;
  const std::size_t n = v.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2 a = v[j], b = v[i];
    if (cross(a, b, p) == 0.0 && on_segment(a, b, p)) return true;
    if ((b.y > p.y) != (a.y > p.y)) {
      const double xs = b.x + (p.y - b.y) * (a.x - b.x) / (a.y - b.y);
      if (p.x < xs) inside = !inside;
    }
  }
  return inside;
}

void require_shape(const ShapePtr& s) {
  if (!s) throw InvalidArgument("null shape operand");
}

DomainMask raster_into(const ShapeSpec& shape, const Grid2D& grid) {
  return std::visit(
      Overloaded{
          [&](const Punctured& s) {
            DomainMask m = raster_into(*s.base, grid);
            const double r2 = s.radius_cells * s.radius_cells;
            const int reach = static_cast<int>(std::ceil(s.radius_cells));
            for (const Point2& pt : s.points) {
              const int i0 = std::clamp(static_cast<int>(std::floor((pt.x - grid.ox) / grid.h)), 0, grid.nx - 1);
              const int j0 = std::clamp(static_cast<int>(std::floor((pt.y - grid.oy) / grid.h)), 0, grid.ny - 1);
              for (int dj = -reach; dj <= reach; ++dj)
                for (int di = -reach; di <= reach; ++di)
                  if (di * di + dj * dj < r2 && grid.in_bounds(i0 + di, j0 + dj)) m.set(i0 + di, j0 + dj, false);
            }
            return m;
          },
          [&](const Union& s) {
            DomainMask a = raster_into(*s.a, grid);
            const DomainMask b = raster_into(*s.b, grid);
            for (std::size_t k = 0; k < a.size(); ++k)
              if (b.at(k)) a.set(k, true);
            return a;
          },
          [&](const Difference& s) {
            DomainMask a = raster_into(*s.a, grid);
            const DomainMask b = raster_into(*s.b, grid);
            for (std::size_t k = 0; k < a.size(); ++k)
              if (b.at(k)) a.set(k, false);
            return a;
          },
          [&](const auto&) {
            DomainMask m(grid.nx, grid.ny);
            for (int j = 0; j < grid.ny; ++j)
              for (int i = 0; i < grid.nx; ++i)
                if (contains(shape, grid.center(i, j))) m.set(i, j, true);
            return m;
          },
      },
      shape.value);
}

}  // namespace

BoundingBox bounding_box(const ShapeSpec& shape) {
  return std::visit(
      Overloaded{
          [](const Disk& s) {
            return BoundingBox{{s.center.x - s.radius, s.center.y - s.radius},
                               {s.center.x + s.radius, s.center.y + s.radius}};
          },
          [](const Rectangle& s) {
            return BoundingBox{s.corner, {s.corner.x + s.width, s.corner.y + s.height}};
          },
          [](const Polygon& s) {
            if (s.vertices.empty()) throw InvalidArgument("polygon without vertices");
            BoundingBox b{s.vertices.front(), s.vertices.front()};
            for (const Point2& v : s.vertices) {
              b.lo = {std::min(b.lo.x, v.x), std::min(b.lo.y, v.y)};
              b.hi = {std::max(b.hi.x, v.x), std::max(b.hi.y, v.y)};
            }
            return b;
          },
          [](const Punctured& s) {
            require_shape(s.base);
            return bounding_box(*s.base);
          },
          [](const Union& s) {
            require_shape(s.a);
            require_shape(s.b);
            const BoundingBox a = bounding_box(*s.a), b = bounding_box(*s.b);
            return BoundingBox{{std::min(a.lo.x, b.lo.x), std::min(a.lo.y, b.lo.y)},
                               {std::max(a.hi.x, b.hi.x), std::max(a.hi.y, b.hi.y)}};
          },
          [](const Difference& s) {
            require_shape(s.a);
            return bounding_box(*s.a);
          },
      },
      shape.value);
}

bool contains(const ShapeSpec& shape, Point2 x) {
  return std::visit(
      Overloaded{
          [&](const Disk& s) {
            const double dx = x.x - s.center.x, dy = x.y - s.center.y;
            return dx * dx + dy * dy <= s.radius * s.radius;
          },
          [&](const Rectangle& s) {
            return x.x >= s.corner.x && x.x <= s.corner.x + s.width && x.y >= s.corner.y &&
                   x.y <= s.corner.y + s.height;
          },
          [&](const Polygon& s) { return polygon_contains(s, x); },
          [&](const Punctured& s) { return contains(*s.base, x); },
          [&](const Union& s) { return contains(*s.a, x) || contains(*s.b, x); },
          [&](const Difference& s) { return contains(*s.a, x) && !contains(*s.b, x); },
      },
      shape.value);
}

void validate(const ShapeSpec& shape) {
  std::visit(Overloaded{
                 [](const Disk& s) {
                   if (!(s.radius > 0.0)) throw InvalidArgument("disk radius must be positive");
                 },
                 [](const Rectangle& s) {
                   if (!(s.width > 0.0) || !(s.height > 0.0))
                     throw InvalidArgument("rectangle width and height must be positive");
                 },
                 [](const Polygon& s) {
                   const auto& v = s.vertices;
                   const std::size_t n = v.size();
                   if (n < 3) throw InvalidArgument("polygon needs at least 3 vertices");
                   double area2 = 0.0;
                   for (std::size_t i = 0; i < n; ++i) area2 += cross({0, 0}, v[i], v[(i + 1) % n]);
                   if (area2 == 0.0) throw InvalidArgument("degenerate polygon");
                   for (std::size_t i = 0; i < n; ++i) {
                     for (std::size_t k = i + 1; k < n; ++k) {
                       const bool adjacent = k == i + 1 || (i == 0 && k == n - 1);
                       if (adjacent) continue;
                       if (segments_intersect(v[i], v[(i + 1) % n], v[k], v[(k + 1) % n]))
                         throw InvalidArgument("polygon is not simple");
                     }
                   }
                 },
                 [](const Punctured& s) {
                   require_shape(s.base);
                   if (!(s.radius_cells > 0.0)) throw InvalidArgument("puncture radius must be positive");
                   validate(*s.base);
                 },
                 [](const Union& s) {
                   require_shape(s.a);
                   require_shape(s.b);
                   validate(*s.a);
                   validate(*s.b);
                 },
                 [](const Difference& s) {
                   require_shape(s.a);
                   require_shape(s.b);
                   validate(*s.a);
                   validate(*s.b);
                 },
             },
             shape.value);
}

DomainMask rasterize(const ShapeSpec& shape, const Grid2D& grid) {
  validate(shape);
  const BoundingBox box = bounding_box(shape);
  const Point2 ext = grid.extent();
  const double slack = 1e-9 * std::max(ext.x, ext.y);
  if (box.lo.x < grid.ox - slack || box.lo.y < grid.oy - slack || box.hi.x > grid.ox + ext.x + slack ||
      box.hi.y > grid.oy + ext.y + slack)
    throw InvalidArgument("shape escapes D");
  DomainMask m = raster_into(shape, grid);
  if (m.empty()) throw InvalidArgument("rasterized shape is empty");
  return m;
}

// ---------------------------------------------------------------------------

std::string to_string(PerimeterMode mode) {
  return mode == PerimeterMode::anisotropic ? "anisotropic" : "isotropic";
}

PerimeterMode perimeter_mode_from_string(const std::string& s) {
  if (s == "anisotropic") return PerimeterMode::anisotropic;
  if (s == "isotropic") return PerimeterMode::isotropic;
  throw InvalidArgument("unknown perimeter mode '" + s + "'");
}

namespace {

std::array<NeighborOffset, 8> make_crofton_stencil() {
  // Sorted by angle on [0, pi).
  std::array<NeighborOffset, 8> s{{{1, 0, 0}, {2, 1, 0}, {1, 1, 0}, {1, 2, 0},
                                   {0, 1, 0}, {-1, 2, 0}, {-1, 1, 0}, {-2, 1, 0}}};
  std::array<double, 8> angle{};
  for (std::size_t k = 0; k < s.size(); ++k) angle[k] = std::atan2(double(s[k].dy), double(s[k].dx));
  const double pi = std::numbers::pi;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double prev = k == 0 ? angle.back() - pi : angle[k - 1];
    const double next = k + 1 == s.size() ? angle.front() + pi : angle[k + 1];
    const double dphi = 0.5 * (next - prev);
    s[k].weight = dphi / (2.0 * std::hypot(double(s[k].dx), double(s[k].dy)));
  }
  return s;
}

}  // namespace

std::span<const NeighborOffset> perimeter_stencil(PerimeterMode mode) {
  static const std::array<NeighborOffset, 2> axis{{{1, 0, 1.0}, {0, 1, 1.0}}};
  static const std::array<NeighborOffset, 8> crofton = make_crofton_stencil();
  if (mode == PerimeterMode::anisotropic) return axis;
  return crofton;
}

PerimeterArea perimeter_area(const DomainMask& mask, const Grid2D& grid, PerimeterMode mode) {
  if (!mask.same_shape(grid)) throw InvalidArgument("mask does not match grid");
  const auto stencil = perimeter_stencil(mode);
  std::size_t cells = 0;
  double crossings = 0.0;
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      if (!mask(i, j)) continue;
      ++cells;
      for (const NeighborOffset& e : stencil) {
        if (!mask.get_padded(i + e.dx, j + e.dy)) crossings += e.weight;
        if (!mask.get_padded(i - e.dx, j - e.dy)) crossings += e.weight;
      }
    }
  }
  if (cells == 0) throw InvalidArgument("empty mask");
  return {crossings * grid.h, static_cast<double>(cells) * grid.h * grid.h};
}

// ---------------------------------------------------------------------------
// Distance transform.
//
// The squared distance from the center of cell c to the closed square of cell
// q separates as f(c.i - q.i) + f(c.j - q.j) with f(0) = 0 and
// f(k) = (|k| - 1/2)^2 otherwise, measured in cells. A column pass computes
// the nearest outside cell per column, a row pass minimizes over columns.

namespace {

double half_offset_sq(long k) {
  if (k == 0) return 0.0;
  const double a = std::abs(static_cast<double>(k)) - 0.5;
  return a * a;
}

}  // namespace

std::vector<double> distance_transform(const DomainMask& mask, const Grid2D& grid) {
  if (!mask.same_shape(grid)) throw InvalidArgument("mask does not match grid");
  const int nx = grid.nx, ny = grid.ny;
  // Column pass on columns -1..nx (the two exterior columns are all outside).
  const int cols = nx + 2;
  std::vector<double> column(static_cast<std::size_t>(cols) * ny, 0.0);
  std::vector<int> nearest(ny);
  for (int i = 0; i < nx; ++i) {
    int last = -1;  // exterior row below
    for (int j = 0; j < ny; ++j) {
      if (!mask(i, j)) last = j;
      nearest[j] = j - last;
    }
    last = ny;
    for (int j = ny - 1; j >= 0; --j) {
      if (!mask(i, j)) last = j;
      const int up = last - j;
      column[static_cast<std::size_t>(i + 1) + static_cast<std::size_t>(cols) * j] =
          half_offset_sq(std::min(nearest[j], up));
    }
  }
  std::vector<double> dist(grid.size(), 0.0);
  for (int j = 0; j < ny; ++j) {
    const double* row = column.data() + static_cast<std::size_t>(cols) * j;
    for (int i = 0; i < nx; ++i) {
      if (!mask(i, j)) continue;
      double best = std::numeric_limits<double>::infinity();
      for (int s = 0;; ++s) {
        const double fs = half_offset_sq(s);
        if (fs >= best) break;
        if (i - s >= -1) best = std::min(best, fs + row[i - s + 1]);
        if (s > 0 && i + s <= nx) best = std::min(best, fs + row[i + s + 1]);
        if (i - s < -1 && i + s > nx) break;
      }
      dist[grid.index(i, j)] = std::sqrt(best) * grid.h;
    }
  }
  return dist;
}

double inradius(const DomainMask& mask, const Grid2D& grid) {
  if (mask.empty()) throw InvalidArgument("empty mask");
  const auto d = distance_transform(mask, grid);
  return *std::max_element(d.begin(), d.end());
}

DomainMask erode(const DomainMask& mask, const Grid2D& grid, double r) {
  if (!(r >= 0.0)) throw InvalidArgument("erosion radius must be non-negative");
  if (r == 0.0) return mask;
  const auto d = distance_transform(mask, grid);
  DomainMask out(grid.nx, grid.ny);
  for (std::size_t k = 0; k < d.size(); ++k)
    if (mask.at(k) && d[k] >= r) out.set(k, true);
  return out;
}

DomainMask largest_component(const DomainMask& mask) {
  const int nx = mask.nx(), ny = mask.ny();
  std::vector<int> label(mask.size(), -1);
  int best_label = -1;
  std::size_t best_size = 0;
  int next = 0;
  std::queue<std::pair<int, int>> queue;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t k = static_cast<std::size_t>(i) + static_cast<std::size_t>(nx) * j;
      if (!mask.at(k) || label[k] >= 0) continue;
      std::size_t size = 0;
      label[k] = next;
      queue.emplace(i, j);
      while (!queue.empty()) {
        auto [a, b] = queue.front();
        queue.pop();
        ++size;
        constexpr int di[4] = {1, -1, 0, 0};
        constexpr int dj[4] = {0, 0, 1, -1};
        for (int n = 0; n < 4; ++n) {
          const int a2 = a + di[n], b2 = b + dj[n];
          if (!mask.get_padded(a2, b2)) continue;
          const std::size_t k2 = static_cast<std::size_t>(a2) + static_cast<std::size_t>(nx) * b2;
          if (label[k2] >= 0) continue;
          label[k2] = next;
          queue.emplace(a2, b2);
        }
      }
      if (size > best_size) {
        best_size = size;
        best_label = next;
      }
      ++next;
    }
  }
  DomainMask out(nx, ny);
  for (std::size_t k = 0; k < label.size(); ++k)
    if (label[k] == best_label && best_label >= 0) out.set(k, true);
  return out;
}

}  // namespace cheegerlab
