#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace cheegerlab {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Uniform Cartesian grid of square cells covering the bounding box D.
///
/// Cell (i, j) spans [ox + i h, ox + (i+1) h] x [oy + j h, oy + (j+1) h];
/// linear storage index is i + nx * j.
struct Grid2D {
  int nx = 0;
  int ny = 0;
  double h = 0.0;
  double ox = 0.0;
  double oy = 0.0;

  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) + static_cast<std::size_t>(nx) * static_cast<std::size_t>(j); }
  Point2 center(int i, int j) const { return {ox + (i + 0.5) * h, oy + (j + 0.5) * h}; }
  Point2 extent() const { return {nx * h, ny * h}; }
  bool in_bounds(int i, int j) const { return i >= 0 && j >= 0 && i < nx && j < ny; }

  friend bool operator==(const Grid2D&, const Grid2D&) = default;
};

/// Builds a grid with square cells; extent_x / nx must equal extent_y / ny.
Grid2D make_grid(int nx, int ny, Point2 extent, Point2 origin = {});

/// Same cells, spacing and origin multiplied by t (realizes the dilation tΩ).
Grid2D rescale_spacing(const Grid2D& grid, double t);

/// Boolean membership field over a grid; the discrete stand-in for Ω ⊂ D.
class DomainMask {
 public:
  DomainMask() = default;
  DomainMask(int nx, int ny, bool value = false);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  std::size_t size() const { return cells_.size(); }

  bool operator()(int i, int j) const { return cells_[index(i, j)] != 0; }
  bool at(std::size_t k) const { return cells_[k] != 0; }
  void set(int i, int j, bool v) { cells_[index(i, j)] = v ? 1 : 0; }
  void set(std::size_t k, bool v) { cells_[k] = v ? 1 : 0; }

  /// Out-of-grid cells read as false (exterior of D).
  bool get_padded(int i, int j) const {
    return i >= 0 && j >= 0 && i < nx_ && j < ny_ && cells_[index(i, j)] != 0;
  }

  std::size_t count() const;
  bool empty() const { return count() == 0; }
  bool subset_of(const DomainMask& other) const;
  bool same_shape(const Grid2D& grid) const { return grid.nx == nx_ && grid.ny == ny_; }

  std::span<const std::uint8_t> data() const { return cells_; }

  friend bool operator==(const DomainMask&, const DomainMask&) = default;

 private:
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) + static_cast<std::size_t>(nx_) * static_cast<std::size_t>(j); }

  int nx_ = 0;
  int ny_ = 0;
  std::vector<std::uint8_t> cells_;
};

// ---------------------------------------------------------------------------
// Shapes

struct ShapeSpec;
using ShapePtr = std::shared_ptr<const ShapeSpec>;

struct Disk {
  Point2 center;
  double radius = 0.0;
};

struct Rectangle {
  Point2 corner;  // lower-left
  double width = 0.0;
  double height = 0.0;
};

struct Polygon {
  std::vector<Point2> vertices;
};

/// Base shape with whole cells removed around each point.
struct Punctured {
  ShapePtr base;
  std::vector<Point2> points;
  double radius_cells = 1.0;
};

struct Union {
  ShapePtr a, b;
};

struct Difference {
  ShapePtr a, b;
};

struct ShapeSpec {
  std::variant<Disk, Rectangle, Polygon, Punctured, Union, Difference> value;
};

ShapePtr make_disk(Point2 center, double radius);
ShapePtr make_rectangle(Point2 corner, double width, double height);
ShapePtr make_polygon(std::vector<Point2> vertices);
ShapePtr make_punctured(ShapePtr base, std::vector<Point2> points, double radius_cells = 1.0);
ShapePtr make_union(ShapePtr a, ShapePtr b);
ShapePtr make_difference(ShapePtr a, ShapePtr b);

struct BoundingBox {
  Point2 lo;
  Point2 hi;
};

BoundingBox bounding_box(const ShapeSpec& shape);

/// Point membership (closed sets). Punctures are ignored here; they act on
/// cells during rasterization.
bool contains(const ShapeSpec& shape, Point2 x);

/// Throws InvalidArgument when a primitive is degenerate or a polygon is not simple.
void validate(const ShapeSpec& shape);

/// Cell-center membership rasterization.
DomainMask rasterize(const ShapeSpec& shape, const Grid2D& grid);

// ---------------------------------------------------------------------------
// Perimeter, area, distance

enum class PerimeterMode { anisotropic, isotropic };

std::string to_string(PerimeterMode mode);
PerimeterMode perimeter_mode_from_string(const std::string& s);

/// One undirected neighbour direction of the discrete perimeter.
struct NeighborOffset {
  int dx;
  int dy;
  double weight;  // contribution per crossing pair, in units of h
};

/// Pairwise stencil behind both perimeter modes.
///
/// anisotropic: the two axis directions with unit weight; the perimeter of a
/// cell set is (number of faces between set and complement) * h.
///
/// isotropic: Cauchy-Crofton weights on the 16-neighbourhood, i.e. the eight
/// undirected directions (1,0) (2,1) (1,1) (1,2) (0,1) (-1,2) (-1,1) (-2,1)
/// with weight dphi_k / (2 |e_k|), where dphi_k is the angular width of the
/// direction's Voronoi sector on the half circle. The perimeter of a cell set
/// is h * sum over directions and ordered cell pairs (c, c+e_k) of
/// weight_k * |1_E(c+e_k) - 1_E(c)|. Cells outside the grid count as outside.
std::span<const NeighborOffset> perimeter_stencil(PerimeterMode mode);

struct PerimeterArea {
  double perimeter = 0.0;
  double area = 0.0;
};

PerimeterArea perimeter_area(const DomainMask& mask, const Grid2D& grid, PerimeterMode mode);

/// Exact Euclidean distance from each cell center to the union of closed
/// cells that are outside the mask (including everything outside the grid).
/// Zero on cells outside the mask.
std::vector<double> distance_transform(const DomainMask& mask, const Grid2D& grid);

double inradius(const DomainMask& mask, const Grid2D& grid);

/// Inner parallel set: cells whose distance value is at least r.
DomainMask erode(const DomainMask& mask, const Grid2D& grid, double r);

/// Largest 4-connected component (ties resolved by lowest cell index).
DomainMask largest_component(const DomainMask& mask);

}  // namespace cheegerlab
