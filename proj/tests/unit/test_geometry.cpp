#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cheegerlab/error.hpp"
#include "cheegerlab/geometry.hpp"

using namespace cheegerlab;
using std::numbers::pi;

TEST_CASE("make_grid spacing and preconditions") {
  CHECK(make_grid(64, 64, {1, 1}).h == doctest::Approx(0.015625).epsilon(1e-15));
  CHECK(make_grid(2, 2, {1, 1}).h == 0.5);
  CHECK_THROWS_WITH_AS(make_grid(64, 32, {1, 1}), "anisotropic grid unsupported", InvalidArgument);
  CHECK_THROWS_AS(make_grid(1, 4, {1, 1}), InvalidArgument);
  CHECK_THROWS_AS(make_grid(4, 4, {0, 1}), InvalidArgument);
}

TEST_CASE("rescale_spacing") {
  const Grid2D g = make_grid(100, 100, {1, 1});
  CHECK(rescale_spacing(g, 1.0) == g);
  CHECK(rescale_spacing(g, 2.0).h == doctest::Approx(0.02));
  CHECK(rescale_spacing(g, 2.0).nx == 100);
  CHECK_THROWS_AS(rescale_spacing(g, 0.0), InvalidArgument);
}

TEST_CASE("rasterize disk, rectangle, punctures") {
  const Grid2D g = make_grid(128, 128, {1, 1});
  const DomainMask disk = rasterize(*make_disk({0.5, 0.5}, 0.4), g);
  const PerimeterArea pa = perimeter_area(disk, g, PerimeterMode::isotropic);
  CHECK(std::abs(pa.area - pi * 0.16) <= 2.0 * g.h * pa.perimeter);

  const DomainMask full = rasterize(*make_rectangle({0, 0}, 1, 1), g);
  CHECK(full.count() == g.size());

  std::vector<Point2> pts;
  for (int k = 0; k < 5; ++k) pts.push_back({0.3 + 0.1 * k + 0.001, 0.5 + 0.001});
  const DomainMask holes = rasterize(*make_punctured(make_disk({0.5, 0.5}, 0.4), pts, 1.0), g);
  CHECK(disk.count() - holes.count() == 5);
  CHECK(holes.subset_of(disk));

  CHECK_THROWS_WITH_AS(rasterize(*make_disk({0.5, 0.5}, 0.6), g), "shape escapes D", InvalidArgument);
}

TEST_CASE("rasterized disk area converges under refinement") {
  // Lattice point counts tie exactly at 64 -> 128 for this centered disk
  // (8224 = 4 x 2056), so the step-wise decrease is not strict.
  std::vector<double> err;
  for (int n : {64, 128, 256}) {
    const Grid2D g = make_grid(n, n, {1, 1});
    const DomainMask m = rasterize(*make_disk({0.5, 0.5}, 0.4), g);
    err.push_back(std::abs(perimeter_area(m, g, PerimeterMode::anisotropic).area - pi * 0.16));
  }
  CHECK(err[1] <= err[0]);
  CHECK(err[2] < err[1]);
}

TEST_CASE("perimeter_area examples") {
  const Grid2D g = make_grid(4, 4, {1, 1});
  const DomainMask full(4, 4, true);
  auto pa = perimeter_area(full, g, PerimeterMode::anisotropic);
  CHECK(pa.perimeter == doctest::Approx(4.0));
  CHECK(pa.area == doctest::Approx(1.0));

  DomainMask one(4, 4);
  one.set(1, 2, true);
  pa = perimeter_area(one, g, PerimeterMode::anisotropic);
  CHECK(pa.perimeter == doctest::Approx(1.0));
  CHECK(pa.area == doctest::Approx(0.0625));

  CHECK_THROWS_AS(perimeter_area(DomainMask(4, 4), g, PerimeterMode::anisotropic), InvalidArgument);

  const Grid2D fine = make_grid(256, 256, {1, 1});
  const DomainMask disk = rasterize(*make_disk({0.5, 0.5}, 0.4), fine);
  CHECK(perimeter_area(disk, fine, PerimeterMode::isotropic).perimeter == doctest::Approx(2 * pi * 0.4).epsilon(0.02));
}

TEST_CASE("area is monotone under inclusion") {
  const Grid2D g = make_grid(32, 32, {1, 1});
  const DomainMask a = rasterize(*make_disk({0.5, 0.5}, 0.2), g);
  const DomainMask b = rasterize(*make_disk({0.5, 0.5}, 0.3), g);
  REQUIRE(a.subset_of(b));
  for (auto mode : {PerimeterMode::anisotropic, PerimeterMode::isotropic})
    CHECK(perimeter_area(a, g, mode).area <= perimeter_area(b, g, mode).area);
}

TEST_CASE("isotropic stencil satisfies coarea on a two-level field") {
  // TV of 1_A + 1_B with A inside B equals P(A) + P(B) for a pairwise stencil.
  const Grid2D g = make_grid(40, 40, {1, 1});
  const DomainMask a = rasterize(*make_disk({0.5, 0.5}, 0.2), g);
  const DomainMask b = rasterize(*make_rectangle({0.1, 0.1}, 0.8, 0.7), g);
  double tv = 0.0;
  for (const NeighborOffset& e : perimeter_stencil(PerimeterMode::isotropic))
    for (int j = -2; j < g.ny + 2; ++j)
      for (int i = -2; i < g.nx + 2; ++i) {
        const int u = a.get_padded(i, j) + b.get_padded(i, j);
        const int v = a.get_padded(i + e.dx, j + e.dy) + b.get_padded(i + e.dx, j + e.dy);
        tv += e.weight * std::abs(u - v);
      }
  const double sum = perimeter_area(a, g, PerimeterMode::isotropic).perimeter +
                     perimeter_area(b, g, PerimeterMode::isotropic).perimeter;
  CHECK(tv * g.h == doctest::Approx(sum).epsilon(1e-12));
}

TEST_CASE("inradius") {
  const Grid2D g = make_grid(256, 256, {1, 1});
  CHECK(std::abs(inradius(DomainMask(256, 256, true), g) - 0.5) <= g.h);

  const DomainMask disk = rasterize(*make_disk({0.5, 0.5}, 0.4), g);
  CHECK(std::abs(inradius(disk, g) - 0.4) <= 2 * g.h);

  const Grid2D big = make_grid(221, 221, {2.21, 2.21}, {-1.105, -1.105});
  const DomainMask punctured = rasterize(*make_punctured(make_disk({0, 0}, 1.0), {{0, 0}}, 1.0), big);
  const double r = inradius(punctured, big);
  CHECK(r < 1.0);
  CHECK(r == doctest::Approx(0.5).epsilon(0.03));

  CHECK_THROWS_AS(inradius(DomainMask(4, 4), make_grid(4, 4, {1, 1})), InvalidArgument);

  // Pure arithmetic under spacing rescale.
  const Grid2D g2 = rescale_spacing(g, 2.5);
  CHECK(inradius(disk, g2) == doctest::Approx(2.5 * inradius(disk, g)).epsilon(1e-14));
}

TEST_CASE("erode") {
  const Grid2D g = make_grid(128, 128, {1, 1});
  const DomainMask sq(128, 128, true);
  CHECK(erode(sq, g, 0.0) == sq);
  const DomainMask e = erode(sq, g, 0.25);
  CHECK(std::abs(perimeter_area(e, g, PerimeterMode::anisotropic).area - 0.25) <= 4 * g.h);
  CHECK(inradius(e, g) >= inradius(sq, g) - 0.25 - 2 * g.h);

  const DomainMask disk = rasterize(*make_disk({0.5, 0.5}, 0.4), g);
  CHECK(erode(disk, g, 0.4).count() <= 1);
}

TEST_CASE("distance transform matches brute force") {
  const Grid2D g = make_grid(12, 9, {1.2, 0.9});
  const DomainMask m = rasterize(*make_polygon({{0.1, 0.1}, {1.1, 0.1}, {1.1, 0.5}, {0.5, 0.5}, {0.5, 0.8}, {0.1, 0.8}}), g);
  const auto dt = distance_transform(m, g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (!m(i, j)) {
        CHECK(dt[g.index(i, j)] == 0.0);
        continue;
      }
      double best = 1e9;
      for (int b = -1; b <= g.ny; ++b)
        for (int a = -1; a <= g.nx; ++a) {
          if (m.get_padded(a, b)) continue;
          const double dx = std::max(0.0, std::abs(a - i) - 0.5), dy = std::max(0.0, std::abs(b - j) - 0.5);
          best = std::min(best, std::hypot(dx, dy));
        }
      CHECK(dt[g.index(i, j)] == doctest::Approx(best * g.h).epsilon(1e-12));
    }
}

TEST_CASE("polygon validation") {
  CHECK_THROWS_AS(validate(*make_polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}})), InvalidArgument);
  CHECK_THROWS_AS(validate(*make_disk({0, 0}, -1)), InvalidArgument);
  CHECK_NOTHROW(validate(*make_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}})));
}

TEST_CASE("largest component") {
  DomainMask m(6, 6);
  m.set(0, 0, true);
  for (int i = 2; i < 5; ++i) m.set(i, 3, true);
  const DomainMask c = largest_component(m);
  CHECK(c.count() == 3);
  CHECK(!c(0, 0));
}
