#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cheegerlab/cheeger.hpp"
#include "cheegerlab/error.hpp"

using namespace cheegerlab;

namespace {

DomainMask random_mask(std::mt19937_64& rng, int n, int max_cells) {
  DomainMask m(n, n);
  const int cells = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_cells));
  for (int k = 0; k < cells; ++k) m.set(static_cast<std::size_t>(rng() % static_cast<unsigned>(n * n)), true);
  return m;
}

double certificate(const CheegerResult& r, const Grid2D& g) {
  const PerimeterArea pa = perimeter_area(r.cheeger_set, g, r.mode);
  return pa.perimeter / pa.area;
}

}  // namespace

TEST_CASE("brute force oracle examples") {
  const Grid2D g = make_grid(4, 4, {1, 1});
  const CheegerResult full = cheeger_bruteforce(DomainMask(4, 4, true), g);
  CHECK(full.h == doctest::Approx(4.0));
  CHECK(full.cheeger_set == DomainMask(4, 4, true));

  DomainMask one(4, 4);
  one.set(3, 1, true);
  CHECK(cheeger_bruteforce(one, g).h == doctest::Approx(16.0));

  const Grid2D big = make_grid(5, 5, {1, 1});
  DomainMask many(5, 5);
  for (std::size_t k = 0; k < 21; ++k) many.set(k, true);
  CHECK_THROWS_WITH_AS(cheeger_bruteforce(many, big), "oracle bound exceeded", InvalidArgument);
}

TEST_CASE("brute force tie-break prefers smaller area, then lexicographic order") {
  // Two separate unit cells have equal ratio 4/h; the first in storage order wins.
  const Grid2D g = make_grid(4, 4, {1, 1});
  DomainMask m(4, 4);
  m.set(0, 0, true);
  m.set(3, 3, true);
  const CheegerResult r = cheeger_bruteforce(m, g);
  CHECK(r.cheeger_set.count() == 1);
  CHECK(r.cheeger_set(0, 0));
}

TEST_CASE("dinkelbach matches brute force on small masks") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 40; ++t) {
    const int n = 4 + static_cast<int>(rng() % 3);
    const Grid2D g = make_grid(n, n, {1, 1});
    const DomainMask m = random_mask(rng, n, 16);
    const CheegerResult d = cheeger_dinkelbach(m, g, PerimeterMode::anisotropic);
    const CheegerResult b = cheeger_bruteforce(m, g);
    CHECK(d.h == doctest::Approx(b.h).epsilon(1e-6));
    CHECK(d.cheeger_set.subset_of(m));
    CHECK(certificate(d, g) == doctest::Approx(d.h).epsilon(1e-9));
  }
  const Grid2D g = make_grid(4, 4, {1, 1});
  CHECK(cheeger_dinkelbach(DomainMask(4, 4, true), g, PerimeterMode::anisotropic).h == doctest::Approx(4.0));
}

TEST_CASE("brute force domain monotonicity is exact") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const Grid2D g = make_grid(5, 5, {1, 1});
    const DomainMask b = random_mask(rng, 5, 16);
    DomainMask a = b;
    for (std::size_t k = 0; k < a.size(); ++k)
      if (a.at(k) && rng() % 3 == 0) a.set(k, false);
    if (a.empty()) continue;
    CHECK(cheeger_bruteforce(a, g).h >= cheeger_bruteforce(b, g).h);
  }
}

TEST_CASE("dinkelbach history and certificate, isotropic") {
  const Grid2D g = make_grid(64, 64, {1, 1});
  const DomainMask m = rasterize(*make_polygon({{0.05, 0.05}, {0.95, 0.05}, {0.95, 0.5}, {0.5, 0.5}, {0.5, 0.95}, {0.05, 0.95}}), g);
  const CheegerResult r = cheeger_dinkelbach(m, g, PerimeterMode::isotropic);
  CHECK(r.h > 0.0);
  CHECK(!r.cheeger_set.empty());
  CHECK(r.cheeger_set.subset_of(m));
  CHECK(certificate(r, g) == doctest::Approx(r.h).epsilon(1e-9));
  for (std::size_t k = 1; k < r.history.size(); ++k) CHECK(r.history[k] < r.history[k - 1]);
  CHECK(r.history.back() == r.h);
  // The full mask is always a candidate.
  const PerimeterArea full = perimeter_area(m, g, PerimeterMode::isotropic);
  CHECK(r.h <= full.perimeter / full.area);
}

TEST_CASE("dinkelbach near the analytic values at moderate resolution") {
  const Grid2D g = make_grid(96, 96, {1, 1});
  CHECK(cheeger_dinkelbach(DomainMask(96, 96, true), g, PerimeterMode::isotropic).h ==
        doctest::Approx(2 + std::sqrt(std::numbers::pi)).epsilon(0.03));
  const Grid2D gd = make_grid(96, 96, {2.2, 2.2}, {-1.1, -1.1});
  CHECK(cheeger_dinkelbach(rasterize(*make_disk({0, 0}, 1), gd), gd, PerimeterMode::isotropic).h ==
        doctest::Approx(2.0).epsilon(0.03));
}

TEST_CASE("warm start reproduces the cold result") {
  const Grid2D g = make_grid(48, 48, {1, 1});
  const DomainMask m = rasterize(*make_disk({0.5, 0.5}, 0.45), g);
  const CheegerResult cold = cheeger_dinkelbach(m, g, PerimeterMode::isotropic);
  const CheegerResult warm = cheeger_dinkelbach(m, g, PerimeterMode::isotropic, {}, &cold);
  CHECK(warm.h <= cold.h);
  CHECK(warm.h == doctest::Approx(cold.h).epsilon(1e-9));
}

TEST_CASE("non-convergence carries the best set") {
  const Grid2D g = make_grid(32, 32, {1, 1});
  SolverOptions o;
  o.max_iterations = 1;
  o.tolerance = 1e-300;
  try {
    cheeger_dinkelbach(DomainMask(32, 32, true), g, PerimeterMode::isotropic, o);
    FAIL("expected CheegerNonConvergence");
  } catch (const CheegerNonConvergence& e) {
    CHECK(e.best().h < 4.0);
    CHECK(!e.best().cheeger_set.empty());
  }
}

TEST_CASE("errors") {
  const Grid2D g = make_grid(4, 4, {1, 1});
  CHECK_THROWS_AS(cheeger_dinkelbach(DomainMask(4, 4), g, PerimeterMode::isotropic), InvalidArgument);
  CHECK_THROWS_AS(cheeger_convex_oracle(*make_polygon({{0, 0}, {1, 0}, {0, 1}})), InvalidArgument);
}

TEST_CASE("convex oracle") {
  CHECK(cheeger_convex_oracle(*make_disk({0, 0}, 1.0)) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(cheeger_convex_oracle(*make_rectangle({0, 0}, 1, 1)) ==
        doctest::Approx(2 + std::sqrt(std::numbers::pi)).epsilon(1e-11));
  const double h = cheeger_convex_oracle(*make_rectangle({0, 0}, 1, 0.05));
  CHECK(1.0 / h == doctest::Approx(0.0240).epsilon(0.01));
  CHECK(h == doctest::Approx(41.6).epsilon(0.005));
}
