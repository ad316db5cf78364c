#include <cmath>
#include <utility>
#include <vector>

#include "doctest.h"
#include "hsad/cube.hpp"
#include "hsad/linear_map.hpp"
#include "hsad/rng.hpp"
#include "support/oracles.hpp"

using hsad::Cube;
using hsad::CubeShape;
using hsad::LinearMap;

namespace {

// |<Lx, y> - <x, L*y>| relative to the magnitudes involved.
double adjoint_defect(const LinearMap &map, const CubeShape &in,
                      hsad::Rng &rng) {
  const Cube x = oracle::random_cube(in, rng);
  const Cube y = oracle::random_cube(map.output_shape(in), rng);
  const double lhs = hsad::inner(map.forward(x), y);
  const double rhs = hsad::inner(x, map.adjoint(y));
  const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
  return std::abs(lhs - rhs) / scale;
}

}  // namespace

TEST_CASE("difference operators match hand values") {
  const Cube ramp = Cube::from_values({3, 1, 1}, {1.0, 4.0, 9.0});
  const Cube dv = hsad::vertical_diff().forward(ramp);
  CHECK(dv(0, 0, 0) == 3.0);
  CHECK(dv(1, 0, 0) == 5.0);
  CHECK(dv(2, 0, 0) == 0.0);

  const Cube dual = Cube::from_values({3, 1, 1}, {1.0, 2.0, 3.0});
  const Cube dvt = hsad::vertical_diff().adjoint(dual);
  CHECK(dvt(0, 0, 0) == -1.0);
  CHECK(dvt(1, 0, 0) == -1.0);
  CHECK(dvt(2, 0, 0) == 2.0);

  const Cube hramp = Cube::from_values({1, 3, 1}, {1.0, 4.0, 9.0});
  const Cube dh = hsad::horizontal_diff().forward(hramp);
  CHECK(dh(0, 0, 0) == 3.0);
  CHECK(dh(0, 1, 0) == 5.0);
  CHECK(dh(0, 2, 0) == 0.0);

  const Cube bramp = Cube::from_values({1, 1, 3}, {1.0, 4.0, 9.0});
  const Cube db = hsad::spectral_diff().forward(bramp);
  CHECK(db(0, 0, 0) == 3.0);
  CHECK(db(0, 0, 1) == 5.0);
  CHECK(db(0, 0, 2) == 0.0);
}

TEST_CASE("adjoint identity holds for every map") {
  hsad::Rng rng(5);
  const CubeShape shape{6, 5, 4};
  const std::vector<std::pair<const char *, LinearMap>> maps = {
      {"identity", hsad::identity_map()},
      {"vertical", hsad::vertical_diff()},
      {"horizontal", hsad::horizontal_diff()},
      {"spectral", hsad::spectral_diff()},
      {"spatial", hsad::spatial_diff()},
      {"hsstv05", hsad::hsstv_diff(0.05)},
      {"hsstv13", hsad::hsstv_diff(1.3)},
      {"matricize", hsad::matricize(6, 5)},
      {"spatial-of-spectral",
       hsad::compose(hsad::spatial_diff(), hsad::spectral_diff())},
      {"stack", hsad::stack_bands(hsad::vertical_diff(), hsad::spectral_diff())},
      {"scaled", hsad::scale_map(hsad::horizontal_diff(), 2.5)},
  };
  for (const auto &[name, map] : maps) {
    CAPTURE(name);
    for (int trial = 0; trial < 20; ++trial) {
      CHECK(adjoint_defect(map, shape, rng) <= 1e-10);
    }
  }
}

TEST_CASE("maps are linear") {
  hsad::Rng rng(6);
  const CubeShape shape{5, 4, 3};
  const std::vector<LinearMap> maps = {
      hsad::vertical_diff(), hsad::spatial_diff(), hsad::hsstv_diff(0.7),
      hsad::matricize(5, 4)};
  for (const auto &map : maps) {
    const Cube x = oracle::random_cube(shape, rng);
    const Cube y = oracle::random_cube(shape, rng);
    const Cube lhs =
        map.forward(hsad::add(hsad::scale(x, 0.3), hsad::scale(y, -1.7)));
    const Cube rhs =
        hsad::add(hsad::scale(map.forward(x), 0.3), hsad::scale(map.forward(y), -1.7));
    CHECK(oracle::max_abs_diff(lhs, rhs) <= 1e-12);
  }
}

TEST_CASE("operator norm estimates never exceed the certified bounds") {
  const CubeShape shape{16, 16, 8};
  const double omega = 0.05;
  const std::vector<std::pair<LinearMap, double>> cases = {
      {hsad::vertical_diff(), 2.0},
      {hsad::horizontal_diff(), 2.0},
      {hsad::spectral_diff(), 2.0},
      {hsad::spatial_diff(), 2.0 * std::sqrt(2.0)},
      {hsad::compose(hsad::spatial_diff(), hsad::spectral_diff()),
       4.0 * std::sqrt(2.0)},
      {hsad::hsstv_diff(omega), std::sqrt(32.0 + 8.0 * omega * omega)},
      {hsad::identity_map(), 1.0},
      {hsad::matricize(16, 16), 1.0},
  };
  for (const auto &[map, bound] : cases) {
    CAPTURE(bound);
    CHECK(map.opnorm_bound() == doctest::Approx(bound).epsilon(1e-15));
    const double est = hsad::estimate_opnorm(map, shape, 150, 3);
    CHECK(est <= bound + 1e-6);
    CHECK(est > 0.0);
  }
}

TEST_CASE("vertical difference estimate approaches 2 on tall inputs") {
  const double est =
      hsad::estimate_opnorm(hsad::vertical_diff(), CubeShape{64, 8, 4}, 200, 1);
  CHECK(est > 1.8);
  CHECK(est <= 2.0 + 1e-6);
}

TEST_CASE("estimate_opnorm is deterministic and validates input") {
  const LinearMap map = hsad::spatial_diff();
  const CubeShape shape{8, 8, 3};
  CHECK(hsad::estimate_opnorm(map, shape, 50, 9) ==
        hsad::estimate_opnorm(map, shape, 50, 9));
  CHECK(hsad::estimate_opnorm(map, shape, 50, 9) !=
        hsad::estimate_opnorm(map, shape, 50, 10));
  CHECK_THROWS_AS(hsad::estimate_opnorm(map, CubeShape{0, 1, 1}, 10),
                  hsad::ShapeError);
  CHECK_THROWS_AS(hsad::estimate_opnorm(map, shape, 0), hsad::ShapeError);
  // A null map stalls immediately and reports zero.
  CHECK(hsad::estimate_opnorm(hsad::scale_map(hsad::identity_map(), 0.0),
                              shape) == 0.0);
}

TEST_CASE("matricize lays out tubes as columns") {
  const Cube x = Cube::from_values({2, 1, 2}, {1.0, 2.0, 3.0, 4.0});
  const LinearMap m = hsad::matricize(2, 1);
  const Cube mat = m.forward(x);
  REQUIRE(mat.shape() == CubeShape{2, 2, 1});
  const std::vector<double> expected = {1.0, 3.0, 2.0, 4.0};
  for (std::size_t e = 0; e < 4; ++e) CHECK(mat.values()[e] == expected[e]);

  const Cube back = m.adjoint(mat);
  CHECK(oracle::max_abs_diff(back, x) == 0.0);
  CHECK(hsad::frobenius_norm(mat) == hsad::frobenius_norm(x));
}

TEST_CASE("matricize rejects foreign shapes") {
  const LinearMap m = hsad::matricize(3, 3);
  CHECK_THROWS_AS(m.forward(Cube(2, 2, 2)), hsad::ShapeError);
  CHECK_THROWS_AS(m.adjoint(Cube(2, 2, 2)), hsad::ShapeError);
  CHECK_THROWS_AS(m.output_shape(CubeShape{2, 2, 2}), hsad::ShapeError);
  CHECK(m.output_shape(CubeShape{3, 3, 7}) == CubeShape{7, 9, 1});
  CHECK_THROWS_AS(hsad::matricize(0, 3), hsad::ShapeError);
}

TEST_CASE("stacking concatenates bands pixelwise") {
  hsad::Rng rng(7);
  const CubeShape shape{4, 3, 2};
  const Cube x = oracle::random_cube(shape, rng);
  const LinearMap stack =
      hsad::stack_bands(hsad::vertical_diff(), hsad::horizontal_diff());
  const Cube out = stack.forward(x);
  const Cube top = hsad::vertical_diff().forward(x);
  const Cube bottom = hsad::horizontal_diff().forward(x);
  REQUIRE(out.shape() == CubeShape{4, 3, 4});
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      for (std::size_t k = 0; k < 2; ++k) {
        CHECK(out(i, j, k) == top(i, j, k));
        CHECK(out(i, j, 2 + k) == bottom(i, j, k));
      }
    }
  }
  CHECK(stack.band_factor() == 2);
  CHECK(hsad::spatial_diff().band_factor() == 2);
  CHECK(hsad::hsstv_diff(0.5).band_factor() == 4);
  CHECK(hsad::matricize(2, 2).band_factor() == 0);
  CHECK_THROWS_AS(hsad::stack_bands(hsad::matricize(2, 2), hsad::vertical_diff()),
                  hsad::ShapeError);
  CHECK_THROWS_AS(stack.adjoint(Cube(4, 3, 3)), hsad::ShapeError);
}

TEST_CASE("compose and scale behave pointwise") {
  hsad::Rng rng(8);
  const CubeShape shape{5, 5, 3};
  const Cube x = oracle::random_cube(shape, rng);

  const LinearMap composed =
      hsad::compose(hsad::spectral_diff(), hsad::vertical_diff());
  const Cube expect =
      hsad::spectral_diff().forward(hsad::vertical_diff().forward(x));
  CHECK(oracle::max_abs_diff(composed.forward(x), expect) == 0.0);
  CHECK(composed.opnorm_bound_sq() == 16.0);

  const LinearMap scaled = hsad::scale_map(hsad::vertical_diff(), 2.5);
  CHECK(oracle::max_abs_diff(scaled.forward(x),
                             hsad::scale(hsad::vertical_diff().forward(x), 2.5)) ==
        0.0);
  CHECK(scaled.opnorm_bound_sq() == 25.0);
  CHECK(hsad::hsstv_diff(0.3).opnorm_bound_sq() == 32.0 + 8.0 * 0.3 * 0.3);
  CHECK_THROWS_AS(hsad::hsstv_diff(0.0), hsad::ShapeError);
}

TEST_CASE("hsstv output shape quadruples the bands") {
  const LinearMap a = hsad::hsstv_diff(0.05);
  CHECK(a.output_shape(CubeShape{5, 6, 7}) == CubeShape{5, 6, 28});
}
