#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "hsad/cube.hpp"
#include "hsad/prox.hpp"
#include "hsad/rng.hpp"
#include "support/oracles.hpp"

using hsad::Cube;
using hsad::CubeShape;

namespace {

const std::vector<CubeShape> kSmallShapes = {
    {1, 1, 1}, {1, 1, 3}, {2, 2, 1}, {3, 2, 2}, {4, 4, 3}};

double l21_objective(const Cube &t, const Cube &x, double gamma) {
  const Cube d = hsad::subtract(t, x);
  const double q = hsad::frobenius_norm(d);
  return 0.5 * q * q + gamma * hsad::l21_norm(t);
}

}  // namespace

TEST_CASE("soft threshold worked example") {
  const Cube x = Cube::from_values({1, 1, 3}, {3.0, -1.0, 0.2});
  const Cube p = hsad::prox_l1(x, 1.0);
  CHECK(p(0, 0, 0) == 2.0);
  CHECK(p(0, 0, 1) == 0.0);
  CHECK(p(0, 0, 2) == 0.0);
  CHECK(oracle::max_abs_diff(hsad::prox_l1(x, 0.0), x) == 0.0);
  CHECK_THROWS_AS(hsad::prox_l1(x, -0.5), hsad::ShapeError);
}

TEST_CASE("tube shrinkage worked example") {
  const Cube x = Cube::from_values({1, 1, 2}, {3.0, 4.0});
  const Cube zero = hsad::prox_l21(x, 5.0);
  CHECK(zero(0, 0, 0) == 0.0);
  CHECK(zero(0, 0, 1) == 0.0);
  const Cube half = hsad::prox_l21(x, 2.5);
  CHECK(half(0, 0, 0) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(half(0, 0, 1) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(oracle::max_abs_diff(hsad::prox_l21(x, 0.0), x) == 0.0);
  CHECK_THROWS_AS(hsad::prox_l21(x, -1.0), hsad::ShapeError);
}

TEST_CASE("singular value threshold worked example") {
  const Cube m = Cube::from_values({2, 2, 1}, {3.0, 0.0, 0.0, 1.0});
  const Cube p = hsad::prox_nuclear(m, 1.0);
  CHECK(p(0, 0, 0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(p(0, 1, 0)) <= 1e-12);
  CHECK(std::abs(p(1, 0, 0)) <= 1e-12);
  CHECK(std::abs(p(1, 1, 0)) <= 1e-12);
  CHECK(hsad::nuclear_norm(m) == doctest::Approx(4.0).epsilon(1e-13));
  CHECK_THROWS_AS(hsad::prox_nuclear(Cube(2, 2, 2), 1.0), hsad::ShapeError);
  Cube bad(2, 2, 1);
  bad(0, 0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(hsad::prox_nuclear(bad, 1.0), hsad::NumericalError);
  CHECK_THROWS_AS(hsad::nuclear_norm(bad), hsad::NumericalError);
}

TEST_CASE("ball projection worked examples") {
  const Cube x = Cube::from_values({1, 1, 2}, {3.0, 4.0});
  const Cube center(1, 1, 2);
  CHECK(oracle::max_abs_diff(hsad::project_frobenius_ball(x, center, 5.0), x) ==
        0.0);
  const Cube shrunk = hsad::project_frobenius_ball(x, center, 2.5);
  CHECK(shrunk(0, 0, 0) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(shrunk(0, 0, 1) == doctest::Approx(2.0).epsilon(1e-15));

  Cube off(1, 1, 2);
  off(0, 0, 0) = 3.0;
  off(0, 0, 1) = 3.0;
  const Cube moved = hsad::project_frobenius_ball(x, off, 0.5);
  CHECK(moved(0, 0, 0) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(moved(0, 0, 1) == doctest::Approx(3.5).epsilon(1e-12));

  const Cube l1x = Cube::from_values({1, 1, 2}, {2.0, 1.0});
  const Cube l1p = hsad::project_l1_ball(l1x, 1.0);
  CHECK(l1p(0, 0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(l1p(0, 0, 1)) <= 1e-14);
  CHECK(oracle::max_abs_diff(hsad::project_l1_ball(l1x, 4.0), l1x) == 0.0);
  const Cube l1z = hsad::project_l1_ball(l1x, 0.0);
  for (double v : l1z.values()) CHECK(v == 0.0);
  const Cube zz = hsad::project_zero(x);
  for (double v : zz.values()) CHECK(v == 0.0);
  CHECK_THROWS_AS(hsad::project_frobenius_ball(x, center, -1.0),
                  hsad::ShapeError);
  CHECK_THROWS_AS(hsad::project_l1_ball(x, -1.0), hsad::ShapeError);
}

TEST_CASE("prox operators agree with scalar-search oracles") {
  hsad::Rng rng(21);
  int instances = 0;
  while (instances < 120) {
    for (const auto &shape : kSmallShapes) {
      const Cube x = oracle::random_cube(shape, rng, -2.0, 2.0);
      const double gamma = rng.uniform(0.0, 1.5);
      CHECK(oracle::max_abs_diff(hsad::prox_l1(x, gamma),
                                 oracle::prox_l1(x, gamma)) <= 1e-5);
      CHECK(oracle::max_abs_diff(hsad::prox_l21(x, gamma),
                                 oracle::prox_l21(x, gamma)) <= 1e-5);
      const double alpha = rng.uniform(0.0, 3.0);
      CHECK(oracle::max_abs_diff(hsad::project_l1_ball(x, alpha),
                                 oracle::project_l1_ball(x, alpha)) <= 1e-5);
      const Cube center = oracle::random_cube(shape, rng, -1.0, 1.0);
      const double radius = rng.uniform(0.1, 2.0);
      CHECK(oracle::max_abs_diff(
                hsad::project_frobenius_ball(x, center, radius),
                oracle::project_frobenius_ball(x, center, radius)) <= 1e-5);
      ++instances;
    }
  }
}

TEST_CASE("nuclear prox agrees with the Jacobi oracle") {
  hsad::Rng rng(22);
  const std::vector<CubeShape> shapes = {
      {1, 1, 1}, {2, 2, 1}, {3, 2, 1}, {2, 5, 1}, {4, 4, 1}, {5, 8, 1}};
  int instances = 0;
  while (instances < 120) {
    for (const auto &shape : shapes) {
      const Cube m = oracle::random_cube(shape, rng, -2.0, 2.0);
      const double gamma = rng.uniform(0.0, 2.0);
      CHECK(oracle::max_abs_diff(hsad::prox_nuclear(m, gamma),
                                 oracle::prox_nuclear(m, gamma)) <= 1e-4);
      std::vector<double> flat(m.values().begin(), m.values().end());
      const auto sigma = oracle::singular_values(flat, shape.height, shape.width);
      double sum = 0.0;
      for (double s : sigma) sum += s;
      CHECK(hsad::nuclear_norm(m) == doctest::Approx(sum).epsilon(1e-8));
      ++instances;
    }
  }
}

TEST_CASE("l1 ball projection matches bisection in bulk") {
  hsad::Rng rng(23);
  for (int trial = 0; trial < 10000; ++trial) {
    const CubeShape shape{1, 1, 1 + static_cast<std::size_t>(rng.index(8))};
    const Cube x = oracle::random_cube(shape, rng, -3.0, 3.0);
    const double alpha = rng.uniform(0.0, 4.0);
    const Cube fast = hsad::project_l1_ball(x, alpha);
    const Cube slow = oracle::project_l1_ball(x, alpha);
    CHECK(oracle::max_abs_diff(fast, slow) <= 1e-9);
    CHECK(hsad::l1_norm(fast) <= alpha + 1e-9);
  }
}

TEST_CASE("projection onto the boundary is exact") {
  // Inputs sitting exactly on the radius must pass through unchanged.
  const Cube x = Cube::from_values({1, 1, 3}, {1.0, -0.5, 0.25});
  const double alpha = hsad::l1_norm(x);
  CHECK(oracle::max_abs_diff(hsad::project_l1_ball(x, alpha), x) == 0.0);
  const double radius = hsad::frobenius_norm(x);
  CHECK(oracle::max_abs_diff(
            hsad::project_frobenius_ball(x, Cube(1, 1, 3), radius), x) == 0.0);
}

TEST_CASE("moreau decomposition for the l1 prox") {
  // x = prox_{g*l1}(x) + g * P_{inf-ball}(x/g), with P the unit-ball clamp.
  hsad::Rng rng(24);
  for (int trial = 0; trial < 50; ++trial) {
    const Cube x = oracle::random_cube({2, 3, 2}, rng, -2.0, 2.0);
    const double gamma = rng.uniform(0.01, 2.0);
    const Cube p = hsad::prox_l1(x, gamma);
    Cube clamp(x.shape());
    for (std::size_t e = 0; e < x.size(); ++e) {
      clamp.values()[e] = std::clamp(x.values()[e] / gamma, -1.0, 1.0);
    }
    const Cube recon = hsad::add_scaled(p, gamma, clamp);
    CHECK(oracle::max_abs_diff(recon, x) <= 1e-12);
  }
}

TEST_CASE("moreau decomposition for the l21 prox") {
  // The conjugate of the tube norm is the indicator of tube-wise l2 balls.
  hsad::Rng rng(25);
  for (int trial = 0; trial < 50; ++trial) {
    const Cube x = oracle::random_cube({3, 2, 3}, rng, -2.0, 2.0);
    const double gamma = rng.uniform(0.01, 2.0);
    const Cube p = hsad::prox_l21(x, gamma);
    Cube ball(x.shape());
    for (std::size_t i = 0; i < x.height(); ++i) {
      for (std::size_t j = 0; j < x.width(); ++j) {
        double sq = 0.0;
        for (std::size_t k = 0; k < x.bands(); ++k) {
          const double v = x(i, j, k) / gamma;
          sq += v * v;
        }
        const double n = std::sqrt(sq);
        const double f = n > 1.0 ? 1.0 / n : 1.0;
        for (std::size_t k = 0; k < x.bands(); ++k) {
          ball(i, j, k) = f * (x(i, j, k) / gamma);
        }
      }
    }
    const Cube recon = hsad::add_scaled(p, gamma, ball);
    CHECK(oracle::max_abs_diff(recon, x) <= 1e-12);
  }
}

TEST_CASE("prox points minimize their objectives") {
  hsad::Rng rng(26);
  for (int trial = 0; trial < 20; ++trial) {
    const Cube x = oracle::random_cube({2, 2, 3}, rng, -2.0, 2.0);
    const double gamma = rng.uniform(0.1, 1.5);
    const Cube p = hsad::prox_l21(x, gamma);
    const double best = l21_objective(p, x, gamma);
    for (int cand = 0; cand < 200; ++cand) {
      const Cube noise = oracle::random_cube({2, 2, 3}, rng, -0.5, 0.5);
      const Cube t = hsad::add(p, noise);
      CHECK(l21_objective(t, x, gamma) >= best - 1e-12);
    }
  }
}

TEST_CASE("projections minimize distance over feasible candidates") {
  hsad::Rng rng(27);
  const Cube x = oracle::random_cube({2, 2, 2}, rng, -3.0, 3.0);
  const double alpha = 1.7;
  const Cube p = hsad::project_l1_ball(x, alpha);
  const double best = hsad::frobenius_norm(hsad::subtract(p, x));
  for (int cand = 0; cand < 500; ++cand) {
    const Cube raw = oracle::random_cube({2, 2, 2}, rng, -3.0, 3.0);
    const Cube feasible = hsad::project_l1_ball(raw, alpha);
    CHECK(hsad::frobenius_norm(hsad::subtract(feasible, x)) >= best - 1e-12);
  }
}

TEST_CASE("prox operators are nonexpansive") {
  hsad::Rng rng(28);
  for (int trial = 0; trial < 50; ++trial) {
    const Cube x = oracle::random_cube({2, 3, 2}, rng, -2.0, 2.0);
    const Cube y = oracle::random_cube({2, 3, 2}, rng, -2.0, 2.0);
    const double gamma = rng.uniform(0.0, 2.0);
    const double gap = hsad::frobenius_norm(hsad::subtract(x, y));
    CHECK(hsad::frobenius_norm(hsad::subtract(hsad::prox_l1(x, gamma),
                                              hsad::prox_l1(y, gamma))) <=
          gap * (1.0 + 1e-12));
    CHECK(hsad::frobenius_norm(hsad::subtract(hsad::prox_l21(x, gamma),
                                              hsad::prox_l21(y, gamma))) <=
          gap * (1.0 + 1e-12));
    CHECK(hsad::frobenius_norm(
              hsad::subtract(hsad::project_l1_ball(x, 1.0),
                             hsad::project_l1_ball(y, 1.0))) <=
          gap * (1.0 + 1e-12));
  }
}

TEST_CASE("projections are idempotent") {
  hsad::Rng rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const Cube x = oracle::random_cube({3, 2, 2}, rng, -3.0, 3.0);
    const Cube center = oracle::random_cube({3, 2, 2}, rng, -1.0, 1.0);
    const Cube pf = hsad::project_frobenius_ball(x, center, 1.3);
    CHECK(oracle::max_abs_diff(hsad::project_frobenius_ball(pf, center, 1.3),
                               pf) <= 1e-12);
    const Cube pl = hsad::project_l1_ball(x, 2.1);
    CHECK(oracle::max_abs_diff(hsad::project_l1_ball(pl, 2.1), pl) <= 1e-12);
  }
}

TEST_CASE("ball specs dispatch to the projections") {
  const Cube x = Cube::from_values({1, 1, 2}, {3.0, 4.0});
  hsad::BallSpec frob{hsad::BallSpec::Kind::frobenius, Cube(1, 1, 2), 2.5};
  CHECK(!frob.contains(x));
  CHECK(frob.contains(frob.project(x), 1e-12));
  CHECK(oracle::max_abs_diff(frob.project(x),
                             hsad::project_frobenius_ball(x, Cube(1, 1, 2),
                                                          2.5)) == 0.0);
  hsad::BallSpec l1{hsad::BallSpec::Kind::l1, Cube(), 1.0};
  CHECK(!l1.contains(x));
  CHECK(l1.contains(l1.project(x), 1e-12));
  CHECK(hsad::l1_norm(l1.project(x)) <= 1.0 + 1e-12);
}
