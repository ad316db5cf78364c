#pragma once

#include "hsad/cube.hpp"

namespace hsad {

/// Entrywise soft threshold: sign(x) * max(|x| - gamma, 0).
Cube prox_l1(const Cube &x, double gamma);

/// Tube-wise shrinkage: each spectral tube is scaled by
/// max(1 - gamma/||tube||, 0); tubes with norm <= gamma (zero tubes
/// included) map to zero.
Cube prox_l21(const Cube &x, double gamma);

/// Singular-value soft threshold of a matrix carried as a rows x cols x 1
/// cube.  SVD non-convergence and non-finite input surface as
/// NumericalError.
Cube prox_nuclear(const Cube &m, double gamma);

/// Sum of singular values of a matrix carried as a rows x cols x 1 cube.
double nuclear_norm(const Cube &m);

/// Projection onto {O}: the zero cube of x's shape.
Cube project_zero(const Cube &x);

/// Euclidean projection onto the Frobenius ball of the given radius around
/// center: radial pull-back when outside, identity inside.
Cube project_frobenius_ball(const Cube &x, const Cube &center, double epsilon);

/// Euclidean projection onto the origin-centered l1 ball of radius alpha:
/// identity inside; otherwise entrywise soft threshold by the unique tau
/// with sum(max(|x_e| - tau, 0)) = alpha, found by exact sort-based search.
Cube project_l1_ball(const Cube &x, double alpha);

/// A constraint ball the solver projects onto, in checkable form.
struct BallSpec {
  enum class Kind { frobenius, l1 };

  Kind kind = Kind::frobenius;
  Cube center;  // unused for l1 balls, which sit at the origin
  double radius = 0.0;

  bool contains(const Cube &x, double tol = 0.0) const;
  Cube project(const Cube &x) const;
};

}  // namespace hsad
