#include "hsad/prox.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <vector>

namespace hsad {

namespace {

void require_nonneg(double value, const char *name) {
  if (!(value >= 0.0)) {
    throw ShapeError(std::string(name) + " must be nonnegative");
  }
}

Eigen::MatrixXd as_matrix(const Cube &m) {
  if (m.bands() != 1) {
    throw ShapeError("matrix cube must have a single band, got " +
                     to_string(m.shape()));
  }
  for (double v : m.values()) {
    if (!std::isfinite(v)) {
      throw NumericalError("non-finite entry in SVD operand");
    }
  }
  const auto rows = static_cast<Eigen::Index>(m.height());
  const auto cols = static_cast<Eigen::Index>(m.width());
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                        Eigen::RowMajor>>(m.values().data(),
                                                          rows, cols);
}

struct ThinSvd {
  Eigen::MatrixXd u;
  Eigen::VectorXd s;
  Eigen::MatrixXd v;
};

ThinSvd thin_svd(const Eigen::MatrixXd &mat) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(mat,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) {
    throw NumericalError("SVD did not converge");
  }
  return ThinSvd{svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

}  // namespace

Cube prox_l1(const Cube &x, double gamma) {
  require_nonneg(gamma, "prox_l1 gamma");
  Cube out(x.shape());
  const auto xv = x.values();
  auto ov = out.values();
  for (std::size_t e = 0; e < ov.size(); ++e) {
    const double v = xv[e];
    const double mag = std::abs(v) - gamma;
    ov[e] = mag > 0.0 ? std::copysign(mag, v) : 0.0;
  }
  return out;
}

Cube prox_l21(const Cube &x, double gamma) {
  require_nonneg(gamma, "prox_l21 gamma");
  Cube out(x.shape());
  const std::size_t pixels = x.height() * x.width();
  const std::size_t bands = x.bands();
  const double *xv = x.values().data();
  double *ov = out.values().data();
  for (std::size_t p = 0; p < pixels; ++p) {
    const double *tube = xv + p * bands;
    double *o = ov + p * bands;
    double sq = 0.0;
    for (std::size_t k = 0; k < bands; ++k) sq += tube[k] * tube[k];
    const double n = std::sqrt(sq);
    const double factor = n > gamma ? 1.0 - gamma / n : 0.0;
    for (std::size_t k = 0; k < bands; ++k) o[k] = factor * tube[k];
  }
  return out;
}

Cube prox_nuclear(const Cube &m, double gamma) {
  require_nonneg(gamma, "prox_nuclear gamma");
  const Eigen::MatrixXd mat = as_matrix(m);
  ThinSvd svd = thin_svd(mat);
  for (Eigen::Index r = 0; r < svd.s.size(); ++r) {
    svd.s[r] = std::max(svd.s[r] - gamma, 0.0);
  }
  const Eigen::MatrixXd rebuilt = svd.u * svd.s.asDiagonal() * svd.v.transpose();
  Cube out(m.shape());
  double *ov = out.values().data();
  for (Eigen::Index i = 0; i < rebuilt.rows(); ++i) {
    for (Eigen::Index j = 0; j < rebuilt.cols(); ++j) {
      ov[i * rebuilt.cols() + j] = rebuilt(i, j);
    }
  }
  return out;
}

double nuclear_norm(const Cube &m) {
  const Eigen::MatrixXd mat = as_matrix(m);
  return thin_svd(mat).s.sum();
}

Cube project_zero(const Cube &x) { return Cube(x.shape()); }

Cube project_frobenius_ball(const Cube &x, const Cube &center, double epsilon) {
  require_nonneg(epsilon, "ball radius");
  const Cube diff = subtract(x, center);
  const double dist = frobenius_norm(diff);
  if (dist <= epsilon) return x;
  return add_scaled(center, epsilon / dist, diff);
}

Cube project_l1_ball(const Cube &x, double alpha) {
  require_nonneg(alpha, "ball radius");
  if (alpha == 0.0) return Cube(x.shape());
  if (l1_norm(x) <= alpha) return x;

  // Exact threshold: sort |x| descending; the active prefix of length rho
  // satisfies a_rho > (cumsum_rho - alpha)/rho and tau is that quotient.
  const auto xv = x.values();
  std::vector<double> mags(xv.begin(), xv.end());
  for (double &v : mags) v = std::abs(v);
  std::sort(mags.begin(), mags.end(), std::greater<double>());
  double cumsum = 0.0;
  double tau = 0.0;
  for (std::size_t r = 0; r < mags.size(); ++r) {
    cumsum += mags[r];
    const double candidate = (cumsum - alpha) / static_cast<double>(r + 1);
    if (mags[r] > candidate) {
      tau = candidate;
    } else {
      break;
    }
  }
  // On the ball boundary the sorted cumulative sum can round the other way
  // than l1_norm did, leaving tau a hair below zero; the exact tau is never
  // negative.
  return prox_l1(x, std::max(tau, 0.0));
}

bool BallSpec::contains(const Cube &x, double tol) const {
  switch (kind) {
    case Kind::frobenius:
      return frobenius_norm(subtract(x, center)) <= radius + tol;
    case Kind::l1:
      return l1_norm(x) <= radius + tol;
  }
  return false;
}

Cube BallSpec::project(const Cube &x) const {
  switch (kind) {
    case Kind::frobenius:
      return project_frobenius_ball(x, center, radius);
    case Kind::l1:
      return project_l1_ball(x, radius);
  }
  throw ShapeError("unknown ball kind");
}

}  // namespace hsad
