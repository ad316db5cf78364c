#include "hsad/cube.hpp"

#include <cmath>
#include <utility>

namespace hsad {

std::string to_string(const CubeShape &shape) {
  return std::to_string(shape.height) + "x" + std::to_string(shape.width) +
         "x" + std::to_string(shape.bands);
}

namespace {

void require_nonempty(const CubeShape &shape) {
  if (shape.height == 0 || shape.width == 0 || shape.bands == 0) {
    throw ShapeError("cube dimensions must be positive, got " +
                     to_string(shape));
  }
}

void require_same_shape(const Cube &a, const Cube &b) {
  if (!(a.shape() == b.shape())) {
    throw ShapeError("shape mismatch: " + to_string(a.shape()) + " vs " +
                     to_string(b.shape()));
  }
}

}  // namespace

Cube::Cube(const CubeShape &shape) : shape_(shape) {
  require_nonempty(shape);
  values_.assign(shape.count(), 0.0);
}

Cube::Cube(std::size_t height, std::size_t width, std::size_t bands)
    : Cube(CubeShape{height, width, bands}) {}

Cube Cube::from_values(const CubeShape &shape, std::vector<double> values) {
  require_nonempty(shape);
  if (values.size() != shape.count()) {
    throw ShapeError("value count " + std::to_string(values.size()) +
                     " does not match shape " + to_string(shape) + " (" +
                     std::to_string(shape.count()) + " entries)");
  }
  for (std::size_t e = 0; e < values.size(); ++e) {
    if (!std::isfinite(values[e])) {
      throw DataError("non-finite value at flat index " + std::to_string(e));
    }
  }
  Cube cube;
  cube.shape_ = shape;
  cube.values_ = std::move(values);
  return cube;
}

double l1_norm(const Cube &x) {
  double sum = 0.0;
  for (double v : x.values()) sum += std::abs(v);
  return sum;
}

double frobenius_norm(const Cube &x) {
  double sum = 0.0;
  for (double v : x.values()) sum += v * v;
  return std::sqrt(sum);
}

double l21_norm(const Cube &x) {
  const std::size_t pixels = x.height() * x.width();
  const std::size_t bands = x.bands();
  const auto vals = x.values();
  double total = 0.0;
  for (std::size_t p = 0; p < pixels; ++p) {
    double sq = 0.0;
    for (std::size_t k = 0; k < bands; ++k) {
      const double v = vals[p * bands + k];
      sq += v * v;
    }
    total += std::sqrt(sq);
  }
  return total;
}

double norm(const Cube &x, NormKind kind) {
  switch (kind) {
    case NormKind::l1:
      return l1_norm(x);
    case NormKind::frobenius:
      return frobenius_norm(x);
    case NormKind::l21:
      return l21_norm(x);
  }
  throw ShapeError("unknown norm kind");
}

double inner(const Cube &x, const Cube &y) {
  require_same_shape(x, y);
  const auto xv = x.values();
  const auto yv = y.values();
  double sum = 0.0;
  for (std::size_t e = 0; e < xv.size(); ++e) sum += xv[e] * yv[e];
  return sum;
}

Cube add(const Cube &a, const Cube &b) {
  require_same_shape(a, b);
  Cube out(a.shape());
  const auto av = a.values(), bv = b.values();
  auto ov = out.values();
  for (std::size_t e = 0; e < ov.size(); ++e) ov[e] = av[e] + bv[e];
  return out;
}

Cube subtract(const Cube &a, const Cube &b) {
  require_same_shape(a, b);
  Cube out(a.shape());
  const auto av = a.values(), bv = b.values();
  auto ov = out.values();
  for (std::size_t e = 0; e < ov.size(); ++e) ov[e] = av[e] - bv[e];
  return out;
}

Cube scale(const Cube &x, double c) {
  Cube out(x.shape());
  const auto xv = x.values();
  auto ov = out.values();
  for (std::size_t e = 0; e < ov.size(); ++e) ov[e] = c * xv[e];
  return out;
}

Cube subtract_scaled(const Cube &x, double g, const Cube &p) {
  require_same_shape(x, p);
  Cube out(x.shape());
  const auto xv = x.values(), pv = p.values();
  auto ov = out.values();
  for (std::size_t e = 0; e < ov.size(); ++e) ov[e] = xv[e] - g * pv[e];
  return out;
}

Cube add_scaled(const Cube &x, double g, const Cube &p) {
  require_same_shape(x, p);
  Cube out(x.shape());
  const auto xv = x.values(), pv = p.values();
  auto ov = out.values();
  for (std::size_t e = 0; e < ov.size(); ++e) ov[e] = xv[e] + g * pv[e];
  return out;
}

Cube extrapolate(const Cube &xnew, const Cube &xold) {
  require_same_shape(xnew, xold);
  Cube out(xnew.shape());
  const auto nv = xnew.values(), ov2 = xold.values();
  auto ov = out.values();
  for (std::size_t e = 0; e < ov.size(); ++e) ov[e] = 2.0 * nv[e] - ov2[e];
  return out;
}

Cube scale_by_inverse(const Cube &x, double g) {
  Cube out(x.shape());
  const auto xv = x.values();
  auto ov = out.values();
  for (std::size_t e = 0; e < ov.size(); ++e) ov[e] = xv[e] / g;
  return out;
}

Cube moreau_update(const Cube &ytilde, double g, const Cube &proxed) {
  require_same_shape(ytilde, proxed);
  Cube out(ytilde.shape());
  const auto yv = ytilde.values(), pv = proxed.values();
  auto ov = out.values();
  for (std::size_t e = 0; e < ov.size(); ++e) ov[e] = yv[e] - g * pv[e];
  return out;
}

void add_assign(Cube &y, const Cube &x) {
  require_same_shape(y, x);
  auto yv = y.values();
  const auto xv = x.values();
  for (std::size_t e = 0; e < yv.size(); ++e) yv[e] += xv[e];
}

}  // namespace hsad
