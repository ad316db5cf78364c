#include "hsad/linear_map.hpp"

#include <cmath>
#include <cstring>
#include <utility>

#include "hsad/rng.hpp"

namespace hsad {

LinearMap::LinearMap(Apply forward, Apply adjoint, double opnorm_bound_sq,
                     ShapeFn output_shape, int band_factor)
    : forward_(std::move(forward)),
      adjoint_(std::move(adjoint)),
      bound_sq_(opnorm_bound_sq),
      shape_(std::move(output_shape)),
      band_factor_(band_factor) {}

double LinearMap::opnorm_bound() const { return std::sqrt(bound_sq_); }

namespace {

CubeShape same_shape(const CubeShape &s) { return s; }

// Forward difference along rows: out(i,.) = x(i+1,.) - x(i,.), last row 0.
Cube vdiff_forward(const Cube &x) {
  Cube out(x.shape());
  const std::size_t rows = x.height();
  const std::size_t rowlen = x.width() * x.bands();
  const double *xv = x.values().data();
  double *ov = out.values().data();
  for (std::size_t i = 0; i + 1 < rows; ++i) {
    const double *cur = xv + i * rowlen;
    const double *nxt = cur + rowlen;
    double *o = ov + i * rowlen;
    for (std::size_t t = 0; t < rowlen; ++t) o[t] = nxt[t] - cur[t];
  }
  return out;
}

// Adjoint: out(0) = -y(0); out(i) = y(i-1) - y(i) for interior i;
// out(rows-1) = y(rows-2).  Derived from <D x, y> = <x, D* y>.
Cube vdiff_adjoint(const Cube &y) {
  Cube out(y.shape());
  const std::size_t rows = y.height();
  if (rows == 1) return out;
  const std::size_t rowlen = y.width() * y.bands();
  const double *yv = y.values().data();
  double *ov = out.values().data();
  for (std::size_t t = 0; t < rowlen; ++t) ov[t] = -yv[t];
  for (std::size_t i = 1; i + 1 < rows; ++i) {
    const double *prev = yv + (i - 1) * rowlen;
    const double *cur = prev + rowlen;
    double *o = ov + i * rowlen;
    for (std::size_t t = 0; t < rowlen; ++t) o[t] = prev[t] - cur[t];
  }
  {
    const double *prev = yv + (rows - 2) * rowlen;
    double *o = ov + (rows - 1) * rowlen;
    for (std::size_t t = 0; t < rowlen; ++t) o[t] = prev[t];
  }
  return out;
}

Cube hdiff_forward(const Cube &x) {
  Cube out(x.shape());
  const std::size_t cols = x.width();
  const std::size_t bands = x.bands();
  const double *xv = x.values().data();
  double *ov = out.values().data();
  for (std::size_t i = 0; i < x.height(); ++i) {
    const double *row = xv + i * cols * bands;
    double *orow = ov + i * cols * bands;
    for (std::size_t j = 0; j + 1 < cols; ++j) {
      const double *cur = row + j * bands;
      const double *nxt = cur + bands;
      double *o = orow + j * bands;
      for (std::size_t k = 0; k < bands; ++k) o[k] = nxt[k] - cur[k];
    }
  }
  return out;
}

Cube hdiff_adjoint(const Cube &y) {
  Cube out(y.shape());
  const std::size_t cols = y.width();
  if (cols == 1) return out;
  const std::size_t bands = y.bands();
  const double *yv = y.values().data();
  double *ov = out.values().data();
  for (std::size_t i = 0; i < y.height(); ++i) {
    const double *row = yv + i * cols * bands;
    double *orow = ov + i * cols * bands;
    for (std::size_t k = 0; k < bands; ++k) orow[k] = -row[k];
    for (std::size_t j = 1; j + 1 < cols; ++j) {
      const double *prev = row + (j - 1) * bands;
      const double *cur = prev + bands;
      double *o = orow + j * bands;
      for (std::size_t k = 0; k < bands; ++k) o[k] = prev[k] - cur[k];
    }
    {
      const double *prev = row + (cols - 2) * bands;
      double *o = orow + (cols - 1) * bands;
      for (std::size_t k = 0; k < bands; ++k) o[k] = prev[k];
    }
  }
  return out;
}

Cube bdiff_forward(const Cube &x) {
  Cube out(x.shape());
  const std::size_t bands = x.bands();
  const std::size_t pixels = x.height() * x.width();
  const double *xv = x.values().data();
  double *ov = out.values().data();
  for (std::size_t p = 0; p < pixels; ++p) {
    const double *tube = xv + p * bands;
    double *o = ov + p * bands;
    for (std::size_t k = 0; k + 1 < bands; ++k) o[k] = tube[k + 1] - tube[k];
  }
  return out;
}

Cube bdiff_adjoint(const Cube &y) {
  Cube out(y.shape());
  const std::size_t bands = y.bands();
  if (bands == 1) return out;
  const std::size_t pixels = y.height() * y.width();
  const double *yv = y.values().data();
  double *ov = out.values().data();
  for (std::size_t p = 0; p < pixels; ++p) {
    const double *tube = yv + p * bands;
    double *o = ov + p * bands;
    o[0] = -tube[0];
    for (std::size_t k = 1; k + 1 < bands; ++k) o[k] = tube[k - 1] - tube[k];
    o[bands - 1] = tube[bands - 2];
  }
  return out;
}

}  // namespace

LinearMap identity_map() {
  return LinearMap([](const Cube &x) { return x; },
                   [](const Cube &y) { return y; }, 1.0, same_shape, 1);
}

LinearMap vertical_diff() {
  return LinearMap(vdiff_forward, vdiff_adjoint, 4.0, same_shape, 1);
}

LinearMap horizontal_diff() {
  return LinearMap(hdiff_forward, hdiff_adjoint, 4.0, same_shape, 1);
}

LinearMap spectral_diff() {
  return LinearMap(bdiff_forward, bdiff_adjoint, 4.0, same_shape, 1);
}

LinearMap spatial_diff() {
  return stack_bands(vertical_diff(), horizontal_diff());
}

LinearMap hsstv_diff(double omega) {
  if (!(omega > 0.0)) {
    throw ShapeError("hsstv_diff requires omega > 0");
  }
  // Behavior is the stacked composite; the bound square is certified here in
  // closed form so downstream stepsizes come out as the exact expression.
  LinearMap stacked = stack_bands(compose(spatial_diff(), spectral_diff()),
                                  scale_map(spatial_diff(), omega));
  return LinearMap([stacked](const Cube &x) { return stacked.forward(x); },
                   [stacked](const Cube &y) { return stacked.adjoint(y); },
                   32.0 + 8.0 * omega * omega,
                   [stacked](const CubeShape &s) { return stacked.output_shape(s); },
                   stacked.band_factor());
}

LinearMap matricize(std::size_t height, std::size_t width) {
  if (height == 0 || width == 0) {
    throw ShapeError("matricize requires positive spatial dimensions");
  }
  const std::size_t pixels = height * width;
  auto forward = [height, width, pixels](const Cube &x) {
    if (x.height() != height || x.width() != width) {
      throw ShapeError("matricize expects spatial dimensions " +
                       std::to_string(height) + "x" + std::to_string(width) +
                       ", got " + to_string(x.shape()));
    }
    const std::size_t bands = x.bands();
    Cube out(bands, pixels, 1);
    const double *xv = x.values().data();
    double *ov = out.values().data();
    for (std::size_t p = 0; p < pixels; ++p) {
      for (std::size_t k = 0; k < bands; ++k) {
        ov[k * pixels + p] = xv[p * bands + k];
      }
    }
    return out;
  };
  auto adjoint = [height, width, pixels](const Cube &y) {
    if (y.width() != pixels || y.bands() != 1) {
      throw ShapeError("matricize adjoint expects a Bx" +
                       std::to_string(pixels) + "x1 matrix cube, got " +
                       to_string(y.shape()));
    }
    const std::size_t bands = y.height();
    Cube out(height, width, bands);
    const double *yv = y.values().data();
    double *ov = out.values().data();
    for (std::size_t p = 0; p < pixels; ++p) {
      for (std::size_t k = 0; k < bands; ++k) {
        ov[p * bands + k] = yv[k * pixels + p];
      }
    }
    return out;
  };
  auto shape = [height, width, pixels](const CubeShape &s) {
    if (s.height != height || s.width != width) {
      throw ShapeError("matricize expects spatial dimensions " +
                       std::to_string(height) + "x" + std::to_string(width) +
                       ", got " + to_string(s));
    }
    return CubeShape{s.bands, pixels, 1};
  };
  return LinearMap(forward, adjoint, 1.0, shape, 0);
}

LinearMap compose(const LinearMap &outer, const LinearMap &inner) {
  const int factor = (outer.band_factor() > 0 && inner.band_factor() > 0)
                         ? outer.band_factor() * inner.band_factor()
                         : 0;
  return LinearMap(
      [outer, inner](const Cube &x) { return outer.forward(inner.forward(x)); },
      [outer, inner](const Cube &y) { return inner.adjoint(outer.adjoint(y)); },
      outer.opnorm_bound_sq() * inner.opnorm_bound_sq(),
      [outer, inner](const CubeShape &s) {
        return outer.output_shape(inner.output_shape(s));
      },
      factor);
}

LinearMap stack_bands(const LinearMap &top, const LinearMap &bottom) {
  const int ft = top.band_factor();
  const int fb = bottom.band_factor();
  if (ft <= 0 || fb <= 0) {
    throw ShapeError("stack_bands requires band-multiplicative maps");
  }
  auto forward = [top, bottom](const Cube &x) {
    const Cube t = top.forward(x);
    const Cube b = bottom.forward(x);
    Cube out(x.height(), x.width(), t.bands() + b.bands());
    const std::size_t pixels = x.height() * x.width();
    const std::size_t tb = t.bands(), bb = b.bands();
    const double *tv = t.values().data();
    const double *bv = b.values().data();
    double *ov = out.values().data();
    for (std::size_t p = 0; p < pixels; ++p) {
      std::memcpy(ov + p * (tb + bb), tv + p * tb, tb * sizeof(double));
      std::memcpy(ov + p * (tb + bb) + tb, bv + p * bb, bb * sizeof(double));
    }
    return out;
  };
  auto adjoint = [top, bottom, ft, fb](const Cube &y) {
    const std::size_t total = static_cast<std::size_t>(ft) + fb;
    if (y.bands() % total != 0) {
      throw ShapeError("stacked adjoint needs bands divisible by " +
                       std::to_string(total) + ", got " +
                       std::to_string(y.bands()));
    }
    const std::size_t inb = y.bands() / total;
    const std::size_t tb = ft * inb, bb = fb * inb;
    const std::size_t pixels = y.height() * y.width();
    Cube yt(y.height(), y.width(), tb);
    Cube yb(y.height(), y.width(), bb);
    const double *yv = y.values().data();
    double *tv = yt.values().data();
    double *bv = yb.values().data();
    for (std::size_t p = 0; p < pixels; ++p) {
      std::memcpy(tv + p * tb, yv + p * (tb + bb), tb * sizeof(double));
      std::memcpy(bv + p * bb, yv + p * (tb + bb) + tb, bb * sizeof(double));
    }
    Cube out = top.adjoint(yt);
    add_assign(out, bottom.adjoint(yb));
    return out;
  };
  auto shape = [top, bottom, ft, fb](const CubeShape &s) {
    top.output_shape(s);  // validates acceptance
    bottom.output_shape(s);
    return CubeShape{s.height, s.width,
                     static_cast<std::size_t>(ft + fb) * s.bands};
  };
  return LinearMap(forward, adjoint,
                   top.opnorm_bound_sq() + bottom.opnorm_bound_sq(), shape,
                   ft + fb);
}

LinearMap scale_map(const LinearMap &map, double factor) {
  return LinearMap(
      [map, factor](const Cube &x) { return scale(map.forward(x), factor); },
      [map, factor](const Cube &y) { return scale(map.adjoint(y), factor); },
      factor * factor * map.opnorm_bound_sq(),
      [map](const CubeShape &s) { return map.output_shape(s); },
      map.band_factor());
}

double estimate_opnorm(const LinearMap &map, const CubeShape &shape,
                       std::size_t iterations, std::uint64_t seed) {
  if (shape.count() == 0) {
    throw ShapeError("estimate_opnorm requires a nonempty shape");
  }
  if (iterations == 0) {
    throw ShapeError("estimate_opnorm requires at least one iteration");
  }
  Rng rng(seed);
  Cube x(shape);
  for (double &v : x.values()) v = rng.normal();
  const double nx = frobenius_norm(x);
  if (nx == 0.0) throw NumericalError("degenerate power-iteration start");
  x = scale_by_inverse(x, nx);

  double lambda = 0.0;
  for (std::size_t t = 0; t < iterations; ++t) {
    const Cube y = map.forward(x);
    double ysq = 0.0;
    for (double v : y.values()) ysq += v * v;
    lambda = ysq;  // Rayleigh quotient of F*F at unit x
    const Cube z = map.adjoint(y);
    const double nz = frobenius_norm(z);
    if (nz == 0.0) break;  // x lies in the null space
    x = scale_by_inverse(z, nz);
  }
  return std::sqrt(lambda);
}

}  // namespace hsad
