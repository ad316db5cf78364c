#pragma once

#include <cstdint>
#include <functional>

#include "hsad/cube.hpp"

namespace hsad {

/// A linear operator on cubes, bundled with its adjoint and a certified
/// operator-norm bound.
///
/// The bound is stored squared because the solver stepsize rules consume
/// squared norms; keeping the square exact (4, 8, 32, ...) avoids rounding
/// through sqrt.  For shape-generic maps, band_factor > 0 declares that an
/// input with B bands produces band_factor*B bands at unchanged spatial
/// dimensions; maps with irregular shape behavior (matricization) set it
/// to 0 and rely on the output-shape descriptor alone.
class LinearMap {
 public:
  using Apply = std::function<Cube(const Cube &)>;
  using ShapeFn = std::function<CubeShape(const CubeShape &)>;

  LinearMap(Apply forward, Apply adjoint, double opnorm_bound_sq,
            ShapeFn output_shape, int band_factor);

  Cube forward(const Cube &x) const { return forward_(x); }
  Cube adjoint(const Cube &y) const { return adjoint_(y); }

  /// Output shape for a given input shape; throws ShapeError when the map
  /// does not accept the input.
  CubeShape output_shape(const CubeShape &in) const { return shape_(in); }

  double opnorm_bound_sq() const { return bound_sq_; }
  double opnorm_bound() const;
  int band_factor() const { return band_factor_; }

 private:
  Apply forward_;
  Apply adjoint_;
  double bound_sq_;
  ShapeFn shape_;
  int band_factor_;
};

LinearMap identity_map();

// Forward differences along one axis, last slice zeroed; adjoints are the
// matching negative backward differences.  Operator-norm bound 2 each.
LinearMap vertical_diff();
LinearMap horizontal_diff();
LinearMap spectral_diff();

/// Vertical differences stacked over horizontal ones (B bands -> 2B bands);
/// bound 2*sqrt(2).
LinearMap spatial_diff();

/// Spatial differences of spectral differences stacked over omega-scaled
/// spatial differences (B bands -> 4B bands); bound sqrt(32 + 8*omega^2).
LinearMap hsstv_diff(double omega);

/// Rearranges an height x width x B cube into its B x (height*width) matrix
/// (stored as a B x HW x 1 cube); column (i, j) is the tube at that pixel.
/// The spatial dimensions are fixed at construction because the adjoint (the
/// inverse rearrangement) cannot recover them from the matrix alone.
LinearMap matricize(std::size_t height, std::size_t width);

LinearMap compose(const LinearMap &outer, const LinearMap &inner);
LinearMap stack_bands(const LinearMap &top, const LinearMap &bottom);
LinearMap scale_map(const LinearMap &map, double factor);

/// Power-iteration estimate of the operator norm on the given input shape.
/// Deterministic in the seed; the returned Rayleigh-quotient value never
/// exceeds the true norm.
double estimate_opnorm(const LinearMap &map, const CubeShape &shape,
                       std::size_t iterations = 100, std::uint64_t seed = 0);

}  // namespace hsad
