#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hsad/errors.hpp"

namespace hsad {

/// Dimensions of a hyperspectral cube: height x width pixels, bands channels.
struct CubeShape {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t bands = 0;

  std::size_t count() const { return height * width * bands; }
  bool operator==(const CubeShape &) const = default;
};

std::string to_string(const CubeShape &shape);

/// Dense H x W x B tensor of doubles.
///
/// The band index varies fastest in memory (offset (i*W + j)*B + k), so the
/// spectral tube at a pixel is a contiguous run of B values.  Construction
/// from external values validates finiteness; internal arithmetic does not
/// revalidate.
class Cube {
 public:
  Cube() = default;
  explicit Cube(const CubeShape &shape);
  Cube(std::size_t height, std::size_t width, std::size_t bands);

  /// Builds a cube from raw values; rejects count mismatches (ShapeError)
  /// and non-finite entries (DataError).
  static Cube from_values(const CubeShape &shape, std::vector<double> values);

  const CubeShape &shape() const { return shape_; }
  std::size_t height() const { return shape_.height; }
  std::size_t width() const { return shape_.width; }
  std::size_t bands() const { return shape_.bands; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double &operator()(std::size_t i, std::size_t j, std::size_t k) {
    return values_[(i * shape_.width + j) * shape_.bands + k];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return values_[(i * shape_.width + j) * shape_.bands + k];
  }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  /// Contiguous spectral tube at pixel (i, j).
  std::span<const double> tube(std::size_t i, std::size_t j) const {
    return std::span<const double>(values_).subspan(
        (i * shape_.width + j) * shape_.bands, shape_.bands);
  }

 private:
  CubeShape shape_;
  std::vector<double> values_;
};

enum class NormKind { l1, frobenius, l21 };

double l1_norm(const Cube &x);
double frobenius_norm(const Cube &x);
/// Sum over pixels of the Euclidean norm of each spectral tube.
double l21_norm(const Cube &x);
double norm(const Cube &x, NormKind kind);
double inner(const Cube &x, const Cube &y);

// Elementwise kernels shared by the specialized solver and the generic
// splitting engine; both paths must run the same expressions in the same
// order so their iterates agree bitwise.
Cube add(const Cube &a, const Cube &b);
Cube subtract(const Cube &a, const Cube &b);
Cube scale(const Cube &x, double c);
Cube subtract_scaled(const Cube &x, double g, const Cube &p);  // x - g*p
Cube add_scaled(const Cube &x, double g, const Cube &p);       // x + g*p
Cube extrapolate(const Cube &xnew, const Cube &xold);          // 2*xnew - xold
Cube scale_by_inverse(const Cube &x, double g);                // x / g
Cube moreau_update(const Cube &ytilde, double g, const Cube &proxed);
void add_assign(Cube &y, const Cube &x);  // y += x

}  // namespace hsad
