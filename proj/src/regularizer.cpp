#include "hsad/regularizer.hpp"

#include "hsad/prox.hpp"

namespace hsad {

Regularizer make_htv() {
  return Regularizer{
      "htv",
      spatial_diff(),
      [](const Cube &x, double tau) { return prox_l21(x, tau); },
      [](const Cube &x) { return l21_norm(x); },
      1.0 / 9.0,
      std::nullopt};
}

Regularizer make_sstv() {
  return Regularizer{
      "sstv",
      compose(spatial_diff(), spectral_diff()),
      [](const Cube &x, double tau) { return prox_l1(x, tau); },
      [](const Cube &x) { return l1_norm(x); },
      1.0 / 33.0,
      std::nullopt};
}

Regularizer make_hsstv(double omega) {
  return Regularizer{
      "hsstv",
      hsstv_diff(omega),
      [](const Cube &x, double tau) { return prox_l1(x, tau); },
      [](const Cube &x) { return l1_norm(x); },
      1.0 / (33.0 + 8.0 * omega * omega),
      omega};
}

Regularizer make_nuclear(std::size_t height, std::size_t width) {
  return Regularizer{
      "nuclear",
      matricize(height, width),
      [](const Cube &x, double tau) { return prox_nuclear(x, tau); },
      [](const Cube &x) { return nuclear_norm(x); },
      1.0 / 2.0,
      std::nullopt};
}

Regularizer make_regularizer(std::string_view name, const CubeShape &shape,
                             double omega) {
  if (name == "htv") return make_htv();
  if (name == "sstv") return make_sstv();
  if (name == "hsstv") return make_hsstv(omega);
  if (name == "nuclear") return make_nuclear(shape.height, shape.width);
  throw ShapeError("unknown regularizer \"" + std::string(name) +
                   "\" (expected htv, sstv, hsstv, or nuclear)");
}

}  // namespace hsad
