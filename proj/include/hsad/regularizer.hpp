#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "hsad/linear_map.hpp"

namespace hsad {

/// A background regularizer R(L(B)): the analysis operator L, the prox of
/// tau*R used in the dual update, R itself for diagnostics, and the exact
/// primal stepsize constant 1/(1 + ||L||^2) it induces.
struct Regularizer {
  std::string name;
  LinearMap linmap;
  std::function<Cube(const Cube &, double)> prox_r;  // prox of tau*R
  std::function<double(const Cube &)> value;         // R on the mapped operand
  double gamma_b = 0.0;
  std::optional<double> omega;
};

/// l21 norm of stacked spatial differences; gamma_b = 1/9.
Regularizer make_htv();

/// l1 norm of spatial differences of spectral differences; gamma_b = 1/33.
Regularizer make_sstv();

/// l1 norm of the omega-weighted hybrid difference stack;
/// gamma_b = 1/(33 + 8*omega^2).
Regularizer make_hsstv(double omega);

/// Nuclear norm of the matricized cube; the spatial dimensions fix the
/// matricization.  gamma_b = 1/2.
Regularizer make_nuclear(std::size_t height, std::size_t width);

/// Factory dispatch by name ("htv", "sstv", "hsstv", "nuclear"); shape and
/// omega are consumed where the variant needs them.
Regularizer make_regularizer(std::string_view name, const CubeShape &shape,
                             double omega = 0.05);

}  // namespace hsad
