#pragma once

#include <functional>
#include <vector>

#include "hsad/linear_map.hpp"

namespace hsad {

using ProxFn = std::function<Cube(const Cube &, double)>;

/// One primal variable X_i with its proximable term f_i; an empty prox
/// means f_i = 0 (the update is then the plain gradient-style step).
struct PrimalBlock {
  Cube init;
  ProxFn prox;
};

/// One edge of the coupling structure: dual block j reads primal block
/// `primal` through `map`, whose exact squared norm bound feeds the
/// stepsize rule.
struct DualCoupling {
  std::size_t primal;
  LinearMap map;
  double mu_sq;
};

/// One dual variable Y_j with its function g_j, applied through the Moreau
/// step Y <- Ytilde - gamma * prox((1/gamma) g)(Ytilde / gamma).
struct DualBlock {
  Cube init;
  ProxFn prox;
  std::vector<DualCoupling> couplings;
};

struct PpdsProblem {
  std::vector<PrimalBlock> primals;
  std::vector<DualBlock> duals;
};

/// Operator-norm-based stepsizes: primal gamma_i = 1/sum_j mu_sq(j, i),
/// dual gamma = 1/(number of primal blocks).
struct PpdsStepsizes {
  std::vector<double> primal;
  double dual = 0.0;
};

PpdsStepsizes ovdp_stepsizes(const PpdsProblem &problem);

struct PpdsState {
  std::vector<Cube> primal;
  std::vector<Cube> dual;
  std::size_t iteration = 0;
};

using PpdsStop =
    std::function<bool(const PpdsState &, const std::vector<Cube> &)>;

/// Runs the preconditioned primal-dual iteration: all primal updates from
/// the previous duals first, then every dual update from the extrapolated
/// primals, in declared block order.  Stops after `iterations` rounds or
/// when `stop` (called with the new state and the previous primal iterates)
/// returns true.
PpdsState ppds_solve(const PpdsProblem &problem, std::size_t iterations,
                     const PpdsStop &stop = nullptr);

}  // namespace hsad
