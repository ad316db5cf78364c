#include "hsad/ppds.hpp"

#include <utility>

namespace hsad {

namespace {

void validate(const PpdsProblem &problem) {
  if (problem.primals.empty()) throw ShapeError("ppds needs a primal block");
  for (const auto &dual : problem.duals) {
    if (!dual.prox) throw ShapeError("every dual block needs a prox");
    if (dual.couplings.empty()) {
      throw ShapeError("every dual block needs at least one coupling");
    }
    for (const auto &coupling : dual.couplings) {
      if (coupling.primal >= problem.primals.size()) {
        throw ShapeError("coupling refers to missing primal block");
      }
    }
  }
}

}  // namespace

PpdsStepsizes ovdp_stepsizes(const PpdsProblem &problem) {
  validate(problem);
  std::vector<double> sums(problem.primals.size(), 0.0);
  for (const auto &dual : problem.duals) {
    for (const auto &coupling : dual.couplings) {
      sums[coupling.primal] += coupling.mu_sq;
    }
  }
  PpdsStepsizes out;
  out.primal.reserve(sums.size());
  for (double s : sums) {
    if (s <= 0.0) {
      throw ShapeError("primal block has no coupling; stepsize undefined");
    }
    out.primal.push_back(1.0 / s);
  }
  out.dual = 1.0 / static_cast<double>(problem.primals.size());
  return out;
}

PpdsState ppds_solve(const PpdsProblem &problem, std::size_t iterations,
                     const PpdsStop &stop) {
  const PpdsStepsizes gammas = ovdp_stepsizes(problem);
  const std::size_t nprimal = problem.primals.size();
  const std::size_t ndual = problem.duals.size();

  PpdsState state;
  state.primal.reserve(nprimal);
  for (const auto &block : problem.primals) state.primal.push_back(block.init);
  state.dual.reserve(ndual);
  for (const auto &block : problem.duals) state.dual.push_back(block.init);

  for (std::size_t n = 1; n <= iterations; ++n) {
    // Primal pass: every X_i from the previous duals.
    std::vector<Cube> fresh;
    fresh.reserve(nprimal);
    for (std::size_t i = 0; i < nprimal; ++i) {
      Cube pull;
      bool first = true;
      for (std::size_t j = 0; j < ndual; ++j) {
        for (const auto &coupling : problem.duals[j].couplings) {
          if (coupling.primal != i) continue;
          Cube term = coupling.map.adjoint(state.dual[j]);
          if (first) {
            pull = std::move(term);
            first = false;
          } else {
            add_assign(pull, term);
          }
        }
      }
      Cube arg = subtract_scaled(state.primal[i], gammas.primal[i], pull);
      fresh.push_back(problem.primals[i].prox
                          ? problem.primals[i].prox(arg, gammas.primal[i])
                          : std::move(arg));
    }

    // Dual pass: every Y_j from the extrapolated primals.
    for (std::size_t j = 0; j < ndual; ++j) {
      Cube acc;
      bool first = true;
      for (const auto &coupling : problem.duals[j].couplings) {
        Cube term = coupling.map.forward(
            extrapolate(fresh[coupling.primal], state.primal[coupling.primal]));
        if (first) {
          acc = std::move(term);
          first = false;
        } else {
          add_assign(acc, term);
        }
      }
      const Cube ytilde = add_scaled(state.dual[j], gammas.dual, acc);
      const Cube proxed = problem.duals[j].prox(
          scale_by_inverse(ytilde, gammas.dual), 1.0 / gammas.dual);
      state.dual[j] = moreau_update(ytilde, gammas.dual, proxed);
    }

    std::vector<Cube> prev = std::move(state.primal);
    state.primal = std::move(fresh);
    state.iteration = n;
    if (stop && stop(state, prev)) break;
  }
  return state;
}

}  // namespace hsad
