#pragma once

#include <cstddef>
#include <vector>

#include "hsad/ppds.hpp"
#include "hsad/regularizer.hpp"

namespace hsad {

/// The decomposition problem: observed cube, term weights, and the two
/// constraint radii (data-fidelity Frobenius ball around v, l1 ball on the
/// sparse component).
struct ProblemSpec {
  Cube v;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double epsilon = 0.0;
  double alpha = 0.0;
  Regularizer regularizer;
};

void validate(const ProblemSpec &spec);

struct SolverConfig {
  double tolerance = 1e-5;
  std::size_t max_iterations = 10000;
  std::size_t diagnostics_stride = 50;
};

/// Defaults per regularizer family: 10000 iterations for the TV variants,
/// 5000 for nuclear.
SolverConfig default_config(const Regularizer &regularizer);

struct Stepsizes {
  double gamma_b, gamma_a, gamma_s, gamma_l;
  double gamma_y1, gamma_y2, gamma_y3;
};

/// Exact stepsize set for the four primal and three dual blocks.
Stepsizes compute_stepsizes(const ProblemSpec &spec);

struct HistoryRecord {
  std::size_t iteration;
  double relative_change;
  double data_residual;     // ||B + A + S + L - V||_F
  double s_l1;              // ||S||_1
  double stripe_flatness_residual;  // ||Dv(L)||_F
  double objective;         // R(L(B)) + lambda1*||A||_2,1 + lambda2*||L||_1
};

struct SolveResult {
  Cube background, anomaly, sparse, stripe;
  std::size_t iterations = 0;
  bool converged = false;
  double final_relative_change = 0.0;
  std::vector<HistoryRecord> history;
};

/// Runs the splitting iteration from all-zero state until the relative
/// change of B + A + S + L drops to the tolerance or max_iterations is
/// reached.  Iterate divergence raises NumericalError.
SolveResult solve(const ProblemSpec &spec, const SolverConfig &config);

struct FeasibilityReport {
  double data_residual;
  double s_l1;
  double stripe_flatness_residual;  // ||Dv(L)||_F
  double objective;
};

FeasibilityReport feasibility_report(const SolveResult &result,
                                     const ProblemSpec &spec);

/// The same problem wired as generic engine blocks; one engine iteration
/// matches one solve() iteration bitwise.
PpdsProblem build_ppds_problem(const ProblemSpec &spec);

}  // namespace hsad
