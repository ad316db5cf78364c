#include "hsad/solver.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "hsad/prox.hpp"

namespace hsad {

void validate(const ProblemSpec &spec) {
  if (spec.v.empty()) throw ShapeError("problem needs a nonempty cube");
  if (!(spec.lambda1 >= 0.0) || !(spec.lambda2 >= 0.0)) {
    throw ShapeError("lambda weights must be nonnegative");
  }
  if (!(spec.epsilon >= 0.0) || !(spec.alpha >= 0.0)) {
    throw ShapeError("ball radii must be nonnegative");
  }
  if (!spec.regularizer.prox_r || !spec.regularizer.value) {
    throw ShapeError("regularizer is incomplete");
  }
  // Rejects a matricization fixed to different spatial dimensions.
  spec.regularizer.linmap.output_shape(spec.v.shape());
}

SolverConfig default_config(const Regularizer &regularizer) {
  SolverConfig config;
  config.max_iterations = regularizer.name == "nuclear" ? 5000 : 10000;
  return config;
}

Stepsizes compute_stepsizes(const ProblemSpec &spec) {
  validate(spec);
  Stepsizes s{};
  s.gamma_b = spec.regularizer.gamma_b;
  s.gamma_a = 1.0;
  s.gamma_s = 1.0;
  s.gamma_l = 1.0 / 5.0;  // Dv bound squared 4 plus identity 1
  s.gamma_y1 = 1.0 / 4.0;
  s.gamma_y2 = 1.0 / 4.0;
  s.gamma_y3 = 1.0 / 4.0;
  return s;
}

namespace {

// The 0/0 corner needs care: a zero iterate staying zero is converged only
// when the all-zero state is a genuine fixed point, which holds exactly
// when v lies inside its own data-fidelity ball (every prox fixes zero and
// the ball projection of zero is zero).  Otherwise the duals are still in
// flight even though T has not moved yet, notably on the very first
// iteration, where the primal pass cannot leave zero.
double relative_change(double diff_norm, double prev_norm,
                       bool zero_is_fixed_point) {
  if (diff_norm == 0.0 && prev_norm == 0.0) {
    return zero_is_fixed_point ? 0.0
                               : std::numeric_limits<double>::infinity();
  }
  if (diff_norm == 0.0) return 0.0;
  if (prev_norm == 0.0) return std::numeric_limits<double>::infinity();
  return diff_norm / prev_norm;
}

}  // namespace

SolveResult solve(const ProblemSpec &spec, const SolverConfig &config) {
  validate(spec);
  if (!(config.tolerance >= 0.0)) {
    throw ShapeError("tolerance must be nonnegative");
  }
  const Stepsizes g = compute_stepsizes(spec);
  const LinearMap &lmap = spec.regularizer.linmap;
  const LinearMap dv = vertical_diff();
  const CubeShape shape = spec.v.shape();

  Cube b(shape), a(shape), s(shape), l(shape);
  Cube y1(lmap.output_shape(shape)), y2(shape), y3(shape);
  Cube t_prev(shape);

  SolveResult result;
  const std::size_t stride =
      config.diagnostics_stride == 0 ? 1 : config.diagnostics_stride;
  const bool zero_is_fixed_point = frobenius_norm(spec.v) <= spec.epsilon;

  auto record = [&](std::size_t n, double rel, const Cube &t) {
    HistoryRecord rec{};
    rec.iteration = n;
    rec.relative_change = rel;
    rec.data_residual = frobenius_norm(subtract(t, spec.v));
    rec.s_l1 = l1_norm(s);
    rec.stripe_flatness_residual = frobenius_norm(dv.forward(l));
    rec.objective = spec.regularizer.value(lmap.forward(b)) +
                    spec.lambda1 * l21_norm(a) + spec.lambda2 * l1_norm(l);
    result.history.push_back(rec);
  };

  for (std::size_t n = 1; n <= config.max_iterations; ++n) {
    // Primal updates from the previous duals.
    Cube pull_b = lmap.adjoint(y1);
    add_assign(pull_b, y3);
    Cube bn = subtract_scaled(b, g.gamma_b, pull_b);

    Cube an = prox_l21(subtract_scaled(a, g.gamma_a, y3),
                       g.gamma_a * spec.lambda1);

    Cube sn = project_l1_ball(subtract_scaled(s, g.gamma_s, y3), spec.alpha);

    Cube pull_l = dv.adjoint(y2);
    add_assign(pull_l, y3);
    Cube ln = prox_l1(subtract_scaled(l, g.gamma_l, pull_l),
                      g.gamma_l * spec.lambda2);

    // Dual updates from the extrapolated primals.
    {
      const Cube acc = lmap.forward(extrapolate(bn, b));
      const Cube ytilde = add_scaled(y1, g.gamma_y1, acc);
      const Cube proxed = spec.regularizer.prox_r(
          scale_by_inverse(ytilde, g.gamma_y1), 1.0 / g.gamma_y1);
      y1 = moreau_update(ytilde, g.gamma_y1, proxed);
    }
    {
      const Cube acc = dv.forward(extrapolate(ln, l));
      const Cube ytilde = add_scaled(y2, g.gamma_y2, acc);
      const Cube proxed = project_zero(scale_by_inverse(ytilde, g.gamma_y2));
      y2 = moreau_update(ytilde, g.gamma_y2, proxed);
    }
    {
      Cube acc = extrapolate(bn, b);
      add_assign(acc, extrapolate(an, a));
      add_assign(acc, extrapolate(sn, s));
      add_assign(acc, extrapolate(ln, l));
      const Cube ytilde = add_scaled(y3, g.gamma_y3, acc);
      const Cube proxed = project_frobenius_ball(
          scale_by_inverse(ytilde, g.gamma_y3), spec.v, spec.epsilon);
      y3 = moreau_update(ytilde, g.gamma_y3, proxed);
    }

    b = std::move(bn);
    a = std::move(an);
    s = std::move(sn);
    l = std::move(ln);

    Cube t = b;
    add_assign(t, a);
    add_assign(t, s);
    add_assign(t, l);
    const double t_norm = frobenius_norm(t);
    if (!std::isfinite(t_norm)) {
      throw NumericalError("iterates diverged at iteration " +
                           std::to_string(n));
    }
    const double rel =
        relative_change(frobenius_norm(subtract(t, t_prev)),
                        frobenius_norm(t_prev), zero_is_fixed_point);
    result.iterations = n;
    result.final_relative_change = rel;
    const bool converged = rel <= config.tolerance;
    if (converged || n == config.max_iterations || n % stride == 0) {
      record(n, rel, t);
    }
    if (converged) {
      result.converged = true;
      break;
    }
    t_prev = std::move(t);
  }

  result.background = std::move(b);
  result.anomaly = std::move(a);
  result.sparse = std::move(s);
  result.stripe = std::move(l);
  return result;
}

FeasibilityReport feasibility_report(const SolveResult &result,
                                     const ProblemSpec &spec) {
  Cube t = result.background;
  add_assign(t, result.anomaly);
  add_assign(t, result.sparse);
  add_assign(t, result.stripe);
  FeasibilityReport report{};
  report.data_residual = frobenius_norm(subtract(t, spec.v));
  report.s_l1 = l1_norm(result.sparse);
  report.stripe_flatness_residual =
      frobenius_norm(vertical_diff().forward(result.stripe));
  report.objective =
      spec.regularizer.value(spec.regularizer.linmap.forward(result.background)) +
      spec.lambda1 * l21_norm(result.anomaly) +
      spec.lambda2 * l1_norm(result.stripe);
  return report;
}

PpdsProblem build_ppds_problem(const ProblemSpec &spec) {
  validate(spec);
  const CubeShape shape = spec.v.shape();
  const Regularizer &reg = spec.regularizer;

  PpdsProblem problem;
  problem.primals.push_back(PrimalBlock{Cube(shape), nullptr});  // B
  problem.primals.push_back(PrimalBlock{
      Cube(shape), [lambda1 = spec.lambda1](const Cube &x, double gamma) {
        return prox_l21(x, gamma * lambda1);
      }});  // A
  problem.primals.push_back(PrimalBlock{
      Cube(shape), [alpha = spec.alpha](const Cube &x, double) {
        return project_l1_ball(x, alpha);
      }});  // S
  problem.primals.push_back(PrimalBlock{
      Cube(shape), [lambda2 = spec.lambda2](const Cube &x, double gamma) {
        return prox_l1(x, gamma * lambda2);
      }});  // L

  DualBlock y1{Cube(reg.linmap.output_shape(shape)), reg.prox_r, {}};
  y1.couplings.push_back(
      DualCoupling{0, reg.linmap, reg.linmap.opnorm_bound_sq()});

  DualBlock y2{Cube(shape),
               [](const Cube &x, double) { return project_zero(x); },
               {}};
  y2.couplings.push_back(DualCoupling{3, vertical_diff(), 4.0});

  DualBlock y3{Cube(shape),
               [v = spec.v, eps = spec.epsilon](const Cube &x, double) {
                 return project_frobenius_ball(x, v, eps);
               },
               {}};
  for (std::size_t i = 0; i < 4; ++i) {
    y3.couplings.push_back(DualCoupling{i, identity_map(), 1.0});
  }

  problem.duals.push_back(std::move(y1));
  problem.duals.push_back(std::move(y2));
  problem.duals.push_back(std::move(y3));
  return problem;
}

}  // namespace hsad
