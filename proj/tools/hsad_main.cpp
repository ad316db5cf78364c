// hsad: hyperspectral anomaly detection by convex decomposition.
//
// Subcommands:
//   simulate   generate a synthetic scene with a chosen noise case
//   decompose  split an observed cube into background/anomaly/sparse/stripe
//   evaluate   score a detection map against a ground-truth mask
//   sweep      grid-search regularization weights and report AUC/SER

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "hsad/cube.hpp"
#include "hsad/detection.hpp"
#include "hsad/errors.hpp"
#include "hsad/io.hpp"
#include "hsad/regularizer.hpp"
#include "hsad/solver.hpp"
#include "hsad/synth.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

struct SimulateArgs {
  std::size_t height = 50;
  std::size_t width = 50;
  std::size_t bands = 30;
  std::size_t endmembers = 4;
  std::size_t targets = 5;
  std::size_t target_size = 3;
  double spectrum_scale = 0.4;
  int noise_case = 1;
  std::uint64_t seed = 7;
  double eta = 0.9;
  std::string out = "scene";
};

struct DecomposeArgs {
  std::string in;
  std::string reg = "htv";
  double omega = 0.05;
  double lambda1 = 0.75;
  double lambda2 = 0.05;
  std::string meta;
  double eta = 0.9;
  std::optional<double> epsilon;
  std::optional<double> alpha;
  double tolerance = 1e-5;
  std::optional<std::size_t> max_iterations;
  std::size_t stride = 50;
  bool normalize = false;
  std::string out = "decomp";
};

struct EvaluateArgs {
  std::string gt;
  std::string map_csv;
  std::string anomaly_cube;
  std::string roc_out;
};

struct SweepArgs {
  std::string in;
  std::string gt;
  std::string reg = "htv";
  double omega = 0.05;
  std::string lambda1_grid = "0.75";
  std::string lambda2_grid = "0.05";
  std::string eta_grid = "0.9";
  std::string meta;
  double tolerance = 1e-5;
  std::optional<std::size_t> max_iterations;
  std::size_t jobs = 1;
  std::string out = "sweep.csv";
};

std::vector<double> parse_grid(const std::string &text, const char *name) {
  std::vector<double> values;
  std::string token;
  std::istringstream stream(text);
  while (std::getline(stream, token, ',')) {
    if (token.empty()) {
      throw hsad::DataError(std::string(name) + ": empty grid entry");
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception &) {
      throw hsad::DataError(std::string(name) + ": bad number '" + token + "'");
    }
    if (used != token.size() || !std::isfinite(v) || v < 0.0) {
      throw hsad::DataError(std::string(name) + ": bad number '" + token + "'");
    }
    values.push_back(v);
  }
  if (values.empty()) {
    throw hsad::DataError(std::string(name) + ": empty grid");
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

std::pair<double, double> resolve_radii(const std::optional<double> &epsilon,
                                        const std::optional<double> &alpha,
                                        const std::string &meta_path,
                                        double eta) {
  if (epsilon.has_value() != alpha.has_value()) {
    throw hsad::DataError(
        "--epsilon and --alpha must be given together");
  }
  if (epsilon.has_value()) {
    return {*epsilon, *alpha};
  }
  if (meta_path.empty()) {
    throw hsad::DataError(
        "radii unresolved: pass --meta or both --epsilon and --alpha");
  }
  const hsad::NoiseMeta meta = hsad::read_noise_meta(meta_path);
  return hsad::calibrate_radii(meta, eta);
}

hsad::DetectionMap map_from_result(const hsad::Cube &anomaly, bool normalize) {
  hsad::DetectionMap map = hsad::detection_map(anomaly);
  if (normalize) {
    map = hsad::normalize_map(map);
  }
  return map;
}

int run_simulate(const SimulateArgs &args) {
  hsad::SceneSpec spec;
  spec.height = args.height;
  spec.width = args.width;
  spec.bands = args.bands;
  spec.endmembers = args.endmembers;
  spec.seed = args.seed;
  spec.targets = hsad::auto_targets(args.height, args.width, args.targets,
                                    args.target_size, args.spectrum_scale,
                                    args.seed);
  hsad::Scene scene = hsad::generate_scene(spec);
  hsad::write_cube(scene.clean, args.out + "_clean.cube");
  hsad::apply_noise_case(scene, args.noise_case, args.seed);
  hsad::write_cube(scene.observed, args.out + "_observed.cube");
  hsad::write_mask_pgm(scene.gt, args.out + "_gt.pgm");
  hsad::write_noise_meta(scene.meta, args.out + "_meta.json");
  const auto [epsilon, alpha] = hsad::calibrate_radii(scene.meta, args.eta);
  std::cout << "case=" << args.noise_case << "\n";
  std::cout << "epsilon=" << hsad::format_double(epsilon) << "\n";
  std::cout << "alpha=" << hsad::format_double(alpha) << "\n";
  return kExitOk;
}

int run_decompose(const DecomposeArgs &args) {
  const hsad::Cube v = hsad::read_cube(args.in);
  const auto [epsilon, alpha] =
      resolve_radii(args.epsilon, args.alpha, args.meta, args.eta);

  hsad::ProblemSpec spec{v, args.lambda1, args.lambda2, epsilon, alpha,
                         hsad::make_regularizer(args.reg, v.shape(),
                                                args.omega)};
  hsad::SolverConfig config = hsad::default_config(spec.regularizer);
  config.tolerance = args.tolerance;
  if (args.max_iterations) config.max_iterations = *args.max_iterations;
  config.diagnostics_stride = args.stride;

  const hsad::Stepsizes g = hsad::compute_stepsizes(spec);
  std::cout << "reg=" << args.reg << "\n";
  std::cout << "epsilon=" << hsad::format_double(epsilon) << "\n";
  std::cout << "alpha=" << hsad::format_double(alpha) << "\n";
  std::cout << "gamma_b=" << hsad::format_double(g.gamma_b) << "\n";
  std::cout << "gamma_a=" << hsad::format_double(g.gamma_a) << "\n";
  std::cout << "gamma_s=" << hsad::format_double(g.gamma_s) << "\n";
  std::cout << "gamma_l=" << hsad::format_double(g.gamma_l) << "\n";
  std::cout << "gamma_y=" << hsad::format_double(g.gamma_y1) << "\n";

  const hsad::SolveResult result = hsad::solve(spec, config);

  hsad::write_cube(result.background, args.out + "_background.cube");
  hsad::write_cube(result.anomaly, args.out + "_anomaly.cube");
  hsad::write_cube(result.sparse, args.out + "_sparse.cube");
  hsad::write_cube(result.stripe, args.out + "_stripe.cube");
  const hsad::DetectionMap map =
      map_from_result(result.anomaly, args.normalize);
  hsad::write_detection_csv(map, args.out + "_detection.csv");
  hsad::write_detection_pgm(hsad::normalize_map(map),
                            args.out + "_detection.pgm");
  hsad::write_history_csv(result.history, args.out + "_diagnostics.csv");

  const hsad::FeasibilityReport report = hsad::feasibility_report(result, spec);
  std::cout << "iterations=" << result.iterations << "\n";
  std::cout << "converged=" << (result.converged ? "true" : "false") << "\n";
  std::cout << "relative_change="
            << hsad::format_double(result.final_relative_change) << "\n";
  std::cout << "data_residual=" << hsad::format_double(report.data_residual)
            << "\n";
  std::cout << "s_l1=" << hsad::format_double(report.s_l1) << "\n";
  std::cout << "stripe_flatness_residual="
            << hsad::format_double(report.stripe_flatness_residual) << "\n";
  const double stripe_norm = hsad::frobenius_norm(result.stripe);
  std::cout << "stripe_flatness_rel="
            << hsad::format_double(report.stripe_flatness_residual /
                                   std::max(stripe_norm, 1e-12))
            << "\n";
  std::cout << "objective=" << hsad::format_double(report.objective) << "\n";
  return kExitOk;
}

int run_evaluate(const EvaluateArgs &args) {
  if (args.map_csv.empty() == args.anomaly_cube.empty()) {
    throw hsad::DataError("pass exactly one of --map or --anomaly");
  }
  const hsad::GroundTruthMask gt = hsad::read_mask_pgm(args.gt);
  hsad::DetectionMap map;
  if (!args.map_csv.empty()) {
    map = hsad::read_detection_csv(args.map_csv);
  } else {
    map = hsad::normalize_map(
        hsad::detection_map(hsad::read_cube(args.anomaly_cube)));
  }
  const double auc_value = hsad::auc(map, gt);
  const double ser_value = hsad::ser(hsad::normalize_map(map), gt);
  if (!args.roc_out.empty()) {
    hsad::write_roc_csv(hsad::roc_points(map, gt), args.roc_out);
  }
  std::cout << "auc=" << hsad::format_double(auc_value) << "\n";
  std::cout << "ser=" << hsad::format_double(ser_value) << "\n";
  return kExitOk;
}

struct SweepRow {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double eta = 0.0;
  double auc = 0.0;
  double ser = 0.0;
  std::size_t iterations = 0;
  bool ok = false;
  std::string error;
};

int run_sweep(const SweepArgs &args) {
  const hsad::Cube v = hsad::read_cube(args.in);
  const hsad::GroundTruthMask gt = hsad::read_mask_pgm(args.gt);
  const std::vector<double> l1_grid = parse_grid(args.lambda1_grid, "--lambda1-grid");
  const std::vector<double> l2_grid = parse_grid(args.lambda2_grid, "--lambda2-grid");
  const std::vector<double> eta_grid = parse_grid(args.eta_grid, "--eta-grid");
  if (args.meta.empty()) {
    throw hsad::DataError("sweep requires --meta for radius calibration");
  }
  const hsad::NoiseMeta meta = hsad::read_noise_meta(args.meta);
  if (args.jobs == 0) {
    throw hsad::DataError("--jobs must be at least 1");
  }

  struct Point {
    double lambda1;
    double lambda2;
    double eta;
  };
  std::vector<Point> points;
  for (double l1 : l1_grid) {
    for (double l2 : l2_grid) {
      for (double eta : eta_grid) {
        points.push_back({l1, l2, eta});
      }
    }
  }

  std::vector<SweepRow> rows(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= points.size()) return;
      const Point &p = points[idx];
      SweepRow &row = rows[idx];
      row.lambda1 = p.lambda1;
      row.lambda2 = p.lambda2;
      row.eta = p.eta;
      try {
        const auto [epsilon, alpha] = hsad::calibrate_radii(meta, p.eta);
        hsad::ProblemSpec spec{v, p.lambda1, p.lambda2, epsilon, alpha,
                               hsad::make_regularizer(args.reg, v.shape(),
                                                      args.omega)};
        hsad::SolverConfig config = hsad::default_config(spec.regularizer);
        config.tolerance = args.tolerance;
        if (args.max_iterations) config.max_iterations = *args.max_iterations;
        const hsad::SolveResult result = hsad::solve(spec, config);
        const hsad::DetectionMap map =
            hsad::normalize_map(hsad::detection_map(result.anomaly));
        row.auc = hsad::auc(map, gt);
        row.ser = hsad::ser(map, gt);
        row.iterations = result.iterations;
        row.ok = true;
      } catch (const std::exception &e) {
        row.error = e.what();
      }
    }
  };

  const std::size_t thread_count =
      std::min<std::size_t>(args.jobs, points.empty() ? 1 : points.size());
  std::vector<std::thread> threads;
  threads.reserve(thread_count);
  for (std::size_t i = 0; i < thread_count; ++i) {
    threads.emplace_back(worker);
  }
  for (std::thread &t : threads) t.join();

  std::size_t best = rows.size();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].ok) continue;
    if (best == rows.size() || rows[i].auc > rows[best].auc) best = i;
  }

  std::ofstream out(args.out, std::ios::binary);
  if (!out) {
    throw hsad::DataError("cannot open " + args.out + " for writing");
  }
  out << "lambda1,lambda2,eta,auc,ser,iterations,best,error\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const SweepRow &row = rows[i];
    out << hsad::format_double(row.lambda1) << ','
        << hsad::format_double(row.lambda2) << ','
        << hsad::format_double(row.eta) << ',';
    if (row.ok) {
      out << hsad::format_double(row.auc) << ','
          << hsad::format_double(row.ser) << ',' << row.iterations;
    } else {
      out << ",,";
    }
    out << ',' << (i == best ? 1 : 0) << ',';
    std::string msg = row.error;
    for (char &c : msg) {
      if (c == ',' || c == '\n' || c == '\r') c = ';';
    }
    out << msg << '\n';
  }
  if (!out) {
    throw hsad::DataError("failed writing " + args.out);
  }
  if (best < rows.size()) {
    std::cout << "best_lambda1=" << hsad::format_double(rows[best].lambda1)
              << "\n";
    std::cout << "best_lambda2=" << hsad::format_double(rows[best].lambda2)
              << "\n";
    std::cout << "best_eta=" << hsad::format_double(rows[best].eta) << "\n";
    std::cout << "best_auc=" << hsad::format_double(rows[best].auc) << "\n";
  } else {
    std::cout << "best_auc=\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Hyperspectral anomaly detection by convex decomposition"};
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App *simulate = app.add_subcommand("simulate", "Generate a synthetic scene");
  simulate->add_option("--height", sim.height, "Scene height in pixels");
  simulate->add_option("--width", sim.width, "Scene width in pixels");
  simulate->add_option("--bands", sim.bands, "Number of spectral bands");
  simulate->add_option("--endmembers", sim.endmembers, "Background endmembers");
  simulate->add_option("--targets", sim.targets, "Number of anomaly targets");
  simulate->add_option("--target-size", sim.target_size, "Target side length");
  simulate->add_option("--spectrum-scale", sim.spectrum_scale,
                       "Anomaly blend weight in (0,1]");
  simulate->add_option("--case", sim.noise_case, "Noise case 1..5");
  simulate->add_option("--seed", sim.seed, "RNG seed");
  simulate->add_option("--eta", sim.eta, "Calibration factor in (0,1]");
  simulate->add_option("--out", sim.out, "Output path prefix");

  DecomposeArgs dec;
  CLI::App *decompose =
      app.add_subcommand("decompose", "Decompose an observed cube");
  decompose->add_option("--in", dec.in, "Observed cube path")->required();
  decompose->add_option("--reg", dec.reg,
                        "Regularizer: htv, sstv, hsstv, nuclear");
  decompose->add_option("--omega", dec.omega, "hsstv direct-TV weight");
  decompose->add_option("--lambda1", dec.lambda1, "Anomaly weight");
  decompose->add_option("--lambda2", dec.lambda2, "Stripe weight");
  decompose->add_option("--meta", dec.meta, "Noise metadata for calibration");
  decompose->add_option("--eta", dec.eta, "Calibration factor in (0,1]");
  auto *opt_eps = decompose->add_option("--epsilon", dec.epsilon,
                                        "Data-fidelity radius (overrides --meta)");
  auto *opt_alpha = decompose->add_option("--alpha", dec.alpha,
                                          "Sparse-noise l1 budget (overrides --meta)");
  opt_eps->needs(opt_alpha);
  opt_alpha->needs(opt_eps);
  decompose->add_option("--tol", dec.tolerance, "Relative-change tolerance");
  decompose->add_option("--max-iter", dec.max_iterations, "Iteration cap");
  decompose->add_option("--stride", dec.stride, "Diagnostics stride");
  decompose->add_flag("--normalize", dec.normalize,
                      "Min-max normalize the detection CSV");
  decompose->add_option("--out", dec.out, "Output path prefix");

  EvaluateArgs ev;
  CLI::App *evaluate = app.add_subcommand("evaluate", "Score a detection map");
  evaluate->add_option("--gt", ev.gt, "Ground-truth mask (PGM)")->required();
  evaluate->add_option("--map", ev.map_csv, "Detection map CSV");
  evaluate->add_option("--anomaly", ev.anomaly_cube, "Anomaly cube");
  evaluate->add_option("--roc-out", ev.roc_out, "Write ROC points CSV");

  SweepArgs sw;
  CLI::App *sweep = app.add_subcommand("sweep", "Grid-search weights");
  sweep->add_option("--in", sw.in, "Observed cube path")->required();
  sweep->add_option("--gt", sw.gt, "Ground-truth mask (PGM)")->required();
  sweep->add_option("--meta", sw.meta, "Noise metadata for calibration")
      ->required();
  sweep->add_option("--reg", sw.reg, "Regularizer: htv, sstv, hsstv, nuclear");
  sweep->add_option("--omega", sw.omega, "hsstv direct-TV weight");
  sweep->add_option("--lambda1-grid", sw.lambda1_grid, "Comma list");
  sweep->add_option("--lambda2-grid", sw.lambda2_grid, "Comma list");
  sweep->add_option("--eta-grid", sw.eta_grid, "Comma list");
  sweep->add_option("--tol", sw.tolerance, "Relative-change tolerance");
  sweep->add_option("--max-iter", sw.max_iterations, "Iteration cap");
  sweep->add_option("--jobs", sw.jobs, "Worker threads");
  sweep->add_option("--out", sw.out, "Results CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) return run_simulate(sim);
    if (decompose->parsed()) return run_decompose(dec);
    if (evaluate->parsed()) return run_evaluate(ev);
    return run_sweep(sw);
  } catch (const hsad::NumericalError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const hsad::DataError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}
