#include "hsad/synth.hpp"

#include <cmath>
#include <numbers>

#include "hsad/rng.hpp"

namespace hsad {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool rects_touch(const AnomalyTarget &a, const AnomalyTarget &b,
                 std::size_t gap) {
  const auto apart = [gap](std::size_t lo1, std::size_t len1, std::size_t lo2,
                           std::size_t len2) {
    return lo1 + len1 + gap <= lo2 || lo2 + len2 + gap <= lo1;
  };
  return !(apart(a.row, a.height, b.row, b.height) ||
           apart(a.col, a.width, b.col, b.width));
}

void validate_targets(const SceneSpec &spec) {
  std::size_t anomaly_pixels = 0;
  for (const auto &t : spec.targets) {
    if (t.height == 0 || t.width == 0 || t.row + t.height > spec.height ||
        t.col + t.width > spec.width) {
      throw ShapeError("target outside the scene");
    }
    if (!(t.spectrum_scale > 0.0) || t.spectrum_scale > 1.0) {
      throw ShapeError("target spectrum_scale must be in (0, 1]");
    }
    anomaly_pixels += t.height * t.width;
  }
  for (std::size_t i = 0; i < spec.targets.size(); ++i) {
    for (std::size_t j = i + 1; j < spec.targets.size(); ++j) {
      if (rects_touch(spec.targets[i], spec.targets[j], 0)) {
        throw ShapeError("targets overlap");
      }
    }
  }
  if (anomaly_pixels * 50 > spec.height * spec.width) {
    throw ShapeError("anomaly fraction exceeds 2%");
  }
}

// Smooth curve over the band index, bounded away from 0 and 1.
std::vector<double> smooth_signature(Rng &rng, std::size_t bands) {
  const double base = rng.uniform(0.35, 0.65);
  std::vector<double> sig(bands, base);
  double amp_cap = 0.15;
  for (int m = 0; m < 3; ++m) {
    const double amp = amp_cap * rng.uniform(0.4, 1.0);
    const double freq = rng.uniform(0.6, 2.4);
    const double phase = rng.uniform(0.0, kTwoPi);
    for (std::size_t k = 0; k < bands; ++k) {
      sig[k] += amp * std::sin(kTwoPi * freq * static_cast<double>(k) /
                                   static_cast<double>(bands) +
                               phase);
    }
    amp_cap /= 2.0;
  }
  return sig;
}

}  // namespace

Scene generate_scene(const SceneSpec &spec) {
  if (spec.height == 0 || spec.width == 0 || spec.bands == 0) {
    throw ShapeError("scene dimensions must be positive");
  }
  if (spec.endmembers == 0) {
    throw ShapeError("scene needs at least one endmember");
  }
  validate_targets(spec);

  Rng rng(spec.seed);
  const std::size_t rank = spec.endmembers;
  const std::size_t h = spec.height, w = spec.width, b = spec.bands;

  std::vector<std::vector<double>> signatures;
  signatures.reserve(rank);
  for (std::size_t r = 0; r < rank; ++r) {
    signatures.push_back(smooth_signature(rng, b));
  }

  // Smooth positive abundance fields, normalized per pixel to sum to one;
  // the mixture keeps values inside [0, 1] and the matricized background at
  // rank <= endmembers.
  std::vector<std::vector<double>> abundance(rank,
                                             std::vector<double>(h * w, 0.0));
  for (std::size_t r = 0; r < rank; ++r) {
    double c[2], p[2], q[2], psi[2];
    for (int m = 0; m < 2; ++m) {
      c[m] = rng.uniform(0.5, 1.0);
      p[m] = rng.uniform(0.4, 1.6);
      q[m] = rng.uniform(0.4, 1.6);
      psi[m] = rng.uniform(0.0, kTwoPi);
    }
    for (std::size_t i = 0; i < h; ++i) {
      for (std::size_t j = 0; j < w; ++j) {
        double g = 0.0;
        for (int m = 0; m < 2; ++m) {
          g += c[m] * std::cos(kTwoPi * (p[m] * static_cast<double>(i) /
                                             static_cast<double>(h) +
                                         q[m] * static_cast<double>(j) /
                                             static_cast<double>(w)) +
                               psi[m]);
        }
        abundance[r][i * w + j] = std::exp(1.5 * g);
      }
    }
  }
  for (std::size_t px = 0; px < h * w; ++px) {
    double total = 0.0;
    for (std::size_t r = 0; r < rank; ++r) total += abundance[r][px];
    for (std::size_t r = 0; r < rank; ++r) abundance[r][px] /= total;
  }

  Scene scene;
  scene.clean = Cube(h, w, b);
  double *cv = scene.clean.values().data();
  for (std::size_t px = 0; px < h * w; ++px) {
    for (std::size_t k = 0; k < b; ++k) {
      double v = 0.0;
      for (std::size_t r = 0; r < rank; ++r) {
        v += abundance[r][px] * signatures[r][k];
      }
      cv[px * b + k] = v;
    }
  }

  scene.gt = GroundTruthMask{h, w, std::vector<std::uint8_t>(h * w, 0)};
  for (const auto &t : spec.targets) {
    // A higher-frequency oscillation than any background signature, so the
    // target spectrum is distinct from every smooth mixture.
    const double freq = rng.uniform(3.0, 5.0);
    const double phase = rng.uniform(0.0, kTwoPi);
    std::vector<double> sig(b);
    for (std::size_t k = 0; k < b; ++k) {
      sig[k] = 0.5 + 0.42 * std::sin(kTwoPi * freq * static_cast<double>(k) /
                                         static_cast<double>(b) +
                                     phase);
    }
    for (std::size_t i = t.row; i < t.row + t.height; ++i) {
      for (std::size_t j = t.col; j < t.col + t.width; ++j) {
        scene.gt.labels[i * w + j] = 1;
        double *tube = cv + (i * w + j) * b;
        for (std::size_t k = 0; k < b; ++k) {
          tube[k] = (1.0 - t.spectrum_scale) * tube[k] +
                    t.spectrum_scale * sig[k];
        }
      }
    }
  }

  scene.observed = scene.clean;
  scene.meta = NoiseMeta{CubeShape{h, w, b}, 0.0, 0.0, 0.0, 0, spec.seed};
  return scene;
}

void add_gaussian(Scene &scene, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw ShapeError("sigma must be nonnegative");
  Rng rng(seed);
  for (double &v : scene.observed.values()) v += sigma * rng.normal();
  scene.meta.sigma = sigma;
}

void add_salt_pepper(Scene &scene, double rate, std::uint64_t seed) {
  if (!(rate >= 0.0) || rate > 1.0) {
    throw ShapeError("salt-and-pepper rate must be in [0, 1]");
  }
  Rng rng(seed);
  auto values = scene.observed.values();
  const std::size_t n = values.size();
  const auto count =
      static_cast<std::size_t>(std::llround(rate * static_cast<double>(n)));
  std::vector<std::size_t> idx(n);
  for (std::size_t e = 0; e < n; ++e) idx[e] = e;
  for (std::size_t t = 0; t < count; ++t) {
    // Partial Fisher-Yates: uniform draw without replacement.
    const std::size_t j = t + rng.index(n - t);
    std::swap(idx[t], idx[j]);
    values[idx[t]] = rng.uniform() < 0.5 ? 0.0 : 1.0;
  }
  scene.meta.sp_rate = rate;
}

void add_stripes(Scene &scene, double rate, std::uint64_t seed) {
  if (!(rate >= 0.0) || rate > 1.0) {
    throw ShapeError("stripe rate must be in [0, 1]");
  }
  Rng rng(seed);
  const std::size_t h = scene.observed.height();
  const std::size_t w = scene.observed.width();
  const std::size_t b = scene.observed.bands();
  const std::size_t n = w * b;
  const auto count =
      static_cast<std::size_t>(std::llround(rate * static_cast<double>(n)));
  std::vector<std::size_t> idx(n);
  for (std::size_t e = 0; e < n; ++e) idx[e] = e;
  for (std::size_t t = 0; t < count; ++t) {
    const std::size_t j = t + rng.index(n - t);
    std::swap(idx[t], idx[j]);
    const std::size_t col = idx[t] / b;
    const std::size_t band = idx[t] % b;
    const double intensity = rng.uniform(-0.3, 0.3);
    for (std::size_t i = 0; i < h; ++i) {
      scene.observed(i, col, band) += intensity;
    }
  }
  scene.meta.stripe_rate = rate;
}

void apply_noise_case(Scene &scene, int case_id, std::uint64_t seed) {
  double sigma = 0.0, sp = 0.0, stripes = 0.0;
  switch (case_id) {
    case 1:
      break;
    case 2:
      sigma = 0.03;
      break;
    case 3:
      sp = 0.03;
      stripes = 0.03;
      break;
    case 4:
      sigma = sp = stripes = 0.01;
      break;
    case 5:
      sigma = sp = stripes = 0.05;
      break;
    default:
      throw ShapeError("noise case must be 1..5");
  }
  if (sigma > 0.0) add_gaussian(scene, sigma, seed + 1);
  if (sp > 0.0) add_salt_pepper(scene, sp, seed + 2);
  if (stripes > 0.0) add_stripes(scene, stripes, seed + 3);
  scene.meta.sigma = sigma;
  scene.meta.sp_rate = sp;
  scene.meta.stripe_rate = stripes;
  scene.meta.case_id = case_id;
  scene.meta.seed = seed;
}

std::pair<double, double> calibrate_radii(const NoiseMeta &meta, double eta) {
  if (!(eta > 0.0) || eta > 1.0) {
    throw ShapeError("eta must be in (0, 1]");
  }
  const double n = static_cast<double>(meta.shape.count());
  const double epsilon =
      eta * meta.sigma * std::sqrt(n * (1.0 - meta.sp_rate));
  const double alpha = 0.5 * eta * meta.sp_rate * n;
  return {epsilon, alpha};
}

std::vector<AnomalyTarget> auto_targets(std::size_t height, std::size_t width,
                                        std::size_t count, std::size_t size,
                                        double spectrum_scale,
                                        std::uint64_t seed) {
  constexpr std::size_t kMargin = 2;
  if (size == 0 || height < size + 2 * kMargin || width < size + 2 * kMargin) {
    throw ShapeError("scene too small for the requested target size");
  }
  Rng rng(seed);
  std::vector<AnomalyTarget> targets;
  targets.reserve(count);
  const std::size_t row_span = height - size - 2 * kMargin + 1;
  const std::size_t col_span = width - size - 2 * kMargin + 1;
  for (std::size_t t = 0; t < count; ++t) {
    bool placed = false;
    for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
      AnomalyTarget cand{kMargin + rng.index(row_span),
                         kMargin + rng.index(col_span), size, size,
                         spectrum_scale};
      bool clear = true;
      for (const auto &other : targets) {
        if (rects_touch(cand, other, kMargin)) {
          clear = false;
          break;
        }
      }
      if (clear) {
        targets.push_back(cand);
        placed = true;
      }
    }
    if (!placed) {
      throw DataError("could not place " + std::to_string(count) +
                      " disjoint targets");
    }
  }
  return targets;
}

}  // namespace hsad
