#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hsad/cube.hpp"
#include "hsad/detection.hpp"

namespace hsad {

/// A rectangular implanted target; its tubes are blended toward a distinct
/// spectrum with weight spectrum_scale in (0, 1].
struct AnomalyTarget {
  std::size_t row = 0;
  std::size_t col = 0;
  std::size_t height = 1;
  std::size_t width = 1;
  double spectrum_scale = 0.4;
};

struct SceneSpec {
  std::size_t height = 50;
  std::size_t width = 50;
  std::size_t bands = 30;
  std::size_t endmembers = 4;
  std::vector<AnomalyTarget> targets;
  std::uint64_t seed = 0;
};

/// Noise settings applied to a scene, kept with the cube dimensions so the
/// constraint radii can be calibrated from them.
struct NoiseMeta {
  CubeShape shape;
  double sigma = 0.0;
  double sp_rate = 0.0;
  double stripe_rate = 0.0;
  int case_id = 0;
  std::uint64_t seed = 0;
};

struct Scene {
  Cube clean;
  Cube observed;
  GroundTruthMask gt;
  NoiseMeta meta;
};

/// Deterministic scene: a low-rank smooth background (at most
/// `endmembers` smooth signatures mixed by smooth abundance maps, values in
/// [0, 1]) with the listed targets implanted.  Rejects out-of-bounds or
/// overlapping targets and anomaly fractions above 2%.
Scene generate_scene(const SceneSpec &spec);

/// Adds i.i.d. Gaussian noise of the given standard deviation.
void add_gaussian(Scene &scene, double sigma, std::uint64_t seed);

/// Sets round(rate * count) entries, chosen uniformly without replacement,
/// to 0 or 1 with equal probability.
void add_salt_pepper(Scene &scene, double rate, std::uint64_t seed);

/// Adds round(rate * width * bands) column stripes: each selected
/// (column, band) pair gets one constant offset, uniform in [-0.3, 0.3],
/// over the full column height.
void add_stripes(Scene &scene, double rate, std::uint64_t seed);

/// Case 1: none; 2: sigma 0.03; 3: impulse and stripes 0.03;
/// 4: all three 0.01; 5: all three 0.05.  Stages run in the order
/// Gaussian, salt-and-pepper, stripes with sub-seeds seed+1..seed+3.
void apply_noise_case(Scene &scene, int case_id, std::uint64_t seed);

/// Constraint radii from the noise settings:
/// epsilon = eta * sigma * sqrt(n * (1 - sp)), alpha = eta * sp * n / 2,
/// with n the entry count and eta in (0, 1].
std::pair<double, double> calibrate_radii(const NoiseMeta &meta, double eta);

/// Deterministic non-overlapping placement of `count` square targets of the
/// given side length, two pixels clear of the border and of each other.
std::vector<AnomalyTarget> auto_targets(std::size_t height, std::size_t width,
                                        std::size_t count, std::size_t size,
                                        double spectrum_scale,
                                        std::uint64_t seed);

}  // namespace hsad
