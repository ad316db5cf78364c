#pragma once

#include <cstdint>
#include <vector>

#include "hsad/cube.hpp"

namespace hsad {

/// Per-pixel anomaly scores on an height x width grid.
struct DetectionMap {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<double> scores;

  double &at(std::size_t i, std::size_t j) { return scores[i * width + j]; }
  double at(std::size_t i, std::size_t j) const { return scores[i * width + j]; }
};

/// Per-pixel labels; 1 marks an anomaly pixel.
struct GroundTruthMask {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<std::uint8_t> labels;
};

/// Score map from an anomaly component: the Euclidean norm of each
/// spectral tube.
DetectionMap detection_map(const Cube &anomaly);

/// Min-max rescale to [0, 1]; a constant map becomes all zeros.
DetectionMap normalize_map(const DetectionMap &map);

struct RocPoint {
  double pfa;
  double pd;
};

/// ROC curve sampled at every distinct score, descending, preceded by an
/// above-all sentinel; a pixel is detected when its score >= threshold.
/// Starts at (0, 0) and ends at (1, 1).
std::vector<RocPoint> roc_points(const DetectionMap &map,
                                 const GroundTruthMask &gt);

/// Area under the ROC curve by trapezoid; ties contribute one half.
double auc(const DetectionMap &map, const GroundTruthMask &gt);

/// Squared-error rate of a [0, 1] map against the mask, in percent:
/// 100 * (sum over anomalies of (p-1)^2 + sum over background of p^2) / N.
double ser(const DetectionMap &map, const GroundTruthMask &gt);

}  // namespace hsad
