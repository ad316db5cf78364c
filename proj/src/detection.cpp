#include "hsad/detection.hpp"

#include <algorithm>
#include <cmath>

#include "hsad/errors.hpp"

namespace hsad {

namespace {

void require_matching(const DetectionMap &map, const GroundTruthMask &gt) {
  if (map.height != gt.height || map.width != gt.width) {
    throw ShapeError("detection map and mask disagree on dimensions");
  }
  if (map.scores.size() != map.height * map.width ||
      gt.labels.size() != gt.height * gt.width) {
    throw ShapeError("detection map or mask has inconsistent storage");
  }
}

void require_both_classes(const GroundTruthMask &gt) {
  std::size_t anomalies = 0;
  for (auto v : gt.labels) anomalies += v ? 1 : 0;
  if (anomalies == 0 || anomalies == gt.labels.size()) {
    throw DataError("mask must contain both anomaly and background pixels");
  }
}

}  // namespace

DetectionMap detection_map(const Cube &anomaly) {
  DetectionMap map;
  map.height = anomaly.height();
  map.width = anomaly.width();
  map.scores.resize(map.height * map.width);
  const std::size_t bands = anomaly.bands();
  const double *av = anomaly.values().data();
  for (std::size_t p = 0; p < map.scores.size(); ++p) {
    double sq = 0.0;
    for (std::size_t k = 0; k < bands; ++k) {
      const double v = av[p * bands + k];
      sq += v * v;
    }
    map.scores[p] = std::sqrt(sq);
  }
  return map;
}

DetectionMap normalize_map(const DetectionMap &map) {
  if (map.scores.empty()) throw ShapeError("cannot normalize an empty map");
  const auto [lo_it, hi_it] =
      std::minmax_element(map.scores.begin(), map.scores.end());
  const double lo = *lo_it, hi = *hi_it;
  DetectionMap out{map.height, map.width,
                   std::vector<double>(map.scores.size(), 0.0)};
  if (hi > lo) {
    for (std::size_t p = 0; p < map.scores.size(); ++p) {
      out.scores[p] = (map.scores[p] - lo) / (hi - lo);
    }
  }
  return out;
}

std::vector<RocPoint> roc_points(const DetectionMap &map,
                                 const GroundTruthMask &gt) {
  require_matching(map, gt);
  require_both_classes(gt);

  // Pairs sorted by score descending; a sweep over distinct values yields
  // one operating point per threshold.
  std::vector<std::pair<double, std::uint8_t>> pairs(map.scores.size());
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    pairs[p] = {map.scores[p], gt.labels[p] ? std::uint8_t{1} : std::uint8_t{0}};
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const auto &a, const auto &b) { return a.first > b.first; });

  std::size_t total_anom = 0;
  for (const auto &pr : pairs) total_anom += pr.second;
  const std::size_t total_bg = pairs.size() - total_anom;

  std::vector<RocPoint> points;
  points.push_back(RocPoint{0.0, 0.0});  // sentinel above every score
  std::size_t hit = 0, fa = 0;
  std::size_t p = 0;
  while (p < pairs.size()) {
    const double value = pairs[p].first;
    while (p < pairs.size() && pairs[p].first == value) {
      hit += pairs[p].second;
      fa += 1 - pairs[p].second;
      ++p;
    }
    points.push_back(RocPoint{static_cast<double>(fa) / total_bg,
                              static_cast<double>(hit) / total_anom});
  }
  return points;
}

double auc(const DetectionMap &map, const GroundTruthMask &gt) {
  const std::vector<RocPoint> points = roc_points(map, gt);
  double area = 0.0;
  for (std::size_t p = 1; p < points.size(); ++p) {
    area += (points[p].pfa - points[p - 1].pfa) *
            (points[p].pd + points[p - 1].pd) / 2.0;
  }
  return area;
}

double ser(const DetectionMap &map, const GroundTruthMask &gt) {
  require_matching(map, gt);
  require_both_classes(gt);
  double sum = 0.0;
  for (std::size_t p = 0; p < map.scores.size(); ++p) {
    const double v = map.scores[p];
    if (v < -1e-12 || v > 1.0 + 1e-12) {
      throw DataError("ser expects map values in [0, 1]");
    }
    const double err = gt.labels[p] ? v - 1.0 : v;
    sum += err * err;
  }
  return 100.0 * sum / static_cast<double>(map.scores.size());
}

}  // namespace hsad
