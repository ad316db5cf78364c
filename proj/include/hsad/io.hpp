#pragma once

#include <string>
#include <vector>

#include "hsad/cube.hpp"
#include "hsad/detection.hpp"
#include "hsad/solver.hpp"
#include "hsad/synth.hpp"

namespace hsad {

/// Shortest round-trippable decimal rendering of a double ("%.17g").
std::string format_double(double value);

/// Writes the cube as raw little-endian float32 at `path` plus a text
/// sidecar `path + ".hdr"` (height/width/bands, dtype f32le, layout bip).
void write_cube(const Cube &cube, const std::string &path);

/// Reads a cube written by write_cube; mismatched byte counts, malformed
/// headers, and non-finite payloads raise DataError naming the problem.
Cube read_cube(const std::string &path);

/// Binary PGM (P5, maxval 255); anomaly pixels stored as 255.
void write_mask_pgm(const GroundTruthMask &mask, const std::string &path);
GroundTruthMask read_mask_pgm(const std::string &path);

/// 16-bit binary PGM (P5, maxval 65535, big-endian samples) of a [0, 1]
/// map scaled to the full range.
void write_detection_pgm(const DetectionMap &map, const std::string &path);

/// Exact scores, one CSV row per image row.
void write_detection_csv(const DetectionMap &map, const std::string &path);
DetectionMap read_detection_csv(const std::string &path);

void write_roc_csv(const std::vector<RocPoint> &points,
                   const std::string &path);

void write_history_csv(const std::vector<HistoryRecord> &history,
                       const std::string &path);

void write_noise_meta(const NoiseMeta &meta, const std::string &path);
NoiseMeta read_noise_meta(const std::string &path);

}  // namespace hsad
