#include "hsad/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace hsad {

namespace {

std::ofstream open_out(const std::string &path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw DataError("cannot open " + path + " for writing");
  return out;
}

std::ifstream open_in(const std::string &path, bool binary) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw DataError("cannot open " + path);
  return in;
}

std::string read_all(const std::string &path, bool binary) {
  std::ifstream in = open_in(path, binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return std::move(buffer).str();
}

void put_u32_le(std::string &out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

std::uint32_t get_u32_le(const unsigned char *p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

// Reads one whitespace-delimited PGM token, skipping '#' comments.
std::string pgm_token(std::istream &in) {
  std::string token;
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (!std::isspace(c)) {
      break;
    }
    c = in.get();
  }
  while (c != EOF && !std::isspace(c)) {
    token.push_back(static_cast<char>(c));
    c = in.get();
  }
  return token;
}

std::size_t parse_positive(const std::string &token, const char *what) {
  try {
    const long long v = std::stoll(token);
    if (v <= 0) throw std::invalid_argument("nonpositive");
    return static_cast<std::size_t>(v);
  } catch (const std::exception &) {
    throw DataError(std::string("invalid ") + what + " \"" + token + "\"");
  }
}

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

void write_cube(const Cube &cube, const std::string &path) {
  if (cube.empty()) throw ShapeError("refusing to write an empty cube");
  std::string payload;
  payload.reserve(cube.size() * 4);
  for (double v : cube.values()) {
    const float f = static_cast<float>(v);
    if (!std::isfinite(f)) {
      throw DataError("value " + format_double(v) +
                      " is not representable as finite float32");
    }
    put_u32_le(payload, std::bit_cast<std::uint32_t>(f));
  }
  open_out(path, true).write(payload.data(),
                             static_cast<std::streamsize>(payload.size()));

  std::ofstream hdr = open_out(path + ".hdr", false);
  hdr << "height " << cube.height() << "\n"
      << "width " << cube.width() << "\n"
      << "bands " << cube.bands() << "\n"
      << "dtype f32le\n"
      << "layout bip\n";
}

Cube read_cube(const std::string &path) {
  const std::string header_text = read_all(path + ".hdr", false);
  std::istringstream lines(header_text);
  std::map<std::string, std::string> fields;
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    std::istringstream split(line);
    std::string key, value, extra;
    if (!(split >> key >> value) || (split >> extra)) {
      throw DataError("malformed header line \"" + line + "\" in " + path +
                      ".hdr");
    }
    if (!fields.emplace(key, value).second) {
      throw DataError("duplicate header key \"" + key + "\" in " + path +
                      ".hdr");
    }
  }
  for (const char *key : {"height", "width", "bands", "dtype", "layout"}) {
    if (!fields.count(key)) {
      throw DataError(std::string("header missing key \"") + key + "\" in " +
                      path + ".hdr");
    }
  }
  for (const auto &[key, value] : fields) {
    if (key != "height" && key != "width" && key != "bands" &&
        key != "dtype" && key != "layout") {
      throw DataError("unknown header key \"" + key + "\" in " + path +
                      ".hdr");
    }
  }
  if (fields["dtype"] != "f32le") {
    throw DataError("unsupported dtype \"" + fields["dtype"] + "\"");
  }
  if (fields["layout"] != "bip") {
    throw DataError("unsupported layout \"" + fields["layout"] + "\"");
  }
  const CubeShape shape{parse_positive(fields["height"], "height"),
                        parse_positive(fields["width"], "width"),
                        parse_positive(fields["bands"], "bands")};

  const std::string payload = read_all(path, true);
  const std::size_t expected = shape.count() * 4;
  if (payload.size() != expected) {
    throw DataError("payload of " + path + " has " +
                    std::to_string(payload.size()) + " bytes, expected " +
                    std::to_string(expected));
  }
  std::vector<double> values(shape.count());
  const auto *bytes = reinterpret_cast<const unsigned char *>(payload.data());
  for (std::size_t e = 0; e < values.size(); ++e) {
    const float f = std::bit_cast<float>(get_u32_le(bytes + 4 * e));
    if (!std::isfinite(f)) {
      throw DataError("non-finite payload value at index " +
                      std::to_string(e) + " in " + path);
    }
    values[e] = static_cast<double>(f);
  }
  return Cube::from_values(shape, std::move(values));
}

void write_mask_pgm(const GroundTruthMask &mask, const std::string &path) {
  if (mask.labels.size() != mask.height * mask.width) {
    throw ShapeError("mask storage inconsistent with its dimensions");
  }
  std::ofstream out = open_out(path, true);
  out << "P5\n" << mask.width << " " << mask.height << "\n255\n";
  std::string bytes(mask.labels.size(), '\0');
  for (std::size_t p = 0; p < mask.labels.size(); ++p) {
    bytes[p] = mask.labels[p] ? static_cast<char>(255) : '\0';
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

GroundTruthMask read_mask_pgm(const std::string &path) {
  std::ifstream in = open_in(path, true);
  if (pgm_token(in) != "P5") {
    throw DataError(path + " is not a binary PGM (P5) file");
  }
  const std::size_t width = parse_positive(pgm_token(in), "PGM width");
  const std::size_t height = parse_positive(pgm_token(in), "PGM height");
  const std::size_t maxval = parse_positive(pgm_token(in), "PGM maxval");
  if (maxval > 255) {
    throw DataError("mask PGM must have maxval <= 255, got " +
                    std::to_string(maxval));
  }
  std::string bytes(height * width, '\0');
  in.read(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (static_cast<std::size_t>(in.gcount()) != bytes.size()) {
    throw DataError("PGM payload of " + path + " is truncated");
  }
  GroundTruthMask mask{height, width,
                       std::vector<std::uint8_t>(height * width, 0)};
  for (std::size_t p = 0; p < mask.labels.size(); ++p) {
    const auto v = static_cast<unsigned char>(bytes[p]);
    mask.labels[p] = 2 * static_cast<std::size_t>(v) > maxval ? 1 : 0;
  }
  return mask;
}

void write_detection_pgm(const DetectionMap &map, const std::string &path) {
  std::ofstream out = open_out(path, true);
  out << "P5\n" << map.width << " " << map.height << "\n65535\n";
  std::string bytes;
  bytes.reserve(map.scores.size() * 2);
  for (double v : map.scores) {
    if (!(v >= -1e-12) || !(v <= 1.0 + 1e-12)) {
      throw DataError("detection PGM expects values in [0, 1], got " +
                      format_double(v));
    }
    const auto q = static_cast<long>(
        std::llround(std::min(std::max(v, 0.0), 1.0) * 65535.0));
    bytes.push_back(static_cast<char>((q >> 8) & 0xff));
    bytes.push_back(static_cast<char>(q & 0xff));
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

void write_detection_csv(const DetectionMap &map, const std::string &path) {
  std::ofstream out = open_out(path, false);
  for (std::size_t i = 0; i < map.height; ++i) {
    for (std::size_t j = 0; j < map.width; ++j) {
      if (j) out << ",";
      out << format_double(map.at(i, j));
    }
    out << "\n";
  }
}

DetectionMap read_detection_csv(const std::string &path) {
  std::ifstream in = open_in(path, false);
  DetectionMap map;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream cells(line);
    std::string cell;
    std::size_t cols = 0;
    while (std::getline(cells, cell, ',')) {
      char *end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0' || !std::isfinite(v)) {
        throw DataError("invalid CSV cell \"" + cell + "\" in " + path);
      }
      map.scores.push_back(v);
      ++cols;
    }
    if (map.height == 0) {
      map.width = cols;
    } else if (cols != map.width) {
      throw DataError("ragged CSV row in " + path);
    }
    ++map.height;
  }
  if (map.height == 0) throw DataError(path + " contains no data");
  return map;
}

void write_roc_csv(const std::vector<RocPoint> &points,
                   const std::string &path) {
  std::ofstream out = open_out(path, false);
  out << "pfa,pd\n";
  for (const auto &point : points) {
    out << format_double(point.pfa) << "," << format_double(point.pd) << "\n";
  }
}

void write_history_csv(const std::vector<HistoryRecord> &history,
                       const std::string &path) {
  std::ofstream out = open_out(path, false);
  out << "iteration,relative_change,data_residual,s_l1,stripe_flatness_residual,"
         "objective\n";
  for (const auto &rec : history) {
    out << rec.iteration << "," << format_double(rec.relative_change) << ","
        << format_double(rec.data_residual) << "," << format_double(rec.s_l1)
        << "," << format_double(rec.stripe_flatness_residual) << ","
        << format_double(rec.objective) << "\n";
  }
}

void write_noise_meta(const NoiseMeta &meta, const std::string &path) {
  nlohmann::json j{{"height", meta.shape.height},
                   {"width", meta.shape.width},
                   {"bands", meta.shape.bands},
                   {"sigma", meta.sigma},
                   {"sp_rate", meta.sp_rate},
                   {"stripe_rate", meta.stripe_rate},
                   {"case", meta.case_id},
                   {"seed", meta.seed}};
  open_out(path, false) << j.dump(2) << "\n";
}

NoiseMeta read_noise_meta(const std::string &path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_all(path, false));
    NoiseMeta meta;
    meta.shape = CubeShape{j.at("height").get<std::size_t>(),
                           j.at("width").get<std::size_t>(),
                           j.at("bands").get<std::size_t>()};
    meta.sigma = j.at("sigma").get<double>();
    meta.sp_rate = j.at("sp_rate").get<double>();
    meta.stripe_rate = j.at("stripe_rate").get<double>();
    meta.case_id = j.at("case").get<int>();
    meta.seed = j.at("seed").get<std::uint64_t>();
    return meta;
  } catch (const nlohmann::json::exception &e) {
    throw DataError("invalid noise meta " + path + ": " + e.what());
  }
}

}  // namespace hsad
