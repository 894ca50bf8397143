// Copyright 2026 the drddl authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "drddl/hsidata.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

#include "drddl/rng.hpp"

namespace drddl {

Vec HsiCube::pixel_spectrum(int r, int c) const {
  Vec v(bands);
  for (int b = 0; b < bands; ++b) v(b) = at(r, c, b);
  return v;
}

int LabelRaster::num_classes() const {
  int c = 0;
  for (int l : labels) c = std::max(c, l);
  return c;
}

std::int64_t LabelRaster::class_count(int cls) const {
  std::int64_t n = 0;
  for (int l : labels) {
    if (l == cls) ++n;
  }
  return n;
}

namespace {

std::string trim(std::string s) {
  const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(s.front())) s.erase(s.begin());
  while (!s.empty() && is_space(s.back())) s.pop_back();
  return s;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

long parse_long(const std::string& value, const std::string& key) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(value, &pos);
  } catch (const std::exception&) {
    throw FormatError("envi header: bad integer for key '" + key + "'");
  }
  if (pos != value.size()) {
    throw FormatError("envi header: bad integer for key '" + key + "'");
  }
  return v;
}

std::vector<char> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open file: " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(is)),
                          std::istreambuf_iterator<char>());
  return bytes;
}

}  // namespace

HsiCube read_envi(const std::filesystem::path& header_path,
                  const std::filesystem::path& data_path) {
  std::ifstream hdr(header_path);
  if (!hdr) throw IoError("cannot open header: " + header_path.string());

  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(hdr, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;  // banner / free-form lines
    kv[lower(trim(line.substr(0, eq)))] = trim(line.substr(eq + 1));
  }

  const auto require_key = [&](const char* key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) {
      throw FormatError(std::string("envi header: missing key '") + key +
                        "'");
    }
    return it->second;
  };

  HsiCube cube;
  cube.cols = static_cast<int>(parse_long(require_key("samples"), "samples"));
  cube.rows = static_cast<int>(parse_long(require_key("lines"), "lines"));
  cube.bands = static_cast<int>(parse_long(require_key("bands"), "bands"));
  if (cube.cols < 1 || cube.rows < 1 || cube.bands < 1) {
    throw FormatError("envi header: non-positive dimensions");
  }

  if (lower(require_key("interleave")) != "bsq") {
    throw FormatError("envi header: unsupported value for key 'interleave'");
  }
  const long dtype = parse_long(require_key("data type"), "data type");
  if (dtype != 4 && dtype != 5) {
    throw FormatError("envi header: unsupported value for key 'data type'");
  }
  if (parse_long(require_key("byte order"), "byte order") != 0) {
    throw FormatError("envi header: unsupported value for key 'byte order'");
  }

  const std::vector<char> bytes = read_file_bytes(data_path);
  const std::size_t count = static_cast<std::size_t>(cube.rows) * cube.cols *
                            cube.bands;
  const std::size_t elem = dtype == 4 ? 4 : 8;
  if (bytes.size() != count * elem) {
    throw FormatError("envi data: file size " + std::to_string(bytes.size()) +
                      " does not match header (" +
                      std::to_string(count * elem) + " bytes expected)");
  }

  cube.values.resize(count);
  if (dtype == 4) {
    for (std::size_t i = 0; i < count; ++i) {
      std::uint32_t u = 0;
      std::memcpy(&u, bytes.data() + i * 4, 4);
      cube.values[i] = static_cast<double>(std::bit_cast<float>(u));
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      std::uint64_t u = 0;
      std::memcpy(&u, bytes.data() + i * 8, 8);
      cube.values[i] = std::bit_cast<double>(u);
    }
  }
  for (double v : cube.values) {
    if (!std::isfinite(v)) {
      throw FormatError("envi data: non-finite sample");
    }
  }
  return cube;
}

namespace {

LabelRaster read_labels_pgm(const std::vector<char>& bytes,
                            const std::filesystem::path& path) {
  // P5 header: magic, width, height, maxval as whitespace-separated tokens
  // with '#' comments, then a single whitespace byte before the samples.
  std::size_t pos = 2;
  const auto next_token = [&]() -> long {
    while (pos < bytes.size()) {
      const char c = bytes[pos];
      if (c == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else {
        break;
      }
    }
    std::size_t start = pos;
    while (pos < bytes.size() &&
           !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
      ++pos;
    }
    if (start == pos) throw FormatError("pgm: truncated header");
    return parse_long(std::string(bytes.begin() + start, bytes.begin() + pos),
                      "pgm header");
  };

  const long width = next_token();
  const long height = next_token();
  const long maxval = next_token();
  if (width < 1 || height < 1) throw FormatError("pgm: bad dimensions");
  if (maxval < 1 || maxval > 65535) {
    throw FormatError("pgm: maxval out of range");
  }
  ++pos;  // the single whitespace after maxval

  LabelRaster raster;
  raster.rows = static_cast<int>(height);
  raster.cols = static_cast<int>(width);
  const std::size_t count = static_cast<std::size_t>(width) * height;
  const std::size_t elem = maxval > 255 ? 2 : 1;
  if (bytes.size() - pos != count * elem) {
    throw FormatError("pgm: sample data size mismatch in " + path.string());
  }
  raster.labels.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (elem == 2) {
      const auto hi = static_cast<unsigned char>(bytes[pos + 2 * i]);
      const auto lo = static_cast<unsigned char>(bytes[pos + 2 * i + 1]);
      raster.labels[i] = (hi << 8) | lo;  // big-endian sample order
    } else {
      raster.labels[i] = static_cast<unsigned char>(bytes[pos + i]);
    }
  }
  return raster;
}

LabelRaster read_labels_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open labels: " + path.string());
  LabelRaster raster;
  std::string line;
  while (std::getline(is, line)) {
    if (trim(line).empty()) continue;
    std::vector<int> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      cell = trim(cell);
      const long v = parse_long(cell, "label cell");
      if (v < 0) throw FormatError("labels: negative class id");
      row.push_back(static_cast<int>(v));
    }
    if (raster.cols == 0) {
      raster.cols = static_cast<int>(row.size());
    } else if (static_cast<int>(row.size()) != raster.cols) {
      throw FormatError("labels: ragged CSV row in " + path.string());
    }
    raster.labels.insert(raster.labels.end(), row.begin(), row.end());
    ++raster.rows;
  }
  if (raster.rows == 0) throw FormatError("labels: empty file");
  return raster;
}

}  // namespace

LabelRaster read_labels(const std::filesystem::path& path) {
  const std::vector<char> bytes = read_file_bytes(path);
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') {
    return read_labels_pgm(bytes, path);
  }
  return read_labels_csv(path);
}

Split make_split(const LabelRaster& labels,
                 const std::vector<int>& per_class_counts,
                 std::uint64_t seed) {
  const int num_classes = labels.num_classes();
  if (static_cast<int>(per_class_counts.size()) != num_classes) {
    throw DegenerateInput("make_split: count vector length (" +
                          std::to_string(per_class_counts.size()) +
                          ") does not match " + std::to_string(num_classes) +
                          " classes");
  }

  Split split;
  split.seed = seed;
  for (int cls = 1; cls <= num_classes; ++cls) {
    std::vector<PixelCoord> coords;
    for (int r = 0; r < labels.rows; ++r) {
      for (int c = 0; c < labels.cols; ++c) {
        if (labels.at(r, c) == cls) coords.push_back({r, c});
      }
    }
    const int want = per_class_counts[static_cast<std::size_t>(cls - 1)];
    if (want < 0 || want > static_cast<int>(coords.size())) {
      throw DegenerateInput("make_split: requested " + std::to_string(want) +
                            " train samples for class " +
                            std::to_string(cls) + " but only " +
                            std::to_string(coords.size()) + " exist");
    }
    Rng rng(seed * 6364136223846793005ULL +
            static_cast<std::uint64_t>(cls) * 1442695040888963407ULL);
    rng.shuffle(coords);
    split.train_idx.insert(split.train_idx.end(), coords.begin(),
                           coords.begin() + want);
    split.test_idx.insert(split.test_idx.end(), coords.begin() + want,
                          coords.end());
  }
  if (split.test_idx.empty()) {
    std::cerr << "make_split: test side is empty (all labeled pixels were "
                 "assigned to train)\n";
  }
  return split;
}

std::vector<int> fraction_counts(const LabelRaster& labels, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DegenerateInput("fraction_counts: p outside [0, 1]");
  }
  const int num_classes = labels.num_classes();
  std::vector<int> counts(static_cast<std::size_t>(num_classes), 0);
  for (int cls = 1; cls <= num_classes; ++cls) {
    counts[static_cast<std::size_t>(cls - 1)] = static_cast<int>(
        std::llround(p * static_cast<double>(labels.class_count(cls))));
  }
  return counts;
}

const std::vector<int>& indian_pines_train_counts() {
  static const std::vector<int> counts = {15, 142, 83, 23, 48, 73, 20, 47,
                                          15, 97, 160, 59, 20, 126, 38, 50};
  return counts;
}

const std::vector<int>& pavia_train_counts() {
  static const std::vector<int> counts = {132, 372, 41, 61, 26, 100, 26, 73,
                                          18};
  return counts;
}

void write_split_csv(const Split& split, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("cannot open split file for writing: " +
                         path.string());
  os << "row,col,role\n";
  for (const PixelCoord& p : split.train_idx) {
    os << p.row << ',' << p.col << ",train\n";
  }
  for (const PixelCoord& p : split.test_idx) {
    os << p.row << ',' << p.col << ",test\n";
  }
  if (!os) throw IoError("write failed: " + path.string());
}

Split read_split_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open split file: " + path.string());
  Split split;
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (first && line == "row,col,role") {
      first = false;
      continue;
    }
    first = false;
    std::stringstream ss(line);
    std::string row;
    std::string col;
    std::string role;
    if (!std::getline(ss, row, ',') || !std::getline(ss, col, ',') ||
        !std::getline(ss, role)) {
      throw FormatError("split file: bad line '" + line + "'");
    }
    PixelCoord p{static_cast<int>(parse_long(trim(row), "split row")),
                 static_cast<int>(parse_long(trim(col), "split col"))};
    role = trim(role);
    if (role == "train") {
      split.train_idx.push_back(p);
    } else if (role == "test") {
      split.test_idx.push_back(p);
    } else {
      throw FormatError("split file: unknown role '" + role + "'");
    }
  }
  return split;
}

Mat extract_spectral_pixels(const HsiCube& cube,
                            const std::vector<PixelCoord>& pixels) {
  Mat x(cube.bands, static_cast<Eigen::Index>(pixels.size()));
  for (std::size_t j = 0; j < pixels.size(); ++j) {
    const PixelCoord& p = pixels[j];
    if (p.row < 0 || p.row >= cube.rows || p.col < 0 || p.col >= cube.cols) {
      throw DegenerateInput("extract_spectral_pixels: pixel out of bounds");
    }
    x.col(static_cast<Eigen::Index>(j)) = cube.pixel_spectrum(p.row, p.col);
  }
  return x;
}

PcaModel pca_fit(const Mat& x, int k) {
  require_nonempty(x, "pca_fit");
  require_finite(x, "pca_fit");
  if (k < 1 || k > std::min(x.rows(), x.cols())) {
    throw DegenerateInput("pca_fit: k outside [1, min(d, n)]");
  }

  PcaModel pca;
  pca.mean = x.rowwise().mean();
  const Mat centered = x.colwise() - pca.mean;
  const double denom = x.cols() > 1 ? static_cast<double>(x.cols() - 1) : 1.0;
  const Mat cov = centered * centered.transpose() / denom;

  Eigen::SelfAdjointEigenSolver<Mat> eig(cov);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("pca_fit: eigensolver failed");
  }

  // Eigenvalues come back ascending; take the top k in descending order.
  pca.projection.resize(k, x.rows());
  for (int i = 0; i < k; ++i) {
    Vec v = eig.eigenvectors().col(x.rows() - 1 - i);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) v = -v;
    pca.projection.row(i) = v.transpose();
  }
  return pca;
}

Mat pca_project(const PcaModel& pca, const Mat& x) {
  if (x.rows() != pca.mean.size()) {
    throw DegenerateInput("pca_project: dimension mismatch");
  }
  return pca.projection * (x.colwise() - pca.mean);
}

namespace {

// Reflect an index into [0, n) without repeating the edge sample; falls back
// to clamping for degenerate single-pixel extents.
int mirror_index(int i, int n) {
  if (n == 1) return 0;
  while (i < 0 || i >= n) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * n - 2 - i;
  }
  return i;
}

}  // namespace

Mat extract_patch_features(const HsiCube& cube,
                           const std::vector<PixelCoord>& pixels, int patch_w,
                           const PcaModel& pca, ExecMode mode) {
  if (patch_w < 1 || patch_w % 2 == 0) {
    throw DegenerateInput("extract_patch_features: patch width must be odd");
  }
  if (pca.mean.size() != cube.bands) {
    throw DegenerateInput(
        "extract_patch_features: PCA model does not match cube bands");
  }
  const int k = static_cast<int>(pca.projection.rows());
  const int half = patch_w / 2;
  const Eigen::Index feat_dim =
      static_cast<Eigen::Index>(k) * patch_w * patch_w + k;

  // Project the whole cube once: a k x (rows*cols) matrix indexed
  // column-major by (row * cols + col).
  const std::size_t n_pixels =
      static_cast<std::size_t>(cube.rows) * cube.cols;
  Mat projected(k, static_cast<Eigen::Index>(n_pixels));
  parallel_for(static_cast<std::int64_t>(n_pixels), mode,
               [&](std::int64_t idx) {
                 const int r = static_cast<int>(idx) / cube.cols;
                 const int c = static_cast<int>(idx) % cube.cols;
                 projected.col(idx) =
                     pca.projection * (cube.pixel_spectrum(r, c) - pca.mean);
               });

  Mat features(feat_dim, static_cast<Eigen::Index>(pixels.size()));
  parallel_for(static_cast<std::int64_t>(pixels.size()), mode,
               [&](std::int64_t j) {
                 const PixelCoord& p = pixels[static_cast<std::size_t>(j)];
                 if (p.row < 0 || p.row >= cube.rows || p.col < 0 ||
                     p.col >= cube.cols) {
                   throw DegenerateInput(
                       "extract_patch_features: pixel out of bounds");
                 }
                 Eigen::Index at = 0;
                 for (int b = 0; b < k; ++b) {
                   for (int dr = -half; dr <= half; ++dr) {
                     const int rr = mirror_index(p.row + dr, cube.rows);
                     for (int dc = -half; dc <= half; ++dc) {
                       const int cc = mirror_index(p.col + dc, cube.cols);
                       features(at++, j) = projected(
                           b, static_cast<Eigen::Index>(rr) * cube.cols + cc);
                     }
                   }
                 }
                 features.block(at, j, k, 1) = projected.col(
                     static_cast<Eigen::Index>(p.row) * cube.cols + p.col);
               });
  return features;
}

MixedNoise synth_mixed_noise(const Mat& d_star, const Mat& z_star,
                             double sigma, double spike_frac, double spike_mag,
                             std::uint64_t seed) {
  require_nonempty(d_star, "synth_mixed_noise");
  require_nonempty(z_star, "synth_mixed_noise");
  if (d_star.cols() != z_star.rows()) {
    throw DegenerateInput("synth_mixed_noise: factor shapes do not chain");
  }
  if (!(spike_frac >= 0.0 && spike_frac <= 1.0)) {
    throw DegenerateInput("synth_mixed_noise: spike_frac outside [0, 1]");
  }
  if (sigma < 0.0) throw DegenerateInput("synth_mixed_noise: sigma < 0");

  MixedNoise out;
  out.clean = d_star * z_star;
  out.noisy = out.clean;
  out.spikes = SpikeMask::Zero(out.clean.rows(), out.clean.cols());

  Rng rng(seed);
  const std::size_t total = static_cast<std::size_t>(out.clean.size());
  const auto n_spikes = static_cast<std::size_t>(
      std::llround(spike_frac * static_cast<double>(total)));

  std::vector<std::size_t> order(total);
  for (std::size_t i = 0; i < total; ++i) order[i] = i;
  rng.shuffle(order);
  for (std::size_t i = 0; i < n_spikes; ++i) {
    const auto flat = static_cast<Eigen::Index>(order[i]);
    const Eigen::Index r = flat % out.clean.rows();
    const Eigen::Index c = flat / out.clean.rows();
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    out.noisy(r, c) += sign * spike_mag;
    out.spikes(r, c) = 1;
  }
  if (sigma > 0.0) {
    for (Eigen::Index c = 0; c < out.noisy.cols(); ++c) {
      for (Eigen::Index r = 0; r < out.noisy.rows(); ++r) {
        out.noisy(r, c) += sigma * rng.gaussian();
      }
    }
  }
  return out;
}

}  // namespace drddl
