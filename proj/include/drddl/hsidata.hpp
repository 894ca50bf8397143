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

#ifndef DRDDL_HSIDATA_HPP
#define DRDDL_HSIDATA_HPP

#include <cstdint>
#include <filesystem>
#include <vector>

#include "drddl/parallel.hpp"
#include "drddl/types.hpp"

namespace drddl {

// Hyperspectral cube, band-sequential storage:
// values[(band * rows + row) * cols + col].
struct HsiCube {
  int rows = 0;
  int cols = 0;
  int bands = 0;
  std::vector<double> values;

  double at(int r, int c, int b) const {
    return values[(static_cast<std::size_t>(b) * rows + r) * cols + c];
  }
  Vec pixel_spectrum(int r, int c) const;
};

// Integer label raster; 0 = unlabeled background, 1..C = classes.
struct LabelRaster {
  int rows = 0;
  int cols = 0;
  std::vector<int> labels;

  int at(int r, int c) const {
    return labels[static_cast<std::size_t>(r) * cols + c];
  }
  int num_classes() const;
  std::int64_t class_count(int cls) const;
};

struct PixelCoord {
  int row = 0;
  int col = 0;
  bool operator==(const PixelCoord&) const = default;
};

struct Split {
  std::vector<PixelCoord> train_idx;
  std::vector<PixelCoord> test_idx;
  std::uint64_t seed = 0;
};

// ENVI-style raster: plain-text `key = value` header plus a raw binary data
// file. Supported subset: interleave=bsq, data type 4 (float32, widened) or
// 5 (float64), byte order 0.
HsiCube read_envi(const std::filesystem::path& header_path,
                  const std::filesystem::path& data_path);

// CSV integer grid, or binary PGM (P5, maxval <= 65535, big-endian sample
// order). The format is sniffed from the file content.
LabelRaster read_labels(const std::filesystem::path& path);

// Uniform seeded per-class sampling: exactly per_class_counts[c] pixels of
// class c+1 go to train, the rest to test.
Split make_split(const LabelRaster& labels,
                 const std::vector<int>& per_class_counts, std::uint64_t seed);

// round(p * total) per class.
std::vector<int> fraction_counts(const LabelRaster& labels, double p);

// Literal per-class training counts of the reference evaluation protocols.
const std::vector<int>& indian_pines_train_counts();
const std::vector<int>& pavia_train_counts();

// `row,col,role` CSV with role in {train,test}.
void write_split_csv(const Split& split, const std::filesystem::path& path);
Split read_split_csv(const std::filesystem::path& path);

// One column per selected pixel, in the given order: the raw band vector.
Mat extract_spectral_pixels(const HsiCube& cube,
                            const std::vector<PixelCoord>& pixels);

struct PcaModel {
  Mat projection;  // k x d, rows orthonormal, deterministic sign
  Vec mean;        // d
};

// Top-k principal directions of the mean-centered sample matrix (columns are
// samples). Sign convention: the largest-magnitude entry of each component
// is positive.
PcaModel pca_fit(const Mat& x, int k);
Mat pca_project(const PcaModel& pca, const Mat& x);

// Spatial-spectral features: for each pixel, the patch_w x patch_w
// neighborhood of the cube's PCA bands (flattened band by band, each patch
// row-major) concatenated with the pixel's own PCA projection. Borders are
// mirror-padded (reflection without repeating the edge pixel).
Mat extract_patch_features(const HsiCube& cube,
                           const std::vector<PixelCoord>& pixels, int patch_w,
                           const PcaModel& pca,
                           ExecMode mode = ExecMode::kParallel);

using SpikeMask = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

struct MixedNoise {
  Mat clean;        // D* Z*
  Mat noisy;        // clean + dense Gaussian + sparse spikes
  SpikeMask spikes; // 1 where a spike was added
};

// Mixture of dense Gaussian noise (sigma) and sparse impulsive spikes
// (round(spike_frac * entries) entries at +-spike_mag, chosen uniformly).
MixedNoise synth_mixed_noise(const Mat& d_star, const Mat& z_star,
                             double sigma, double spike_frac, double spike_mag,
                             std::uint64_t seed);

}  // namespace drddl

#endif  // DRDDL_HSIDATA_HPP
