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

#include "drddl/network.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

namespace drddl {

Vec FeatureScaler::apply(const Vec& x) const {
  if (empty()) return x;
  if (x.size() != offset.size()) {
    throw DegenerateInput("feature scaler: dimension mismatch");
  }
  return ((x - offset).array() * scale.array()).matrix();
}

Mat FeatureScaler::apply(const Mat& x) const {
  if (empty()) return x;
  if (x.rows() != offset.size()) {
    throw DegenerateInput("feature scaler: dimension mismatch");
  }
  return ((x.colwise() - offset).array().colwise() * scale.array()).matrix();
}

FeatureScaler FeatureScaler::fit(const Mat& x) {
  require_nonempty(x, "feature scaler fit");
  require_finite(x, "feature scaler fit");
  FeatureScaler s;
  s.offset = x.rowwise().minCoeff();
  const Vec range = x.rowwise().maxCoeff() - s.offset;
  s.scale = range.unaryExpr(
      [](double r) { return r > 0.0 ? 1.0 / r : 0.0; });
  return s;
}

void DrddlModel::validate() const {
  if (layers.empty()) throw FormatError("model: no layers");
  if (num_classes < 1) throw FormatError("model: num_classes < 1");
  if (input_dim < 1) throw FormatError("model: input_dim < 1");
  if (layers.front().in_dim() != input_dim) {
    throw FormatError("model: layer 1 input dimension does not match data");
  }
  for (std::size_t i = 1; i < layers.size(); ++i) {
    if (layers[i].in_dim() != layers[i - 1].out_dim()) {
      throw FormatError("model: dimension chain broken at layer " +
                        std::to_string(i + 1));
    }
  }
  if (W.rows() != num_classes || W.cols() != layers.back().out_dim()) {
    throw FormatError("model: classifier shape mismatch");
  }
  if (layers.front().activation.kind != ActivationKind::kIdentity) {
    throw FormatError("model: first layer must carry identity activation");
  }
  if (!scaler.empty() && scaler.offset.size() != input_dim) {
    throw FormatError("model: scaler dimension mismatch");
  }
}

namespace {

// Labels must be 1-based and contiguous; returns C.
int check_labels(const std::vector<int>& labels, Eigen::Index n) {
  if (static_cast<Eigen::Index>(labels.size()) != n) {
    throw DegenerateInput("train: label count does not match sample count");
  }
  int c = 0;
  for (int l : labels) {
    if (l < 1) throw DegenerateInput("train: labels must be >= 1");
    c = std::max(c, l);
  }
  std::vector<bool> seen(static_cast<std::size_t>(c), false);
  for (int l : labels) seen[static_cast<std::size_t>(l - 1)] = true;
  for (int k = 0; k < c; ++k) {
    if (!seen[static_cast<std::size_t>(k)]) {
      throw DegenerateInput("train: class " + std::to_string(k + 1) +
                            " has no samples");
    }
  }
  return c;
}

Mat one_hot(const std::vector<int>& labels, int num_classes) {
  Mat t = Mat::Zero(num_classes, static_cast<Eigen::Index>(labels.size()));
  for (std::size_t j = 0; j < labels.size(); ++j) {
    t(labels[j] - 1, static_cast<Eigen::Index>(j)) = 1.0;
  }
  return t;
}

}  // namespace

DrddlModel train(const Mat& x, const std::vector<int>& labels,
                 const TrainSpec& spec) {
  require_nonempty(x, "train");
  require_finite(x, "train");
  if (x.cols() < 2) throw DegenerateInput("train: need at least 2 samples");
  if (spec.arch.empty()) throw DegenerateInput("train: empty architecture");
  const int num_classes = check_labels(labels, x.cols());

  int prev = static_cast<int>(x.rows());
  for (std::size_t i = 0; i < spec.arch.size(); ++i) {
    const int w = spec.arch[i];
    if (w < 1) throw DegenerateInput("train: layer width < 1");
    if (w > prev) {
      throw DegenerateInput("train: layer " + std::to_string(i + 1) +
                            " width exceeds its input dimension");
    }
    prev = w;
  }

  DrddlModel model;
  model.lambda = spec.lambda;
  model.mu_cls = spec.mu_cls;
  model.activation = Activation{spec.activation, 1e-6};
  model.num_classes = num_classes;
  model.input_dim = static_cast<int>(x.rows());
  model.scaler = FeatureScaler::fit(x);

  const Mat xs = model.scaler.apply(x);
  const Mat t = one_hot(labels, num_classes);
  const std::size_t depth = spec.arch.size();

  FinalTrainConfig final_cfg;
  final_cfg.lambda = spec.lambda;
  final_cfg.mu_cls = spec.mu_cls;
  final_cfg.iters = spec.final_iters;
  final_cfg.ista_cfg = spec.ista_cfg;

  if (depth == 1) {
    // Single-level fallback: Euclidean fidelity with the sparse +
    // discriminative coding, no greedy cascade.
    auto fin = train_final_layer(xs, spec.arch[0], t, final_cfg, spec.seed);
    model.layers.push_back(std::move(fin.layer));
    model.W = std::move(fin.W);
    model.validate();
    return model;
  }

  auto robust = train_robust_layer(xs, spec.arch[0], spec.robust_cfg,
                                   spec.seed);
  model.layers.push_back(std::move(robust.layer));
  Mat coeffs = std::move(robust.Z);

  for (std::size_t i = 1; i + 1 < depth; ++i) {
    const Mat y = apply_inverse(model.activation, coeffs);
    auto dense = train_dense_layer(y, spec.arch[i],
                                   spec.dense_iters, spec.seed + i);
    dense.layer.activation = model.activation;
    model.layers.push_back(std::move(dense.layer));
    coeffs = std::move(dense.Z);
  }

  const Mat y_final = apply_inverse(model.activation, coeffs);
  auto fin = train_final_layer(y_final, spec.arch.back(), t, final_cfg,
                               spec.seed + depth - 1);
  fin.layer.activation = model.activation;
  model.layers.push_back(std::move(fin.layer));
  model.W = std::move(fin.W);
  model.validate();
  return model;
}

Encoder::Encoder(const DrddlModel& model, EncodeConfig cfg)
    : model_(model), cfg_(cfg) {
  model.validate();
  const std::size_t depth = model.layers.size();
  if (depth >= 2) {
    robust_pinv_ = pseudo_inverse(model.layers.front().D);
    for (std::size_t i = 1; i + 1 < depth; ++i) {
      dense_pinvs_.push_back(pseudo_inverse(model.layers[i].D));
    }
  }
  final_step_bound_ = 2.0 * spectral_norm_sq(model.layers.back().D);
}

Vec Encoder::encode(const Vec& x) const {
  if (x.size() != model_.input_dim) {
    throw DegenerateInput("encode: input length mismatch");
  }
  Vec z = model_.scaler.apply(x);
  const std::size_t depth = model_.layers.size();

  IstaConfig ista_cfg;
  ista_cfg.lambda = model_.lambda;
  ista_cfg.max_iters = cfg_.ista_max_iters;
  ista_cfg.tol = cfg_.ista_tol;

  if (depth == 1) {
    return ista(model_.layers.back().D, z, ista_cfg, nullptr,
                final_step_bound_)
        .first.col(0);
  }

  if ((z.array() == 0.0).all()) {
    z = Vec::Zero(model_.layers.front().out_dim());
  } else {
    z = irls_l1(model_.layers.front().D, z, cfg_.irls_max_iters,
                cfg_.irls_eps, &robust_pinv_);
  }
  for (std::size_t i = 1; i + 1 < depth; ++i) {
    const Mat y = apply_inverse(model_.activation, Mat(z));
    z = dense_pinvs_[i - 1] * y.col(0);
  }
  const Mat y = apply_inverse(model_.activation, Mat(z));
  return ista(model_.layers.back().D, y.col(0), ista_cfg, nullptr,
              final_step_bound_)
      .first.col(0);
}

Mat Encoder::encode_batch(const Mat& x, ExecMode mode) const {
  if (x.rows() != model_.input_dim) {
    throw DegenerateInput("encode_batch: input dimension mismatch");
  }
  Mat z(model_.code_dim(), x.cols());
  parallel_for(x.cols(), mode,
               [&](std::int64_t j) { z.col(j) = encode(x.col(j)); });
  return z;
}

Vec encode(const DrddlModel& model, const Vec& x, EncodeConfig cfg) {
  return Encoder(model, cfg).encode(x);
}

Mat encode_batch(const DrddlModel& model, const Mat& x, ExecMode mode,
                 EncodeConfig cfg) {
  return Encoder(model, cfg).encode_batch(x, mode);
}

std::pair<int, Vec> classify(const DrddlModel& model, const Vec& z) {
  if (z.size() != model.code_dim()) {
    throw DegenerateInput("classify: coefficient length mismatch");
  }
  Vec scores = model.W * z;
  int best = 0;
  for (int i = 1; i < scores.size(); ++i) {
    if (scores(i) > scores(best)) best = i;
  }
  return {best + 1, std::move(scores)};
}

int predict(const DrddlModel& model, const Vec& x, EncodeConfig cfg) {
  return classify(model, encode(model, x, cfg)).first;
}

std::vector<int> predict_batch(const DrddlModel& model, const Mat& x,
                               ExecMode mode, EncodeConfig cfg) {
  const Mat z = encode_batch(model, x, mode, cfg);
  std::vector<int> out(static_cast<std::size_t>(z.cols()));
  for (Eigen::Index j = 0; j < z.cols(); ++j) {
    out[static_cast<std::size_t>(j)] = classify(model, z.col(j)).first;
  }
  return out;
}

// --- serialization ---------------------------------------------------------

namespace {

constexpr char kMagic[6] = {'D', 'R', 'D', 'D', 'L', '1'};

void put_u32(std::ostream& os, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b, 4);
}

void put_u8(std::ostream& os, std::uint8_t v) {
  os.put(static_cast<char>(v));
}

void put_f64(std::ostream& os, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  char b[8];
  for (int i = 0; i < 8; ++i) {
    b[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  }
  os.write(b, 8);
}

void put_mat(std::ostream& os, const Mat& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      put_f64(os, m(r, c));
    }
  }
}

std::uint32_t get_u32(std::istream& is) {
  char b[4];
  if (!is.read(b, 4)) throw FormatError("model file truncated");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[i]))
         << (8 * i);
  }
  return v;
}

std::uint8_t get_u8(std::istream& is) {
  char b;
  if (!is.get(b)) throw FormatError("model file truncated");
  return static_cast<std::uint8_t>(b);
}

double get_f64(std::istream& is) {
  char b[8];
  if (!is.read(b, 8)) throw FormatError("model file truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i]))
         << (8 * i);
  }
  return std::bit_cast<double>(v);
}

Mat get_mat(std::istream& is, std::uint32_t rows, std::uint32_t cols) {
  Mat m(rows, cols);
  for (std::uint32_t c = 0; c < cols; ++c) {
    for (std::uint32_t r = 0; r < rows; ++r) {
      m(r, c) = get_f64(is);
    }
  }
  return m;
}

}  // namespace

void save_model(const DrddlModel& model, const std::filesystem::path& path) {
  model.validate();
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open model file for writing: " +
                         path.string());
  os.write(kMagic, sizeof(kMagic));
  put_u32(os, static_cast<std::uint32_t>(model.layers.size()));
  put_u32(os, static_cast<std::uint32_t>(model.num_classes));
  put_u32(os, static_cast<std::uint32_t>(model.input_dim));
  put_f64(os, model.lambda);
  put_f64(os, model.mu_cls);
  put_u32(os, static_cast<std::uint32_t>(model.activation.kind));
  put_f64(os, model.activation.clamp_eps);
  put_u8(os, model.scaler.empty() ? 0 : 1);
  for (const Layer& l : model.layers) {
    put_u32(os, static_cast<std::uint32_t>(l.D.rows()));
    put_u32(os, static_cast<std::uint32_t>(l.D.cols()));
  }
  put_u32(os, static_cast<std::uint32_t>(model.W.rows()));
  put_u32(os, static_cast<std::uint32_t>(model.W.cols()));
  if (!model.scaler.empty()) {
    put_mat(os, model.scaler.offset);
    put_mat(os, model.scaler.scale);
  }
  for (const Layer& l : model.layers) put_mat(os, l.D);
  put_mat(os, model.W);
  if (!os) throw IoError("write failed: " + path.string());
}

DrddlModel load_model(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open model file: " + path.string());

  char magic[6];
  if (!is.read(magic, 6) || std::memcmp(magic, kMagic, 6) != 0) {
    throw FormatError("not a model file (bad magic): " + path.string());
  }

  DrddlModel model;
  const std::uint32_t depth = get_u32(is);
  model.num_classes = static_cast<int>(get_u32(is));
  model.input_dim = static_cast<int>(get_u32(is));
  model.lambda = get_f64(is);
  model.mu_cls = get_f64(is);
  const std::uint32_t kind = get_u32(is);
  const double clamp_eps = get_f64(is);
  const bool has_scaler = get_u8(is) != 0;

  if (depth < 1 || depth > 1000) throw FormatError("model: bad layer count");
  if (kind > 2) throw FormatError("model: bad activation kind");
  model.activation = Activation{static_cast<ActivationKind>(kind), clamp_eps};

  std::vector<std::pair<std::uint32_t, std::uint32_t>> dims(depth);
  for (auto& d : dims) {
    d.first = get_u32(is);
    d.second = get_u32(is);
    if (d.first < 1 || d.second < 1) {
      throw FormatError("model: empty layer dimensions");
    }
  }
  for (std::uint32_t i = 1; i < depth; ++i) {
    if (dims[i].first != dims[i - 1].second) {
      throw FormatError("model: dimension chain broken at layer " +
                        std::to_string(i + 1));
    }
  }
  const std::uint32_t w_rows = get_u32(is);
  const std::uint32_t w_cols = get_u32(is);
  if (w_cols != dims.back().second) {
    throw FormatError("model: classifier width does not match layer " +
                      std::to_string(depth));
  }

  if (has_scaler) {
    model.scaler.offset = get_mat(is, static_cast<std::uint32_t>(
                                          model.input_dim), 1);
    model.scaler.scale = get_mat(is, static_cast<std::uint32_t>(
                                         model.input_dim), 1);
  }
  for (std::uint32_t i = 0; i < depth; ++i) {
    Layer l;
    l.D = get_mat(is, dims[i].first, dims[i].second);
    l.activation = i == 0 ? Activation{ActivationKind::kIdentity, clamp_eps}
                          : model.activation;
    model.layers.push_back(std::move(l));
  }
  model.W = get_mat(is, w_rows, w_cols);

  is.peek();
  if (!is.eof()) throw FormatError("model file has trailing bytes");

  for (const Layer& l : model.layers) {
    if (!l.D.allFinite()) throw FormatError("model: non-finite dictionary");
  }
  if (!model.W.allFinite()) throw FormatError("model: non-finite classifier");
  model.validate();
  return model;
}

}  // namespace drddl
