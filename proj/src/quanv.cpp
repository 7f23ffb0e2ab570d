// Copyright 2026 The UnitaryForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "unitary_forge/quanv.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "unitary_forge/circuit.hpp"
#include "unitary_forge/errors.hpp"
#include "unitary_forge/runtime.hpp"

namespace uf::quanv {

using circuit::StateBatch;
using linalg::ComplexMatrix;

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

int out_extent(int size, int kernel, int stride) { return (size - kernel) / stride + 1; }

void check_geometry(const ImageBatch& imgs, int kernel, int stride) {
  if (kernel < 1 || stride < 1) throw ContractError("kernel and stride must be >= 1");
  if (kernel > imgs.height() || kernel > imgs.width()) {
    throw ContractError("kernel " + std::to_string(kernel) + " larger than image " +
                        std::to_string(imgs.height()) + "x" + std::to_string(imgs.width()));
  }
}

// Per channel block: the RX-encoded patch states, one column per
// (image, location) pair in row-major order.
std::vector<StateBatch> encode_blocks(const ImageBatch& imgs, const QuanvSpec& spec) {
  const PatchTensor patches = extract_patches(imgs, spec.kernel, spec.stride);
  const int locations = patches.out_height * patches.out_width;
  const int nq = spec.n_qubits();
  std::vector<StateBatch> out;
  out.reserve(static_cast<std::size_t>(spec.n_blocks()));
  for (int blk = 0; blk < spec.n_blocks(); ++blk) {
    circuit::RealMatrix angles = circuit::RealMatrix::Zero(imgs.batch() * locations, nq);
    for (int b = 0; b < imgs.batch(); ++b) {
      for (int oy = 0; oy < patches.out_height; ++oy) {
        for (int ox = 0; ox < patches.out_width; ++ox) {
          const int row = b * locations + oy * patches.out_width + ox;
          for (int dy = 0; dy < spec.kernel; ++dy) {
            for (int dx = 0; dx < spec.kernel; ++dx) {
              double sum = 0.0;
              for (int c = blk * spec.channel_block; c < (blk + 1) * spec.channel_block; ++c) {
                sum += patches.at(b, c, oy, ox, dy, dx);
              }
              angles(row, dy * spec.kernel + dx) = sum / spec.channel_block;
            }
          }
        }
      }
    }
    out.push_back(circuit::rx_encode(angles));
  }
  return out;
}

StateBatch apply_unitary(const ComplexMatrix& u, const StateBatch& s) {
  ComplexMatrix amps(s.dim(), s.batch());
  amps.noalias() = u * s.amplitudes();
  return StateBatch::adopt_unchecked(s.n_qubits(), std::move(amps));
}

// B x (O * L) features, ordered (o, oy, ox) within a row.
Eigen::MatrixXd quanv_features(const std::vector<StateBatch>& encoded, const QuanvSpec& spec,
                               int batch, int locations) {
  Eigen::MatrixXd feats = Eigen::MatrixXd::Zero(batch, spec.out_channels * locations);
  const double scale = 1.0 / (spec.n_blocks() * spec.n_qubits());
  for (int o = 0; o < spec.out_channels; ++o) {
    for (int blk = 0; blk < spec.n_blocks(); ++blk) {
      const auto& params = spec.circuits[static_cast<std::size_t>(o * spec.n_blocks() + blk)];
      const ComplexMatrix u = linalg::matexp(lie::assemble(params));
      const circuit::RealMatrix z =
          circuit::z_expectations(apply_unitary(u, encoded[static_cast<std::size_t>(blk)]));
      for (int b = 0; b < batch; ++b) {
        for (int loc = 0; loc < locations; ++loc) {
          feats(b, o * locations + loc) += scale * z.row(b * locations + loc).sum();
        }
      }
    }
  }
  return feats;
}

}  // namespace

// --- images ---------------------------------------------------------------------

ImageBatch::ImageBatch(int batch, int channels, int height, int width, std::vector<double> pixels)
    : batch_(batch), channels_(channels), height_(height), width_(width), pixels_(std::move(pixels)) {
  if (batch < 1 || channels < 1 || height < 1 || width < 1) {
    throw ContractError("ImageBatch: all extents must be >= 1");
  }
  const auto expected = static_cast<std::size_t>(batch) * channels * height * width;
  if (pixels_.size() != expected) {
    throw ContractError("ImageBatch: expected " + std::to_string(expected) + " pixels, got " +
                        std::to_string(pixels_.size()));
  }
  for (double v : pixels_) {
    if (!(v >= -kHalfPi && v <= kHalfPi)) {
      throw DomainError("ImageBatch: pixel " + std::to_string(v) + " outside [-pi/2, pi/2]");
    }
  }
}

ImageBatch ImageBatch::slice(int first, int count) const {
  if (first < 0 || count < 1 || first + count > batch_) throw ContractError("ImageBatch::slice out of range");
  const std::size_t per_image = static_cast<std::size_t>(channels_) * height_ * width_;
  std::vector<double> px(pixels_.begin() + static_cast<std::ptrdiff_t>(first * per_image),
                         pixels_.begin() + static_cast<std::ptrdiff_t>((first + count) * per_image));
  return ImageBatch(count, channels_, height_, width_, std::move(px));
}

double intensity_to_angle(double v) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw DomainError("intensity " + std::to_string(v) + " outside [0, 1]");
  }
  return (v - 0.5) * std::numbers::pi;
}

// --- spec -------------------------------------------------------------------------

void QuanvSpec::validate() const {
  if (in_channels < 1 || out_channels < 1 || kernel < 1 || stride < 1 || channel_block < 1) {
    throw ContractError("QuanvSpec: all sizes must be >= 1");
  }
  if (in_channels % channel_block != 0) {
    throw ContractError("QuanvSpec: channel_block must divide in_channels");
  }
  if (n_qubits() > 10) throw ContractError("QuanvSpec: kernel too large for simulation");
  if (circuits.size() != n_circuits()) {
    throw ContractError("QuanvSpec: expected " + std::to_string(n_circuits()) + " circuits, got " +
                        std::to_string(circuits.size()));
  }
  const Eigen::Index d = Eigen::Index{1} << n_qubits();
  for (const auto& c : circuits) {
    if (c.dim() != d) throw ContractError("QuanvSpec: circuit of dim " + std::to_string(c.dim()));
  }
}

void QuanvSpec::init_circuits(bool random, std::uint64_t seed) {
  const Eigen::Index d = Eigen::Index{1} << n_qubits();
  circuits.clear();
  for (std::size_t i = 0; i < n_circuits(); ++i) {
    circuits.push_back(random ? lie::random_params(d, derive_seed(seed, "circuit" + std::to_string(i)))
                              : lie::SkewHermitianParams::zeros(d));
  }
}

nlohmann::json to_json(const QuanvSpec& spec) {
  nlohmann::json circuits = nlohmann::json::array();
  for (const auto& c : spec.circuits) circuits.push_back(lie::to_json(c));
  return {{"in_channels", spec.in_channels}, {"out_channels", spec.out_channels},
          {"kernel", spec.kernel},           {"stride", spec.stride},
          {"channel_block", spec.channel_block}, {"circuits", std::move(circuits)}};
}

QuanvSpec quanv_spec_from_json(const nlohmann::json& j) {
  QuanvSpec spec;
  try {
    if (!j.is_object()) throw ParseError("quanv spec must be a JSON object");
    auto read = [&](const char* key, int& field) {
      if (j.contains(key)) field = j.at(key).get<int>();
    };
    read("in_channels", spec.in_channels);
    read("out_channels", spec.out_channels);
    read("kernel", spec.kernel);
    read("stride", spec.stride);
    read("channel_block", spec.channel_block);
    if (j.contains("circuits")) {
      for (const auto& c : j.at("circuits")) spec.circuits.push_back(lie::params_from_json(c));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("quanv spec: ") + e.what());
  }
  return spec;
}

// --- forward ----------------------------------------------------------------------

PatchTensor extract_patches(const ImageBatch& imgs, int kernel, int stride) {
  check_geometry(imgs, kernel, stride);
  PatchTensor p{imgs.batch(), imgs.channels(), out_extent(imgs.height(), kernel, stride),
                out_extent(imgs.width(), kernel, stride), kernel, {}};
  p.values.reserve(static_cast<std::size_t>(p.batch) * p.channels * p.out_height * p.out_width * kernel * kernel);
  for (int b = 0; b < p.batch; ++b) {
    for (int c = 0; c < p.channels; ++c) {
      for (int oy = 0; oy < p.out_height; ++oy) {
        for (int ox = 0; ox < p.out_width; ++ox) {
          for (int dy = 0; dy < kernel; ++dy) {
            for (int dx = 0; dx < kernel; ++dx) {
              p.values.push_back(imgs.at(b, c, oy * stride + dy, ox * stride + dx));
            }
          }
        }
      }
    }
  }
  return p;
}

FeatureMaps quanv_forward(const ImageBatch& imgs, const QuanvSpec& spec) {
  spec.validate();
  if (imgs.channels() != spec.in_channels) {
    throw ContractError("quanv_forward: image has " + std::to_string(imgs.channels()) +
                        " channels, spec expects " + std::to_string(spec.in_channels));
  }
  check_geometry(imgs, spec.kernel, spec.stride);
  const int oh = out_extent(imgs.height(), spec.kernel, spec.stride);
  const int ow = out_extent(imgs.width(), spec.kernel, spec.stride);
  const Eigen::MatrixXd feats = quanv_features(encode_blocks(imgs, spec), spec, imgs.batch(), oh * ow);
  FeatureMaps fm{imgs.batch(), spec.out_channels, oh, ow, {}};
  fm.values.resize(static_cast<std::size_t>(feats.size()));
  for (int b = 0; b < imgs.batch(); ++b) {
    for (Eigen::Index f = 0; f < feats.cols(); ++f) {
      fm.values[static_cast<std::size_t>(b * feats.cols() + f)] = feats(b, f);
    }
  }
  return fm;
}

// --- datasets -----------------------------------------------------------------------

LabeledImages make_bright_half_dataset(int n_images, int channels, int height, int width,
                                       double noise, std::uint64_t seed) {
  if (n_images < 2 || height < 2) throw ContractError("bright-half dataset needs >= 2 images and height >= 2");
  if (!(noise >= 0.0 && noise <= 0.4)) throw ContractError("bright-half dataset: noise must be in [0, 0.4]");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-noise, noise);
  std::vector<double> px;
  px.reserve(static_cast<std::size_t>(n_images) * channels * height * width);
  std::vector<int> labels;
  for (int i = 0; i < n_images; ++i) {
    const int label = i % 2;
    labels.push_back(label);
    for (int c = 0; c < channels; ++c) {
      for (int y = 0; y < height; ++y) {
        const bool top = y < height / 2;
        const bool bright = (label == 0) == top;
        for (int x = 0; x < width; ++x) {
          const double v = std::clamp((bright ? 0.9 : 0.1) + jitter(rng), 0.0, 1.0);
          px.push_back(intensity_to_angle(v));
        }
      }
    }
  }
  return {ImageBatch(n_images, channels, height, width, std::move(px)), std::move(labels), 2};
}

LabeledImages parse_csv_dataset(const std::string& text, int channels, int height, int width) {
  const std::size_t per_image = static_cast<std::size_t>(channels) * height * width;
  std::istringstream in(text);
  std::string line;
  std::vector<double> px;
  std::vector<int> labels;
  bool first = true;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    try {
      std::size_t used = 0;
      const double label = std::stod(cells.at(0), &used);
      if (label != std::floor(label) || label < 0) throw ParseError("label must be a non-negative integer");
      if (cells.size() != per_image + 1) {
        throw ParseError("expected " + std::to_string(per_image + 1) + " columns, got " +
                         std::to_string(cells.size()));
      }
      for (std::size_t i = 1; i < cells.size(); ++i) px.push_back(intensity_to_angle(std::stod(cells[i])));
      labels.push_back(static_cast<int>(label));
    } catch (const std::invalid_argument&) {
      if (first) {
        first = false;
        continue;  // header
      }
      throw ParseError("csv line " + std::to_string(line_no) + ": non-numeric cell");
    } catch (const std::out_of_range&) {
      throw ParseError("csv line " + std::to_string(line_no) + ": numeric value out of range");
    } catch (const ParseError& e) {
      throw ParseError("csv line " + std::to_string(line_no) + ": " + e.what());
    } catch (const DomainError& e) {
      throw ParseError("csv line " + std::to_string(line_no) + ": " + e.what());
    }
    first = false;
  }
  if (labels.empty()) throw ParseError("csv dataset is empty");
  const int n_classes = *std::max_element(labels.begin(), labels.end()) + 1;
  if (n_classes < 2) throw ParseError("csv dataset needs at least two classes");
  return {ImageBatch(static_cast<int>(labels.size()), channels, height, width, std::move(px)),
          std::move(labels), n_classes};
}

LabeledImages load_csv_dataset(const std::string& path, int channels, int height, int width) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open dataset '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_csv_dataset(text.str(), channels, height, width);
}

// --- classifier --------------------------------------------------------------------

QuanvClassifier::QuanvClassifier(QuanvSpec spec, int image_height, int image_width, int n_classes)
    : spec_(std::move(spec)), n_classes_(n_classes) {
  spec_.validate();
  if (n_classes < 2) throw ContractError("QuanvClassifier: need at least two classes");
  if (spec_.kernel > image_height || spec_.kernel > image_width) {
    throw ContractError("QuanvClassifier: kernel larger than image");
  }
  out_h_ = out_extent(image_height, spec_.kernel, spec_.stride);
  out_w_ = out_extent(image_width, spec_.kernel, spec_.stride);
  n_features_ = spec_.out_channels * out_h_ * out_w_;
  weights_ = Eigen::MatrixXd::Zero(n_classes_, n_features_);
  bias_ = Eigen::VectorXd::Zero(n_classes_);
}

std::size_t QuanvClassifier::param_count() const {
  std::size_t n = 0;
  for (const auto& c : spec_.circuits) n += c.theta().size();
  return n + static_cast<std::size_t>(weights_.size() + bias_.size());
}

std::vector<double> QuanvClassifier::flat_params() const {
  std::vector<double> out;
  out.reserve(param_count());
  for (const auto& c : spec_.circuits) out.insert(out.end(), c.theta().begin(), c.theta().end());
  for (Eigen::Index r = 0; r < weights_.rows(); ++r) {
    for (Eigen::Index f = 0; f < weights_.cols(); ++f) out.push_back(weights_(r, f));
  }
  for (Eigen::Index r = 0; r < bias_.size(); ++r) out.push_back(bias_(r));
  return out;
}

void QuanvClassifier::set_flat_params(std::span<const double> values) {
  if (values.size() != param_count()) throw ContractError("QuanvClassifier: parameter length mismatch");
  std::size_t k = 0;
  for (auto& c : spec_.circuits) {
    auto t = c.mutable_theta();
    for (double& v : t) v = values[k++];
  }
  for (Eigen::Index r = 0; r < weights_.rows(); ++r) {
    for (Eigen::Index f = 0; f < weights_.cols(); ++f) weights_(r, f) = values[k++];
  }
  for (Eigen::Index r = 0; r < bias_.size(); ++r) bias_(r) = values[k++];
}

Eigen::MatrixXd QuanvClassifier::logits(const ImageBatch& imgs) const {
  if (imgs.channels() != spec_.in_channels) throw ContractError("QuanvClassifier: channel mismatch");
  const Eigen::MatrixXd feats =
      quanv_features(encode_blocks(imgs, spec_), spec_, imgs.batch(), out_h_ * out_w_);
  if (feats.cols() != n_features_) throw ContractError("QuanvClassifier: image size mismatch");
  return (feats * weights_.transpose()).rowwise() + bias_.transpose();
}

double QuanvClassifier::accuracy(const LabeledImages& data) const {
  const Eigen::MatrixXd z = logits(data.images);
  int correct = 0;
  for (Eigen::Index b = 0; b < z.rows(); ++b) {
    Eigen::Index best = 0;
    z.row(b).maxCoeff(&best);
    if (best == data.labels[static_cast<std::size_t>(b)]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(z.rows());
}

optim::LossAndGrad QuanvClassifier::loss_and_grad(const ImageBatch& imgs, std::span<const int> labels) const {
  if (static_cast<int>(labels.size()) != imgs.batch()) throw ContractError("loss_and_grad: label count mismatch");
  if (imgs.channels() != spec_.in_channels) throw ContractError("QuanvClassifier: channel mismatch");
  const int batch = imgs.batch();
  const int locations = out_h_ * out_w_;
  const std::vector<StateBatch> encoded = encode_blocks(imgs, spec_);
  const Eigen::MatrixXd feats = quanv_features(encoded, spec_, batch, locations);
  if (feats.cols() != n_features_) throw ContractError("QuanvClassifier: image size mismatch");
  const Eigen::MatrixXd z = (feats * weights_.transpose()).rowwise() + bias_.transpose();

  // Softmax cross-entropy.
  double loss = 0.0;
  Eigen::MatrixXd dlogits(batch, n_classes_);
  for (int b = 0; b < batch; ++b) {
    const int label = labels[static_cast<std::size_t>(b)];
    if (label < 0 || label >= n_classes_) throw ContractError("loss_and_grad: label out of range");
    const double zmax = z.row(b).maxCoeff();
    const Eigen::RowVectorXd e = (z.row(b).array() - zmax).exp().matrix();
    const double total = e.sum();
    loss += -(z(b, label) - zmax - std::log(total));
    dlogits.row(b) = e / total;
    dlogits(b, label) -= 1.0;
  }
  loss /= batch;
  dlogits /= batch;

  const Eigen::MatrixXd dweights = dlogits.transpose() * feats;
  const Eigen::VectorXd dbias = dlogits.colwise().sum().transpose();
  const Eigen::MatrixXd dfeats = dlogits * weights_;

  std::vector<double> grad;
  grad.reserve(param_count());
  const int nq = spec_.n_qubits();
  const double scale = 1.0 / (spec_.n_blocks() * nq);
  for (int o = 0; o < spec_.out_channels; ++o) {
    for (int blk = 0; blk < spec_.n_blocks(); ++blk) {
      const auto& params = spec_.circuits[static_cast<std::size_t>(o * spec_.n_blocks() + blk)];
      const StateBatch& input = encoded[static_cast<std::size_t>(blk)];
      const ComplexMatrix x = lie::assemble(params);
      const StateBatch output = apply_unitary(linalg::matexp(x), input);
      circuit::RealMatrix dz(batch * locations, nq);
      for (int b = 0; b < batch; ++b) {
        for (int loc = 0; loc < locations; ++loc) {
          dz.row(b * locations + loc).setConstant(scale * dfeats(b, o * locations + loc));
        }
      }
      const ComplexMatrix c = circuit::z_expectations_vjp(output, dz);
      ComplexMatrix u_bar(input.dim(), input.dim());
      u_bar.noalias() = c * input.amplitudes().adjoint();
      const std::vector<double> g = lie::param_grad(linalg::matexp_vjp(x, u_bar));
      grad.insert(grad.end(), g.begin(), g.end());
    }
  }
  for (Eigen::Index r = 0; r < dweights.rows(); ++r) {
    for (Eigen::Index f = 0; f < dweights.cols(); ++f) grad.push_back(dweights(r, f));
  }
  for (Eigen::Index r = 0; r < dbias.size(); ++r) grad.push_back(dbias(r));
  return {loss, std::move(grad)};
}

// --- training ------------------------------------------------------------------------

QuanvReport train_quanv_demo(const LabeledImages& dataset, QuanvSpec spec, const optim::TrainConfig& cfg) {
  cfg.validate();
  if (dataset.n_classes < 2) throw ContractError("train_quanv_demo: need at least two classes");
  if (static_cast<int>(dataset.labels.size()) != dataset.images.batch()) {
    throw ContractError("train_quanv_demo: label count mismatch");
  }
  if (spec.circuits.empty()) {
    spec.init_circuits(cfg.init == optim::InitKind::Random, derive_seed(cfg.seed, "quanv"));
  }
  QuanvClassifier model(std::move(spec), dataset.images.height(), dataset.images.width(), dataset.n_classes);

  QuanvReport report;
  report.config = cfg;
  report.n_circuits = model.spec().n_circuits();
  report.n_params = model.param_count();
  report.threads = thread_count();
  report.initial_accuracy = model.accuracy(dataset);

  std::vector<double> params = model.flat_params();
  optim::AdamState adam(params.size());
  const int n = dataset.images.batch();
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const Stopwatch clock;
    double weighted_loss = 0.0;
    for (int start = 0; start < n; start += cfg.batch_size) {
      const int rows = std::min(cfg.batch_size, n - start);
      const auto lg = model.loss_and_grad(
          dataset.images.slice(start, rows),
          std::span<const int>(dataset.labels).subspan(static_cast<std::size_t>(start), static_cast<std::size_t>(rows)));
      weighted_loss += lg.loss * rows;
      optim::adam_step(params, lg.grad, adam, cfg);
      model.set_flat_params(params);
    }
    report.epoch_times.push_back(clock.seconds());
    report.loss_curve.push_back(weighted_loss / n);
    report.accuracy_curve.push_back(model.accuracy(dataset));
  }
  report.spec = model.spec();
  return report;
}

nlohmann::json to_json(const QuanvReport& r) {
  return {{"initial_accuracy", r.initial_accuracy},
          {"final_accuracy", r.accuracy_curve.empty() ? r.initial_accuracy : r.accuracy_curve.back()},
          {"accuracy_curve", r.accuracy_curve},
          {"loss_curve", r.loss_curve},
          {"epoch_times", r.epoch_times},
          {"n_circuits", r.n_circuits},
          {"n_params", r.n_params},
          {"threads", r.threads},
          {"config", optim::to_json(r.config)},
          {"spec", to_json(r.spec)}};
}

}  // namespace uf::quanv
