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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "unitary_forge/liegroup.hpp"
#include "unitary_forge/optim.hpp"

// Quanvolution: a 2^(k*k)-dimensional full-unitary circuit evaluated on every
// k x k patch of an image.
namespace uf::quanv {

// NCHW, pixels as rotation angles in [-pi/2, pi/2].
class ImageBatch {
 public:
  // Throws ContractError on size problems and DomainError on pixels outside
  // [-pi/2, pi/2].
  ImageBatch(int batch, int channels, int height, int width, std::vector<double> pixels);

  int batch() const { return batch_; }
  int channels() const { return channels_; }
  int height() const { return height_; }
  int width() const { return width_; }
  const std::vector<double>& pixels() const { return pixels_; }

  double at(int b, int c, int y, int x) const {
    return pixels_[((static_cast<std::size_t>(b) * channels_ + c) * height_ + y) * width_ + x];
  }

  // Images [first, first + count).
  ImageBatch slice(int first, int count) const;

 private:
  int batch_, channels_, height_, width_;
  std::vector<double> pixels_;
};

// Maps a [0, 1] intensity to a rotation angle in [-pi/2, pi/2].
double intensity_to_angle(double v);

struct QuanvSpec {
  int in_channels = 16;
  int out_channels = 8;
  int kernel = 2;
  int stride = 1;
  // Input channels averaged into one circuit input.
  int channel_block = 4;
  // circuits[o * n_blocks() + blk], each of dim 2^(kernel^2).
  std::vector<lie::SkewHermitianParams> circuits;

  int n_qubits() const { return kernel * kernel; }
  int n_blocks() const { return in_channels / channel_block; }
  std::size_t n_circuits() const {
    return static_cast<std::size_t>(out_channels) * static_cast<std::size_t>(n_blocks());
  }

  void validate() const;
  // Fills circuits: Normal(0, 1/d) when random, identity generators otherwise.
  void init_circuits(bool random, std::uint64_t seed);
};

nlohmann::json to_json(const QuanvSpec& spec);
// Reads the geometry fields; circuits are optional.
QuanvSpec quanv_spec_from_json(const nlohmann::json& j);

// Valid-padding patches, indexed (b, c, oy, ox, dy, dx) row-major.
struct PatchTensor {
  int batch, channels, out_height, out_width, kernel;
  std::vector<double> values;

  double at(int b, int c, int oy, int ox, int dy, int dx) const {
    return values[(((((static_cast<std::size_t>(b) * channels + c) * out_height + oy) * out_width + ox) *
                        kernel + dy) * kernel) + dx];
  }
};

PatchTensor extract_patches(const ImageBatch& imgs, int kernel, int stride);

// (b, o, oy, ox) row-major.
struct FeatureMaps {
  int batch, channels, height, width;
  std::vector<double> values;

  double at(int b, int o, int y, int x) const {
    return values[((static_cast<std::size_t>(b) * channels + o) * height + y) * width + x];
  }
};

// Circuit (o, blk) takes the block-mean of channels [blk*cb, (blk+1)*cb) over
// each patch as its RX angles (wire dy*k + dx), applies its unitary and
// decodes the Z expectations. Output channel o is the mean over blocks of the
// mean Z value, so every output lies in [-1, 1].
FeatureMaps quanv_forward(const ImageBatch& imgs, const QuanvSpec& spec);

struct LabeledImages {
  ImageBatch images;
  std::vector<int> labels;
  int n_classes;
};

// Balanced two-class set: class 0 bright in the top half, class 1 bright in
// the bottom half, with uniform intensity noise of the given amplitude.
LabeledImages make_bright_half_dataset(int n_images, int channels, int height, int width,
                                       double noise, std::uint64_t seed);

// One row per image: integer label, then channels*height*width intensities in
// [0, 1] (channel-major). A non-numeric first row is treated as a header.
LabeledImages load_csv_dataset(const std::string& path, int channels, int height, int width);
LabeledImages parse_csv_dataset(const std::string& text, int channels, int height, int width);

// Quanvolution followed by a linear softmax head, trained jointly.
class QuanvClassifier {
 public:
  QuanvClassifier(QuanvSpec spec, int image_height, int image_width, int n_classes);

  const QuanvSpec& spec() const { return spec_; }
  int n_features() const { return n_features_; }
  int n_classes() const { return n_classes_; }
  std::size_t param_count() const;
  std::vector<double> flat_params() const;
  void set_flat_params(std::span<const double> values);

  // n_images x n_classes logits.
  Eigen::MatrixXd logits(const ImageBatch& imgs) const;
  double accuracy(const LabeledImages& data) const;

  // Mean cross-entropy of the softmax and its gradient (ordered like
  // flat_params).
  optim::LossAndGrad loss_and_grad(const ImageBatch& imgs, std::span<const int> labels) const;

 private:
  QuanvSpec spec_;
  int out_h_, out_w_, n_features_, n_classes_;
  Eigen::MatrixXd weights_;  // n_classes x n_features, starts at zero
  Eigen::VectorXd bias_;
};

struct QuanvReport {
  double initial_accuracy = 0.0;
  std::vector<double> accuracy_curve;  // after each epoch
  std::vector<double> loss_curve;      // mean minibatch loss per epoch
  std::vector<double> epoch_times;
  std::size_t n_circuits = 0;
  std::size_t n_params = 0;
  int threads = 1;
  optim::TrainConfig config;
  QuanvSpec spec;
};

QuanvReport train_quanv_demo(const LabeledImages& dataset, QuanvSpec spec, const optim::TrainConfig& cfg);

nlohmann::json to_json(const QuanvReport& r);

}  // namespace uf::quanv
