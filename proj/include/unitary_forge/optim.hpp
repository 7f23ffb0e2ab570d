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
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "unitary_forge/circuit.hpp"
#include "unitary_forge/liegroup.hpp"

namespace uf::optim {

using circuit::RealMatrix;

enum class ModelKind { FullUnitary, Partitioned, Ansatz };

std::string_view to_string(ModelKind kind);
ModelKind model_kind_from_string(std::string_view name);

// One unitary on all wires, exp of an assembled skew-Hermitian generator.
struct FullUnitaryModel {
  int n_qubits;
  lie::SkewHermitianParams params;

  friend bool operator==(const FullUnitaryModel&, const FullUnitaryModel&) = default;
};

using Model = std::variant<FullUnitaryModel, circuit::PartitionedUnitary, circuit::AnsatzCircuit>;

ModelKind kind_of(const Model& m);
int model_qubits(const Model& m);
std::size_t param_count(const Model& m);
std::vector<double> flat_params(const Model& m);
void set_flat_params(Model& m, std::span<const double> values);
circuit::StateBatch apply_model(const Model& m, const circuit::StateBatch& s);

nlohmann::json to_json(const Model& m);
Model model_from_json(const nlohmann::json& j);

enum class InitKind { Random, Zero };

struct TrainConfig {
  double learning_rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int epochs = 10;
  int batch_size = 32;
  std::uint64_t seed = 0;
  ModelKind model_kind = ModelKind::FullUnitary;

  // Model construction. Random init draws Lie-algebra coordinates from
  // Normal(0, 1/d) and ansatz angles uniformly; Zero starts at the identity
  // (Lie-algebra models only).
  InitKind init = InitKind::Random;
  int partition_k = 1;
  int partition_layers = 1;
  // Rotation count for Ansatz models; 0 means 4^N.
  std::size_t ansatz_params = 0;
  // Untimed epochs run before the recorded ones.
  int warmup_epochs = 0;

  // Throws ContractError when a field is out of range.
  void validate() const;
};

nlohmann::json to_json(const TrainConfig& cfg);
// Missing keys keep their defaults; wrong types raise ParseError.
TrainConfig train_config_from_json(const nlohmann::json& j);

struct AdamState {
  explicit AdamState(std::size_t n) : first_moment(n, 0.0), second_moment(n, 0.0) {}

  std::vector<double> first_moment;
  std::vector<double> second_moment;
  std::uint64_t step_count = 0;
};

// Bias-corrected Adam update in place.
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               const TrainConfig& cfg);

struct MseResult {
  double loss;
  RealMatrix grad;  // 2 (pred - target) / (B N)
};
MseResult mse_loss(const RealMatrix& pred, const RealMatrix& target);

struct LossAndGrad {
  double loss;
  std::vector<double> grad;  // ordered like flat_params
};

// MSE between z_expectations(model(rx_encode(features))) and targets, with
// the gradient pulled back to the model's parameters.
LossAndGrad loss_and_grad(const Model& m, const RealMatrix& features, const RealMatrix& targets);

// Forward pass only: the decoded predictions.
RealMatrix predict(const Model& m, const RealMatrix& features);

struct IdentityDataset {
  RealMatrix features;  // uniform in [-pi/2, pi/2]
  RealMatrix targets;   // decode of the untouched encoding, i.e. cos(features)
};
IdentityDataset make_identity_dataset(int n_qubits, int size, std::uint64_t seed);

Model make_model(const TrainConfig& cfg, int n_qubits);

struct TrainReport {
  TrainConfig config;
  int n_qubits = 0;
  int dataset_size = 0;
  int threads = 1;
  std::uint64_t steps = 0;
  std::vector<double> loss_curve;   // mean pre-update minibatch loss per epoch
  std::vector<double> epoch_times;  // seconds
  double final_loss = 0.0;          // full-dataset MSE after training
  Model final_model = FullUnitaryModel{1, lie::SkewHermitianParams::zeros(2)};
};

TrainReport train_identity(const TrainConfig& cfg, int n_qubits, int dataset_size);
// Same loop with an explicit starting model.
TrainReport train_identity(const TrainConfig& cfg, Model initial, int dataset_size);

nlohmann::json to_json(const TrainReport& r);
// "epoch,loss,seconds" lines.
std::string loss_curve_csv(const TrainReport& r);

}  // namespace uf::optim
