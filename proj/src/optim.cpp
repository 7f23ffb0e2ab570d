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

#include "unitary_forge/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "unitary_forge/errors.hpp"
#include "unitary_forge/runtime.hpp"

namespace uf::optim {

using circuit::StateBatch;
using linalg::ComplexMatrix;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::FullUnitary: return "FullUnitary";
    case ModelKind::Partitioned: return "Partitioned";
    case ModelKind::Ansatz: return "Ansatz";
  }
  return "?";
}

ModelKind model_kind_from_string(std::string_view name) {
  if (name == "FullUnitary") return ModelKind::FullUnitary;
  if (name == "Partitioned") return ModelKind::Partitioned;
  if (name == "Ansatz") return ModelKind::Ansatz;
  throw ParseError("unknown model kind '" + std::string(name) + "'");
}

ModelKind kind_of(const Model& m) {
  return std::visit(Overloaded{[](const FullUnitaryModel&) { return ModelKind::FullUnitary; },
                               [](const circuit::PartitionedUnitary&) { return ModelKind::Partitioned; },
                               [](const circuit::AnsatzCircuit&) { return ModelKind::Ansatz; }},
                    m);
}

int model_qubits(const Model& m) {
  return std::visit(Overloaded{[](const FullUnitaryModel& f) { return f.n_qubits; },
                               [](const auto& other) { return other.n_qubits(); }},
                    m);
}

std::size_t param_count(const Model& m) {
  return std::visit(Overloaded{[](const FullUnitaryModel& f) { return f.params.theta().size(); },
                               [](const auto& other) { return other.param_count(); }},
                    m);
}

std::vector<double> flat_params(const Model& m) {
  return std::visit(Overloaded{[](const FullUnitaryModel& f) { return f.params.theta(); },
                               [](const circuit::PartitionedUnitary& p) { return p.flat_params(); },
                               [](const circuit::AnsatzCircuit& c) { return c.angles(); }},
                    m);
}

void set_flat_params(Model& m, std::span<const double> values) {
  std::visit(Overloaded{[&](FullUnitaryModel& f) {
                          auto t = f.params.mutable_theta();
                          if (values.size() != t.size()) {
                            throw ContractError("set_flat_params: expected " + std::to_string(t.size()) +
                                                " parameters, got " + std::to_string(values.size()));
                          }
                          std::copy(values.begin(), values.end(), t.begin());
                        },
                        [&](circuit::PartitionedUnitary& p) { p.set_flat_params(values); },
                        [&](circuit::AnsatzCircuit& c) { c.set_angles(values); }},
             m);
}

StateBatch apply_model(const Model& m, const StateBatch& s) {
  return std::visit(
      Overloaded{[&](const FullUnitaryModel& f) {
                   if (f.params.dim() != s.dim()) throw ContractError("apply_model: dimension mismatch");
                   return circuit::apply_full(s, lie::to_unitary(f.params));
                 },
                 [&](const circuit::PartitionedUnitary& p) { return circuit::apply_partitioned(s, p); },
                 [&](const circuit::AnsatzCircuit& c) { return circuit::run_ansatz(s, c); }},
      m);
}

nlohmann::json to_json(const Model& m) {
  nlohmann::json body = std::visit(
      Overloaded{[](const FullUnitaryModel& f) {
                   return nlohmann::json{{"n_qubits", f.n_qubits}, {"params", lie::to_json(f.params)}};
                 },
                 [](const auto& other) { return circuit::to_json(other); }},
      m);
  body["model_kind"] = to_string(kind_of(m));
  return body;
}

Model model_from_json(const nlohmann::json& j) {
  try {
    switch (model_kind_from_string(j.at("model_kind").get<std::string>())) {
      case ModelKind::FullUnitary: {
        const int n = j.at("n_qubits").get<int>();
        auto params = lie::params_from_json(j.at("params"));
        if (n < 1 || n > 30 || params.dim() != (Eigen::Index{1} << n)) {
          throw ParseError("model: params dim does not match n_qubits");
        }
        return FullUnitaryModel{n, std::move(params)};
      }
      case ModelKind::Partitioned: return circuit::partitioned_from_json(j);
      case ModelKind::Ansatz: return circuit::ansatz_from_json(j);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("model: ") + e.what());
  }
  throw ParseError("model: unreachable");
}

// --- config ------------------------------------------------------------------

void TrainConfig::validate() const {
  auto fail = [](const std::string& what) { throw ContractError("TrainConfig: " + what); };
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) fail("learning_rate must be > 0");
  if (!(beta1 > 0.0 && beta1 < 1.0)) fail("beta1 must be in (0,1)");
  if (!(beta2 > 0.0 && beta2 < 1.0)) fail("beta2 must be in (0,1)");
  if (!(epsilon > 0.0)) fail("epsilon must be > 0");
  if (epochs < 1) fail("epochs must be >= 1");
  if (batch_size < 1) fail("batch_size must be >= 1");
  if (partition_k < 1) fail("partition_k must be >= 1");
  if (partition_layers < 1) fail("partition_layers must be >= 1");
  if (warmup_epochs < 0) fail("warmup_epochs must be >= 0");
  if (init == InitKind::Zero && model_kind == ModelKind::Ansatz) fail("zero init needs a Lie-algebra model");
}

nlohmann::json to_json(const TrainConfig& cfg) {
  return {{"learning_rate", cfg.learning_rate},
          {"beta1", cfg.beta1},
          {"beta2", cfg.beta2},
          {"epsilon", cfg.epsilon},
          {"epochs", cfg.epochs},
          {"batch_size", cfg.batch_size},
          {"seed", cfg.seed},
          {"model_kind", to_string(cfg.model_kind)},
          {"init", cfg.init == InitKind::Zero ? "zero" : "random"},
          {"partition_k", cfg.partition_k},
          {"partition_layers", cfg.partition_layers},
          {"ansatz_params", cfg.ansatz_params},
          {"warmup_epochs", cfg.warmup_epochs}};
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
  TrainConfig cfg;
  try {
    if (!j.is_object()) throw ParseError("train config must be a JSON object");
    auto read = [&](const char* key, auto& field) {
      if (j.contains(key)) field = j.at(key).get<std::remove_reference_t<decltype(field)>>();
    };
    read("learning_rate", cfg.learning_rate);
    read("beta1", cfg.beta1);
    read("beta2", cfg.beta2);
    read("epsilon", cfg.epsilon);
    read("epochs", cfg.epochs);
    read("batch_size", cfg.batch_size);
    read("seed", cfg.seed);
    read("partition_k", cfg.partition_k);
    read("partition_layers", cfg.partition_layers);
    read("ansatz_params", cfg.ansatz_params);
    read("warmup_epochs", cfg.warmup_epochs);
    if (j.contains("model_kind")) cfg.model_kind = model_kind_from_string(j.at("model_kind").get<std::string>());
    if (j.contains("init")) {
      const auto init = j.at("init").get<std::string>();
      if (init == "random") {
        cfg.init = InitKind::Random;
      } else if (init == "zero") {
        cfg.init = InitKind::Zero;
      } else {
        throw ParseError("unknown init '" + init + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("train config: ") + e.what());
  }
  return cfg;
}

// --- Adam, losses ---------------------------------------------------------------

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               const TrainConfig& cfg) {
  if (grads.size() != params.size() || state.first_moment.size() != params.size() ||
      state.second_moment.size() != params.size()) {
    throw ContractError("adam_step: length mismatch between params, grads and state");
  }
  ++state.step_count;
  const double t = static_cast<double>(state.step_count);
  const double bc1 = 1.0 - std::pow(cfg.beta1, t);
  const double bc2 = 1.0 - std::pow(cfg.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    double& m = state.first_moment[i];
    double& v = state.second_moment[i];
    m = cfg.beta1 * m + (1.0 - cfg.beta1) * grads[i];
    v = cfg.beta2 * v + (1.0 - cfg.beta2) * grads[i] * grads[i];
    const double m_hat = m / bc1;
    const double v_hat = v / bc2;
    params[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
  }
}

MseResult mse_loss(const RealMatrix& pred, const RealMatrix& target) {
  if (pred.rows() != target.rows() || pred.cols() != target.cols() || pred.size() == 0) {
    throw ContractError("mse_loss: shape mismatch");
  }
  const double n = static_cast<double>(pred.size());
  const RealMatrix diff = pred - target;
  return {diff.squaredNorm() / n, (2.0 / n) * diff};
}

namespace {

LossAndGrad full_loss_and_grad(const FullUnitaryModel& f, const StateBatch& input,
                               const RealMatrix& targets) {
  if (f.params.dim() != input.dim()) throw ContractError("loss_and_grad: dimension mismatch");
  const ComplexMatrix x = lie::assemble(f.params);
  const ComplexMatrix u = linalg::matexp(x);
  ComplexMatrix out(input.dim(), input.batch());
  out.noalias() = u * input.amplitudes();
  const StateBatch output = StateBatch::adopt_unchecked(input.n_qubits(), std::move(out));

  MseResult mse = mse_loss(circuit::z_expectations(output), targets);
  const ComplexMatrix c = circuit::z_expectations_vjp(output, mse.grad);
  ComplexMatrix u_bar(input.dim(), input.dim());
  u_bar.noalias() = c * input.amplitudes().adjoint();
  return {mse.loss, lie::param_grad(linalg::matexp_vjp(x, u_bar))};
}

}  // namespace

LossAndGrad loss_and_grad(const Model& m, const RealMatrix& features, const RealMatrix& targets) {
  if (features.cols() != model_qubits(m)) {
    throw ContractError("loss_and_grad: feature dimension " + std::to_string(features.cols()) +
                        " does not match " + std::to_string(model_qubits(m)) + " wires");
  }
  if (targets.rows() != features.rows() || targets.cols() != features.cols()) {
    throw ContractError("loss_and_grad: targets shape mismatch");
  }
  const StateBatch input = circuit::rx_encode(features);
  return std::visit(
      Overloaded{[&](const FullUnitaryModel& f) { return full_loss_and_grad(f, input, targets); },
                 [&](const circuit::PartitionedUnitary& p) {
                   const StateBatch output = circuit::apply_partitioned(input, p);
                   MseResult mse = mse_loss(circuit::z_expectations(output), targets);
                   const ComplexMatrix c = circuit::z_expectations_vjp(output, mse.grad);
                   return LossAndGrad{mse.loss, circuit::partitioned_param_grad(input, c, p)};
                 },
                 [&](const circuit::AnsatzCircuit& a) {
                   const StateBatch output = circuit::run_ansatz(input, a);
                   MseResult mse = mse_loss(circuit::z_expectations(output), targets);
                   const ComplexMatrix c = circuit::z_expectations_vjp(output, mse.grad);
                   return LossAndGrad{mse.loss, circuit::ansatz_angle_grad(output, c, a)};
                 }},
      m);
}

RealMatrix predict(const Model& m, const RealMatrix& features) {
  if (features.cols() != model_qubits(m)) throw ContractError("predict: feature dimension mismatch");
  return circuit::z_expectations(apply_model(m, circuit::rx_encode(features)));
}

// --- identity task ------------------------------------------------------------------

IdentityDataset make_identity_dataset(int n_qubits, int size, std::uint64_t seed) {
  if (n_qubits < 1 || size < 1) throw ContractError("make_identity_dataset: sizes must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-std::numbers::pi / 2.0, std::numbers::pi / 2.0);
  IdentityDataset ds{RealMatrix(size, n_qubits), RealMatrix(size, n_qubits)};
  for (int b = 0; b < size; ++b) {
    for (int i = 0; i < n_qubits; ++i) ds.features(b, i) = dist(rng);
  }
  ds.targets = circuit::z_expectations(circuit::rx_encode(ds.features));
  return ds;
}

Model make_model(const TrainConfig& cfg, int n_qubits) {
  cfg.validate();
  if (n_qubits < 1 || n_qubits > 20) throw ContractError("make_model: n_qubits must be in 1..20");
  const std::uint64_t init_seed = derive_seed(cfg.seed, "init");
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  switch (cfg.model_kind) {
    case ModelKind::FullUnitary:
      return FullUnitaryModel{n_qubits, cfg.init == InitKind::Zero
                                            ? lie::SkewHermitianParams::zeros(d)
                                            : lie::random_params(d, init_seed)};
    case ModelKind::Partitioned: {
      auto pu = circuit::PartitionedUnitary::uniform(n_qubits, cfg.partition_k, cfg.partition_layers);
      if (cfg.init == InitKind::Random) {
        std::vector<double> theta;
        std::uint64_t k = 0;
        for (const auto& layer : pu.layers()) {
          for (const auto& p : layer.params) {
            const auto r = lie::random_params(p.dim(), derive_seed(init_seed, "group" + std::to_string(k++)));
            theta.insert(theta.end(), r.theta().begin(), r.theta().end());
          }
        }
        pu.set_flat_params(theta);
      }
      return pu;
    }
    case ModelKind::Ansatz: {
      const std::size_t n_params =
          cfg.ansatz_params > 0 ? cfg.ansatz_params : std::size_t{1} << (2 * n_qubits);
      return circuit::random_layer(n_qubits, n_params, init_seed);
    }
  }
  throw ContractError("make_model: unknown model kind");
}

TrainReport train_identity(const TrainConfig& cfg, int n_qubits, int dataset_size) {
  return train_identity(cfg, make_model(cfg, n_qubits), dataset_size);
}

TrainReport train_identity(const TrainConfig& cfg, Model initial, int dataset_size) {
  cfg.validate();
  if (dataset_size < 1) throw ContractError("train_identity: dataset_size must be >= 1");
  const int n_qubits = model_qubits(initial);
  const IdentityDataset data = make_identity_dataset(n_qubits, dataset_size, derive_seed(cfg.seed, "data"));

  TrainReport report;
  report.config = cfg;
  report.n_qubits = n_qubits;
  report.dataset_size = dataset_size;
  report.threads = thread_count();
  report.final_model = std::move(initial);

  Model& model = report.final_model;
  std::vector<double> params = flat_params(model);
  AdamState adam(params.size());

  for (int epoch = 0; epoch < cfg.warmup_epochs + cfg.epochs; ++epoch) {
    const Stopwatch clock;
    double weighted_loss = 0.0;
    for (int start = 0; start < dataset_size; start += cfg.batch_size) {
      const int rows = std::min(cfg.batch_size, dataset_size - start);
      const LossAndGrad lg = loss_and_grad(model, data.features.middleRows(start, rows),
                                           data.targets.middleRows(start, rows));
      weighted_loss += lg.loss * rows;
      adam_step(params, lg.grad, adam, cfg);
      set_flat_params(model, params);
    }
    const double seconds = clock.seconds();
    if (epoch >= cfg.warmup_epochs) {
      report.loss_curve.push_back(weighted_loss / dataset_size);
      report.epoch_times.push_back(seconds);
    }
  }
  report.steps = adam.step_count;
  report.final_loss = mse_loss(predict(model, data.features), data.targets).loss;
  return report;
}

nlohmann::json to_json(const TrainReport& r) {
  return {{"n_qubits", r.n_qubits},
          {"dataset_size", r.dataset_size},
          {"threads", r.threads},
          {"steps", r.steps},
          {"config", to_json(r.config)},
          {"loss_curve", r.loss_curve},
          {"epoch_times", r.epoch_times},
          {"final_loss", r.final_loss},
          {"final_params", to_json(r.final_model)}};
}

std::string loss_curve_csv(const TrainReport& r) {
  std::ostringstream out;
  out.precision(17);
  out << "epoch,loss,seconds\n";
  for (std::size_t e = 0; e < r.loss_curve.size(); ++e) {
    out << e << ',' << r.loss_curve[e] << ',' << r.epoch_times[e] << '\n';
  }
  return out.str();
}

}  // namespace uf::optim
