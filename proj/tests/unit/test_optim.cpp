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

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "unitary_forge/errors.hpp"
#include "unitary_forge/optim.hpp"

using namespace uf;
using namespace uf::testing;
using namespace uf::optim;

namespace {

RealMatrix random_features(Eigen::Index b, int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-kPi / 2, kPi / 2);
  RealMatrix f(b, n);
  for (Eigen::Index i = 0; i < f.size(); ++i) f.data()[i] = u(rng);
  return f;
}

RealMatrix random_targets(Eigen::Index b, int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RealMatrix t(b, n);
  for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = u(rng);
  return t;
}

void check_model_gradient(const Model& model, std::mt19937_64& rng, double rtol) {
  const int n = model_qubits(model);
  const RealMatrix f = random_features(3, n, rng);
  const RealMatrix t = random_targets(3, n, rng);
  auto loss = [&](const std::vector<double>& x) {
    Model m = model;
    set_flat_params(m, x);
    return loss_and_grad(m, f, t).loss;
  };
  const auto lg = loss_and_grad(model, f, t);
  CHECK(lg.grad.size() == param_count(model));
  CHECK(allclose(lg.grad, central_differences(loss, flat_params(model)), rtol, 1e-8));
}

}  // namespace

TEST_CASE("mse_loss", "[optim]") {
  const RealMatrix p = RealMatrix::Random(3, 2);
  auto r = mse_loss(p, p);
  CHECK(r.loss == 0.0);
  CHECK(r.grad.isZero(0.0));

  RealMatrix one(1, 1), zero(1, 1);
  one << 1.0;
  zero << 0.0;
  r = mse_loss(one, zero);
  CHECK(r.loss == 1.0);
  CHECK(r.grad(0, 0) == 2.0);

  std::mt19937_64 rng(51);
  const RealMatrix pred = random_targets(4, 3, rng);
  const RealMatrix target = random_targets(4, 3, rng);
  std::vector<double> x(pred.data(), pred.data() + pred.size());
  auto f = [&](const std::vector<double>& v) {
    return mse_loss(Eigen::Map<const RealMatrix>(v.data(), 4, 3), target).loss;
  };
  const auto g = mse_loss(pred, target).grad;
  CHECK(allclose(std::vector<double>(g.data(), g.data() + g.size()), central_differences(f, x), 1e-6, 1e-10));
  CHECK_THROWS_AS(mse_loss(pred, RealMatrix::Zero(4, 2)), ContractError);
}

TEST_CASE("adam_step", "[optim]") {
  TrainConfig cfg;
  std::vector<double> p{0.5, -1.0};
  AdamState st(2);
  adam_step(p, std::vector<double>{0.0, 0.0}, st, cfg);
  CHECK(p == std::vector<double>{0.5, -1.0});
  CHECK(st.step_count == 1);

  cfg.learning_rate = 0.1;
  std::vector<double> q{0.0};
  AdamState s1(1);
  adam_step(q, std::vector<double>{1.0}, s1, cfg);
  CHECK(q[0] == Catch::Approx(-0.1).epsilon(1e-7));

  // Hand evaluation of the second step with g = 0.5.
  const double q1 = q[0];
  adam_step(q, std::vector<double>{0.5}, s1, cfg);
  const double m = 0.9 * 0.1 + 0.1 * 0.5;
  const double v = 0.999 * 0.001 + 0.001 * 0.25;
  const double mhat = m / (1 - 0.81), vhat = v / (1 - 0.999 * 0.999);
  CHECK(q[0] == Catch::Approx(q1 - 0.1 * mhat / (std::sqrt(vhat) + 1e-8)).epsilon(1e-12));

  AdamState bad(3);
  CHECK_THROWS_AS(adam_step(q, std::vector<double>{1.0}, bad, cfg), ContractError);
}

TEST_CASE("TrainConfig validation and JSON", "[optim]") {
  TrainConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.learning_rate == 0.01);
  CHECK(cfg.beta1 == 0.9);
  CHECK(cfg.beta2 == 0.999);
  CHECK(cfg.epsilon == 1e-8);
  for (auto mutate : std::vector<std::function<void(TrainConfig&)>>{
           [](TrainConfig& c) { c.learning_rate = 0; }, [](TrainConfig& c) { c.beta1 = 1.0; },
           [](TrainConfig& c) { c.beta2 = 0.0; },      [](TrainConfig& c) { c.epsilon = -1; },
           [](TrainConfig& c) { c.epochs = 0; },       [](TrainConfig& c) { c.batch_size = 0; }}) {
    TrainConfig c;
    mutate(c);
    CHECK_THROWS_AS(c.validate(), ContractError);
  }
  cfg.model_kind = ModelKind::Partitioned;
  cfg.partition_k = 2;
  cfg.seed = 77;
  cfg.init = InitKind::Zero;
  const TrainConfig back = train_config_from_json(nlohmann::json::parse(to_json(cfg).dump()));
  CHECK(to_json(back) == to_json(cfg));
  CHECK_THROWS_AS(train_config_from_json(nlohmann::json{{"epochs", "ten"}}), ParseError);
  CHECK_THROWS_AS(train_config_from_json(nlohmann::json{{"model_kind", "Tensor"}}), ParseError);
  CHECK_THROWS_AS(train_config_from_json(nlohmann::json::array()), ParseError);
}

TEST_CASE("make_model parameter counts", "[optim]") {
  TrainConfig cfg;
  for (int n = 1; n <= 10; ++n) {
    CHECK(param_count(make_model(cfg, n)) == (std::size_t{1} << (2 * n)));
  }
  cfg.model_kind = ModelKind::Partitioned;
  cfg.partition_k = 2;
  cfg.partition_layers = 3;
  CHECK(param_count(make_model(cfg, 8)) == 192);
  cfg.model_kind = ModelKind::Ansatz;
  CHECK(param_count(make_model(cfg, 3)) == 64);
  cfg.ansatz_params = 5;
  CHECK(param_count(make_model(cfg, 3)) == 5);
  CHECK(kind_of(make_model(cfg, 3)) == ModelKind::Ansatz);
}

TEST_CASE("random init has sigma 1/d", "[optim]") {
  TrainConfig cfg;
  cfg.seed = 4;
  const auto& full = std::get<FullUnitaryModel>(make_model(cfg, 5));
  double ss = 0.0;
  for (double t : full.params.theta()) ss += t * t;
  CHECK(std::sqrt(ss / 1024.0) == Catch::Approx(1.0 / 32).epsilon(0.1));
  cfg.init = InitKind::Zero;
  const auto& zero = std::get<FullUnitaryModel>(make_model(cfg, 2));
  CHECK(zero.params == lie::SkewHermitianParams::zeros(4));
}

TEST_CASE("loss_and_grad at the targets is zero", "[optim]") {
  std::mt19937_64 rng(52);
  TrainConfig cfg;
  const Model m = make_model(cfg, 3);
  const RealMatrix f = random_features(4, 3, rng);
  const auto lg = loss_and_grad(m, f, predict(m, f));
  CHECK(lg.loss == 0.0);
  for (double g : lg.grad) CHECK(g == 0.0);
  CHECK_THROWS_AS(loss_and_grad(m, random_features(4, 2, rng), RealMatrix::Zero(4, 2)), ContractError);
  CHECK_THROWS_AS(loss_and_grad(m, f, RealMatrix::Zero(3, 3)), ContractError);
}

TEST_CASE("FullUnitary gradient matches finite differences", "[optim][gradient]") {
  std::mt19937_64 rng(53);
  for (int n = 1; n <= 3; ++n) {
    TrainConfig cfg;
    cfg.seed = rng();
    Model m = make_model(cfg, n);
    // Larger coordinates than the default init, away from the identity.
    auto x = flat_params(m);
    for (double& v : x) v *= 20.0;
    set_flat_params(m, x);
    check_model_gradient(m, rng, 1e-4);
  }
}

TEST_CASE("Partitioned gradient matches finite differences", "[optim][gradient]") {
  std::mt19937_64 rng(54);
  for (int n = 1; n <= 3; ++n) {
    TrainConfig cfg;
    cfg.model_kind = ModelKind::Partitioned;
    cfg.partition_layers = 2;
    cfg.seed = rng();
    Model m = make_model(cfg, n);
    auto x = flat_params(m);
    for (double& v : x) v *= 5.0;
    set_flat_params(m, x);
    check_model_gradient(m, rng, 1e-4);
  }
}

TEST_CASE("Ansatz gradient matches finite differences", "[optim][gradient]") {
  std::mt19937_64 rng(55);
  check_model_gradient(circuit::AnsatzCircuit(2, {circuit::GateOp::rx(0, 0.4), circuit::GateOp::ry(1, -0.9)}),
                       rng, 1e-5);
  for (int n = 1; n <= 3; ++n) {
    TrainConfig cfg;
    cfg.model_kind = ModelKind::Ansatz;
    cfg.seed = rng();
    check_model_gradient(make_model(cfg, n), rng, 1e-4);
  }
}

TEST_CASE("identity dataset", "[optim]") {
  const auto ds = make_identity_dataset(3, 20, 9);
  CHECK(ds.features.rows() == 20);
  CHECK(ds.features.cols() == 3);
  CHECK(ds.features.cwiseAbs().maxCoeff() <= kPi / 2);
  CHECK((ds.targets - RealMatrix(ds.features.array().cos())).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(make_identity_dataset(3, 20, 9).features == ds.features);
  CHECK(make_identity_dataset(3, 20, 10).features != ds.features);
}

TEST_CASE("training from the identity stays at zero loss", "[optim]") {
  TrainConfig cfg;
  cfg.init = InitKind::Zero;
  cfg.epochs = 20;
  cfg.batch_size = 8;
  for (auto kind : {ModelKind::FullUnitary, ModelKind::Partitioned}) {
    cfg.model_kind = kind;
    const auto r = train_identity(cfg, 3, 16);
    for (double l : r.loss_curve) CHECK(l <= 1e-10);
    CHECK(r.final_loss <= 1e-10);
  }
}

TEST_CASE("train_identity report shape and determinism", "[optim]") {
  TrainConfig cfg;
  cfg.epochs = 30;
  cfg.batch_size = 4;
  cfg.seed = 3;
  const auto a = train_identity(cfg, 2, 8);
  CHECK(a.loss_curve.size() == 30);
  CHECK(a.epoch_times.size() == 30);
  CHECK(a.steps == 60);
  CHECK(a.loss_curve.back() < a.loss_curve.front());
  const auto b = train_identity(cfg, 2, 8);
  CHECK(a.loss_curve == b.loss_curve);
  CHECK(a.final_loss == b.final_loss);
  CHECK(to_json(a.final_model) == to_json(b.final_model));

  cfg.batch_size = 32;
  const auto single = train_identity(cfg, 2, 1);
  CHECK(single.dataset_size == 1);
  CHECK(single.steps == 30);

  const std::string csv = loss_curve_csv(a);
  CHECK(csv.rfind("epoch,loss,seconds\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 31);
}

TEST_CASE("each model kind learns the identity", "[optim]") {
  TrainConfig cfg;
  cfg.epochs = 300;
  cfg.batch_size = 16;
  cfg.learning_rate = 0.02;
  for (auto kind : {ModelKind::FullUnitary, ModelKind::Partitioned, ModelKind::Ansatz}) {
    cfg.model_kind = kind;
    const auto r = train_identity(cfg, 2, 16);
    INFO(to_string(kind));
    CHECK(r.final_loss < 0.5 * r.loss_curve.front());
  }
}

TEST_CASE("model JSON round trip", "[optim]") {
  TrainConfig cfg;
  for (auto kind : {ModelKind::FullUnitary, ModelKind::Partitioned, ModelKind::Ansatz}) {
    cfg.model_kind = kind;
    const Model m = make_model(cfg, 2);
    const Model back = model_from_json(nlohmann::json::parse(to_json(m).dump()));
    CHECK(back == m);
  }
  CHECK_THROWS_AS(model_from_json(nlohmann::json{{"model_kind", "FullUnitary"}}), ParseError);
  CHECK(model_kind_from_string("Partitioned") == ModelKind::Partitioned);
}
