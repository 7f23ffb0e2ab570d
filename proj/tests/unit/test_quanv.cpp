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
#include "unitary_forge/liegroup.hpp"
#include "unitary_forge/quanv.hpp"

using namespace uf;
using namespace uf::testing;
using namespace uf::quanv;

namespace {

ImageBatch random_images(int b, int c, int h, int w, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-kPi / 2, kPi / 2);
  std::vector<double> px(static_cast<std::size_t>(b) * c * h * w);
  for (double& v : px) v = u(rng);
  return ImageBatch(b, c, h, w, px);
}

QuanvSpec small_spec(int in, int out, int block, bool random, std::uint64_t seed) {
  QuanvSpec s;
  s.in_channels = in;
  s.out_channels = out;
  s.channel_block = block;
  s.init_circuits(random, seed);
  return s;
}

// Direct evaluation of one output cell with dense operators.
double cell_oracle(const ImageBatch& img, const QuanvSpec& spec, int b, int o, int oy, int ox) {
  const int k = spec.kernel;
  double acc = 0.0;
  for (int blk = 0; blk < spec.n_blocks(); ++blk) {
    ComplexMatrix psi = ComplexMatrix::Zero(Eigen::Index{1} << (k * k), 1);
    psi(0, 0) = 1.0;
    for (int dy = 0; dy < k; ++dy) {
      for (int dx = 0; dx < k; ++dx) {
        double mean = 0.0;
        for (int c = blk * spec.channel_block; c < (blk + 1) * spec.channel_block; ++c) {
          mean += img.at(b, c, oy * spec.stride + dy, ox * spec.stride + dx);
        }
        mean /= spec.channel_block;
        psi = embed(k * k, {dy * k + dx}, rx2(mean)) * psi;
      }
    }
    const auto& p = spec.circuits[static_cast<std::size_t>(o * spec.n_blocks() + blk)];
    psi = taylor_expm(lie::assemble(p)) * psi;
    acc += z_expect(psi, k * k).mean();
  }
  return acc / spec.n_blocks();
}

}  // namespace

TEST_CASE("intensity_to_angle", "[quanv]") {
  CHECK(intensity_to_angle(0.0) == Catch::Approx(-kPi / 2));
  CHECK(intensity_to_angle(0.5) == 0.0);
  CHECK(intensity_to_angle(1.0) == Catch::Approx(kPi / 2));
  CHECK_THROWS_AS(intensity_to_angle(1.2), DomainError);
  CHECK_THROWS_AS(intensity_to_angle(-0.1), DomainError);
}

TEST_CASE("ImageBatch enforces the pixel range and shape", "[quanv]") {
  CHECK_THROWS_AS(ImageBatch(1, 1, 1, 1, {2.0}), DomainError);
  CHECK_THROWS_AS(ImageBatch(1, 1, 2, 2, {0.0}), ContractError);
  CHECK_THROWS_AS(ImageBatch(0, 1, 1, 1, {}), ContractError);
  const ImageBatch img(3, 1, 1, 2, {0, 0.1, 0.2, 0.3, 0.4, 0.5});
  const auto s = img.slice(1, 2);
  CHECK(s.batch() == 2);
  CHECK(s.at(1, 0, 0, 1) == 0.5);
  CHECK_THROWS_AS(img.slice(2, 2), ContractError);
}

TEST_CASE("extract_patches", "[quanv]") {
  std::mt19937_64 rng(61);
  const auto one = extract_patches(random_images(1, 3, 2, 2, rng), 2, 1);
  CHECK(one.out_height == 1);
  CHECK(one.out_width == 1);
  CHECK(one.values.size() == 3 * 4);
  const auto four = extract_patches(random_images(1, 1, 3, 3, rng), 2, 1);
  CHECK(four.out_height * four.out_width == 4);

  for (int stride : {1, 2, 3}) {
    const auto img = random_images(2, 3, 7, 6, rng);
    const auto p = extract_patches(img, 2, stride);
    CHECK(p.out_height == (7 - 2) / stride + 1);
    CHECK(p.out_width == (6 - 2) / stride + 1);
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 3; ++c)
        for (int oy = 0; oy < p.out_height; ++oy)
          for (int ox = 0; ox < p.out_width; ++ox)
            for (int dy = 0; dy < 2; ++dy)
              for (int dx = 0; dx < 2; ++dx)
                CHECK(p.at(b, c, oy, ox, dy, dx) == img.at(b, c, oy * stride + dy, ox * stride + dx));
  }
  CHECK_THROWS_AS(extract_patches(random_images(1, 1, 2, 2, rng), 3, 1), ContractError);
}

TEST_CASE("QuanvSpec defaults and validation", "[quanv]") {
  QuanvSpec s;
  CHECK(s.in_channels == 16);
  CHECK(s.out_channels == 8);
  CHECK(s.kernel == 2);
  CHECK(s.stride == 1);
  CHECK(s.n_qubits() == 4);
  CHECK(s.n_circuits() == 32);
  s.init_circuits(true, 1);
  CHECK_NOTHROW(s.validate());
  CHECK(s.circuits.size() == 32);
  CHECK(s.circuits[0].dim() == 16);
  const QuanvSpec back = quanv_spec_from_json(nlohmann::json::parse(to_json(s).dump()));
  CHECK(back.circuits == s.circuits);
  s.channel_block = 3;
  CHECK_THROWS_AS(s.validate(), ContractError);
  CHECK_THROWS_AS(quanv_spec_from_json(nlohmann::json{{"kernel", "two"}}), ParseError);
}

TEST_CASE("quanv_forward closed cases", "[quanv]") {
  const double v = 0.6;
  const auto spec0 = small_spec(8, 3, 4, false, 0);
  const auto out = quanv_forward(ImageBatch(1, 8, 4, 5, std::vector<double>(8 * 20, v)), spec0);
  CHECK(out.channels == 3);
  CHECK(out.height == 3);
  CHECK(out.width == 4);
  for (double x : out.values) CHECK(x == Catch::Approx(std::cos(v)).margin(1e-13));

  const auto spec = small_spec(8, 2, 4, true, 5);
  const auto zero = quanv_forward(ImageBatch(1, 8, 4, 4, std::vector<double>(8 * 16, 0.0)), spec);
  for (int o = 0; o < 2; ++o) {
    const double first = zero.at(0, o, 0, 0);
    for (int y = 0; y < 3; ++y)
      for (int x = 0; x < 3; ++x) CHECK(zero.at(0, o, y, x) == Catch::Approx(first).margin(1e-14));
    CHECK(first == Catch::Approx(cell_oracle(ImageBatch(1, 8, 2, 2, std::vector<double>(32, 0.0)), spec, 0, o, 0, 0))
                       .margin(1e-12));
  }
}

TEST_CASE("quanv_forward matches the direct circuit oracle", "[quanv]") {
  std::mt19937_64 rng(62);
  const auto spec = small_spec(8, 2, 4, true, 6);
  const auto single = random_images(2, 8, 2, 2, rng);
  const auto out = quanv_forward(single, spec);
  for (int b = 0; b < 2; ++b)
    for (int o = 0; o < 2; ++o) CHECK(out.at(b, o, 0, 0) == Catch::Approx(cell_oracle(single, spec, b, o, 0, 0)).margin(1e-12));

  const auto img = random_images(1, 8, 5, 4, rng);
  const auto full = quanv_forward(img, spec);
  for (int o = 0; o < 2; ++o)
    for (int y = 0; y < 4; ++y)
      for (int x = 0; x < 3; ++x) CHECK(full.at(0, o, y, x) == Catch::Approx(cell_oracle(img, spec, 0, o, y, x)).margin(1e-12));
}

TEST_CASE("quanv_forward is translation consistent and bounded", "[quanv][property]") {
  std::mt19937_64 rng(63);
  QuanvSpec spec = small_spec(4, 2, 4, true, 7);
  for (int stride : {1, 2}) {
    spec.stride = stride;
    const auto img = random_images(1, 4, 6, 8, rng);
    // Shift right by one stride; the vacated columns repeat column 0.
    std::vector<double> shifted(img.pixels().size());
    for (int c = 0; c < 4; ++c)
      for (int y = 0; y < 6; ++y)
        for (int x = 0; x < 8; ++x)
          shifted[(static_cast<std::size_t>(c) * 6 + y) * 8 + x] = img.at(0, c, y, std::max(0, x - stride));
    const auto a = quanv_forward(img, spec);
    const auto b = quanv_forward(ImageBatch(1, 4, 6, 8, shifted), spec);
    for (int o = 0; o < 2; ++o)
      for (int y = 0; y < a.height; ++y)
        for (int x = 0; x + 1 < a.width; ++x) CHECK(b.at(0, o, y, x + 1) == Catch::Approx(a.at(0, o, y, x)).margin(1e-13));
    for (double v : a.values) CHECK(std::abs(v) <= 1.0 + 1e-12);
  }
}

TEST_CASE("bright-half dataset", "[quanv]") {
  const auto d = make_bright_half_dataset(10, 2, 4, 3, 0.1, 1);
  CHECK(d.n_classes == 2);
  CHECK(d.labels == std::vector<int>{0, 1, 0, 1, 0, 1, 0, 1, 0, 1});
  CHECK(d.images.at(0, 0, 0, 0) > 0.0);
  CHECK(d.images.at(0, 0, 3, 0) < 0.0);
  CHECK(d.images.at(1, 1, 0, 2) < 0.0);
  CHECK(d.images.at(1, 1, 3, 2) > 0.0);
  CHECK(make_bright_half_dataset(10, 2, 4, 3, 0.1, 1).images.pixels() == d.images.pixels());
  CHECK_THROWS_AS(make_bright_half_dataset(10, 2, 4, 3, 0.5, 1), ContractError);
}

TEST_CASE("CSV dataset parsing", "[quanv]") {
  const auto d = parse_csv_dataset("label,p0,p1\n0,0,1\n1,0.5,0.25\r\n\n", 1, 1, 2);
  CHECK(d.labels == std::vector<int>{0, 1});
  CHECK(d.n_classes == 2);
  CHECK(d.images.at(0, 0, 0, 0) == Catch::Approx(-kPi / 2));
  CHECK(d.images.at(1, 0, 0, 0) == 0.0);
  CHECK_THROWS_AS(parse_csv_dataset("0,0.1\n1,0.2\n", 1, 1, 2), ParseError);
  CHECK_THROWS_AS(parse_csv_dataset("0,0.1,0.2\n1,0.2,x\n", 1, 1, 2), ParseError);
  CHECK_THROWS_AS(parse_csv_dataset("0.5,0.1,0.2\n1,0.2,0.3\n", 1, 1, 2), ParseError);
  CHECK_THROWS_AS(parse_csv_dataset("0,0.1,0.2\n0,0.2,0.3\n", 1, 1, 2), ParseError);
  CHECK_THROWS_AS(parse_csv_dataset("", 1, 1, 2), ParseError);
  CHECK_THROWS_AS(parse_csv_dataset("0,0.1,1.5\n1,0.2,0.3\n", 1, 1, 2), ParseError);
  CHECK_THROWS_AS(load_csv_dataset("/nonexistent/file.csv", 1, 1, 2), ParseError);
}

TEST_CASE("QuanvClassifier starts at chance and its gradient matches finite differences", "[quanv][gradient]") {
  const auto data = make_bright_half_dataset(4, 4, 3, 3, 0.1, 2);
  QuanvClassifier clf(small_spec(4, 2, 2, true, 3), 3, 3, 2);
  CHECK(clf.n_features() == 2 * 2 * 2);
  CHECK(clf.param_count() == 4 * 256 + 2 * 8 + 2);
  CHECK(clf.accuracy(data) == 0.5);

  std::mt19937_64 rng(64);
  std::normal_distribution<double> n(0.0, 0.3);
  auto x = clf.flat_params();
  for (double& v : x) v += n(rng);
  clf.set_flat_params(x);
  const auto lg = clf.loss_and_grad(data.images, data.labels);
  auto f = [&](const std::vector<double>& p) {
    QuanvClassifier c = clf;
    c.set_flat_params(p);
    return c.loss_and_grad(data.images, data.labels).loss;
  };
  CHECK(allclose(lg.grad, central_differences(f, x), 1e-4, 1e-8));
  CHECK_THROWS_AS(clf.set_flat_params(std::vector<double>(3)), ContractError);
  CHECK_THROWS_AS(clf.loss_and_grad(data.images, std::vector<int>{0}), ContractError);
}

TEST_CASE("train_quanv_demo small run", "[quanv]") {
  const auto data = make_bright_half_dataset(8, 4, 4, 4, 0.1, 3);
  optim::TrainConfig cfg;
  cfg.epochs = 15;
  cfg.batch_size = 4;
  cfg.learning_rate = 0.05;
  QuanvSpec spec;
  spec.in_channels = 4;
  spec.out_channels = 2;
  const auto r = train_quanv_demo(data, spec, cfg);
  CHECK(r.accuracy_curve.size() == 15);
  CHECK(r.loss_curve.size() == 15);
  CHECK(r.initial_accuracy == 0.5);
  CHECK(r.accuracy_curve.back() >= 0.9);
  CHECK(r.n_circuits == 2);
  const auto again = train_quanv_demo(data, spec, cfg);
  CHECK(again.loss_curve == r.loss_curve);
  CHECK(to_json(r).at("final_accuracy") == r.accuracy_curve.back());
}
