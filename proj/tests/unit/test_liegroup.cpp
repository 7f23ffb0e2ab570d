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

using namespace uf;
using namespace uf::testing;
using lie::SkewHermitianParams;

namespace {

SkewHermitianParams random_p(Eigen::Index d, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  std::vector<double> theta(static_cast<std::size_t>(d * d));
  for (double& t : theta) t = n(rng);
  return SkewHermitianParams(d, theta);
}

}  // namespace

TEST_CASE("assemble follows the row-major generator layout", "[liegroup]") {
  std::vector<double> theta(16);
  for (int i = 0; i < 16; ++i) theta[i] = i + 1;
  const auto x = lie::assemble(SkewHermitianParams(4, theta));
  const Cd i(0.0, 1.0);
  CHECK(x(0, 0) == 1.0 * i);
  CHECK(x(0, 1) == 2.0 + 3.0 * i);
  CHECK(x(1, 0) == -2.0 + 3.0 * i);
  CHECK(x(0, 2) == 4.0 + 5.0 * i);
  CHECK(x(0, 3) == 6.0 + 7.0 * i);
  CHECK(x(1, 1) == 8.0 * i);
  CHECK(x(1, 2) == 9.0 + 10.0 * i);
  CHECK(x(1, 3) == 11.0 + 12.0 * i);
  CHECK(x(2, 2) == 13.0 * i);
  CHECK(x(2, 3) == 14.0 + 15.0 * i);
  CHECK(x(3, 2) == -14.0 + 15.0 * i);
  CHECK(x(3, 3) == 16.0 * i);
}

TEST_CASE("assemble small cases", "[liegroup]") {
  const Cd i(0.0, 1.0);
  auto x = lie::assemble(SkewHermitianParams(2, {1, 0, 0, 0}));
  CHECK(x(0, 0) == i);
  CHECK(x(0, 1) == 0.0);
  CHECK(x(1, 1) == 0.0);
  x = lie::assemble(SkewHermitianParams(2, {0, 1, 2, 0}));
  CHECK(x(0, 1) == 1.0 + 2.0 * i);
  CHECK(x(1, 0) == -1.0 + 2.0 * i);
  CHECK(lie::assemble(SkewHermitianParams::zeros(5)).isZero(0.0));
  CHECK_THROWS_AS(SkewHermitianParams(2, {1, 2, 3}), ContractError);
  CHECK_THROWS_AS(SkewHermitianParams(0, {}), ContractError);
}

TEST_CASE("assemble output is exactly skew-Hermitian", "[liegroup][property]") {
  std::mt19937_64 rng(21);
  for (Eigen::Index d : {1, 2, 3, 4, 7, 16}) {
    const auto x = lie::assemble(random_p(d, rng));
    CHECK((x + x.adjoint()).isZero(0.0));
  }
}

TEST_CASE("disassemble inverts assemble exactly", "[liegroup][property]") {
  std::mt19937_64 rng(22);
  for (Eigen::Index d : {1, 2, 4, 8}) {
    const auto p = random_p(d, rng);
    CHECK(lie::disassemble(lie::assemble(p)) == p);
    const auto x = random_skew_hermitian(d, rng);
    // Diagonal of a skew-Hermitian matrix is purely imaginary up to rounding.
    ComplexMatrix clean = x;
    for (Eigen::Index k = 0; k < d; ++k) clean(k, k) = Cd(0.0, clean(k, k).imag());
    CHECK(lie::assemble(lie::disassemble(clean)) == clean);
  }
  CHECK(lie::disassemble(ComplexMatrix::Zero(3, 3)) == SkewHermitianParams::zeros(3));
  ComplexMatrix d2 = ComplexMatrix::Zero(2, 2);
  d2(0, 0) = {0.0, 1.0};
  d2(1, 1) = {0.0, -1.0};
  CHECK(lie::disassemble(d2).theta() == std::vector<double>{1, 0, 0, -1});
}

TEST_CASE("disassemble rejects non-skew-Hermitian input", "[liegroup]") {
  CHECK_THROWS_AS(lie::disassemble(ComplexMatrix::Identity(2, 2)), DomainError);
  ComplexMatrix x = ComplexMatrix::Zero(2, 2);
  x(0, 1) = 1.0;
  CHECK_THROWS_AS(lie::disassemble(x), DomainError);
  CHECK_THROWS_AS(lie::disassemble(ComplexMatrix::Zero(2, 3)), ContractError);
}

TEST_CASE("param_grad is the chain rule through assemble", "[liegroup]") {
  CHECK(lie::param_grad(ComplexMatrix::Zero(3, 3)) == std::vector<double>(9, 0.0));
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a(0, 0) = {0.0, 1.0};
  CHECK(lie::param_grad(a) == std::vector<double>{1, 0, 0, 0});

  std::mt19937_64 rng(23);
  for (Eigen::Index d : {1, 2, 4}) {
    const ComplexMatrix bar = random_complex(d, d, rng);
    auto f = [&](const std::vector<double>& t) {
      return linalg::real_inner(bar, lie::assemble(SkewHermitianParams(d, t)));
    };
    const auto p = random_p(d, rng);
    CHECK(allclose(lie::param_grad(bar), central_differences(f, p.theta()), 1e-6, 1e-9));
  }
}

TEST_CASE("end-to-end gradient through to_unitary matches finite differences", "[liegroup][property]") {
  std::mt19937_64 rng(24);
  for (Eigen::Index d : {1, 2, 4, 8}) {
    const auto p = random_p(d, rng, 0.5);
    const ComplexMatrix g = random_complex(d, d, rng);
    auto f = [&](const std::vector<double>& t) {
      return linalg::real_inner(g, lie::to_unitary(SkewHermitianParams(d, t)).matrix());
    };
    const auto grad = lie::param_grad(linalg::matexp_vjp(lie::assemble(p), g));
    CHECK(allclose(grad, central_differences(f, p.theta()), 1e-4, 1e-8));
  }
}

TEST_CASE("to_unitary", "[liegroup]") {
  CHECK(lie::to_unitary(SkewHermitianParams::zeros(4)).matrix() == ComplexMatrix::Identity(4, 4));
  const double t = 0.7;
  const auto u = lie::to_unitary(SkewHermitianParams(2, {0, t, 0, 0})).matrix();
  CHECK(std::abs(u(0, 0) - Cd(std::cos(t), 0)) < 1e-14);
  CHECK(std::abs(u(1, 1) - Cd(std::cos(t), 0)) < 1e-14);
  CHECK(std::abs(u(0, 1) - Cd(std::sin(t), 0)) < 1e-14);
  CHECK(std::abs(u(1, 0) - Cd(-std::sin(t), 0)) < 1e-14);
  CHECK(lie::param_count(32) == 1024);
  CHECK(SkewHermitianParams::zeros(32).theta().size() == 1024);
}

TEST_CASE("random_params scale and determinism", "[liegroup]") {
  const auto a = lie::random_params(16, 3);
  CHECK(a == lie::random_params(16, 3));
  CHECK(!(a == lie::random_params(16, 4)));
  double ss = 0.0;
  for (double t : a.theta()) ss += t * t;
  const double sigma = std::sqrt(ss / static_cast<double>(a.theta().size()));
  CHECK(sigma == Catch::Approx(1.0 / 16).epsilon(0.1));
}

TEST_CASE("params JSON round trip", "[liegroup]") {
  std::mt19937_64 rng(25);
  const auto p = random_p(4, rng);
  const auto j = lie::to_json(p);
  CHECK(j.at("dim") == 4);
  CHECK(lie::params_from_json(nlohmann::json::parse(j.dump())) == p);
  CHECK_THROWS_AS(lie::params_from_json(nlohmann::json{{"dim", 2}, {"theta", {1, 2}}}), ContractError);
  CHECK_THROWS_AS(lie::params_from_json(nlohmann::json{{"theta", {1}}}), ParseError);
}
