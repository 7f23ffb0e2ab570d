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
#include <vector>

#include <json.hpp>

#include "unitary_forge/linalg.hpp"

namespace uf::lie {

// Real coordinates of a d x d skew-Hermitian matrix. Row-major over the upper
// triangle: each row r contributes its imaginary diagonal entry theta (X_rr =
// i*theta) followed by (re, im) pairs for X_rc, c > r. For d = 4 this gives
//
//   [ t1 i       t2+t3 i    t4+t5 i    t6+t7 i  ]
//   [ -t2+t3 i   t8 i       t9+t10 i   t11+t12 i]
//   [ ...                                       ]
class SkewHermitianParams {
 public:
  // Throws ContractError unless theta.size() == dim * dim.
  SkewHermitianParams(Eigen::Index dim, std::vector<double> theta);
  static SkewHermitianParams zeros(Eigen::Index dim);

  Eigen::Index dim() const { return dim_; }
  const std::vector<double>& theta() const { return theta_; }
  std::span<double> mutable_theta() { return theta_; }

  friend bool operator==(const SkewHermitianParams&, const SkewHermitianParams&) = default;

 private:
  Eigen::Index dim_;
  std::vector<double> theta_;
};

// Number of real parameters of u(d).
constexpr std::size_t param_count(std::size_t dim) { return dim * dim; }

linalg::ComplexMatrix assemble(const SkewHermitianParams& p);

// Inverse of assemble. Throws DomainError if X deviates from skew-Hermitian by
// more than 1e-10 (max-abs of X + X^H).
SkewHermitianParams disassemble(const linalg::ComplexMatrix& x);

// Pulls a matrix cotangent back through assemble: g_i = Re<X_bar, dX/dtheta_i>.
std::vector<double> param_grad(const linalg::ComplexMatrix& x_bar);

linalg::UnitaryMatrix to_unitary(const SkewHermitianParams& p);

// theta ~ Normal(0, 1/dim), seeded.
SkewHermitianParams random_params(Eigen::Index dim, std::uint64_t seed);
// theta ~ Normal(0, sigma), seeded.
SkewHermitianParams random_params(Eigen::Index dim, std::uint64_t seed, double sigma);

// {"dim": d, "theta": [...]}
nlohmann::json to_json(const SkewHermitianParams& p);
SkewHermitianParams params_from_json(const nlohmann::json& j);

}  // namespace uf::lie
