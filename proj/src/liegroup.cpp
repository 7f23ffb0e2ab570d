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

#include "unitary_forge/liegroup.hpp"

#include <cmath>
#include <random>
#include <string>

#include "unitary_forge/errors.hpp"

namespace uf::lie {

using linalg::Complex;
using linalg::ComplexMatrix;

SkewHermitianParams::SkewHermitianParams(Eigen::Index dim, std::vector<double> theta)
    : dim_(dim), theta_(std::move(theta)) {
  if (dim_ < 1) throw ContractError("SkewHermitianParams: dim must be >= 1");
  const auto expected = param_count(static_cast<std::size_t>(dim_));
  if (theta_.size() != expected) {
    throw ContractError("SkewHermitianParams: expected " + std::to_string(expected) +
                        " parameters for dim " + std::to_string(dim_) + ", got " +
                        std::to_string(theta_.size()));
  }
}

SkewHermitianParams SkewHermitianParams::zeros(Eigen::Index dim) {
  if (dim < 1) throw ContractError("SkewHermitianParams: dim must be >= 1");
  return SkewHermitianParams(dim, std::vector<double>(param_count(static_cast<std::size_t>(dim)), 0.0));
}

ComplexMatrix assemble(const SkewHermitianParams& p) {
  const Eigen::Index d = p.dim();
  const auto& t = p.theta();
  ComplexMatrix x(d, d);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < d; ++r) {
    x(r, r) = Complex(0.0, t[k++]);
    for (Eigen::Index c = r + 1; c < d; ++c) {
      const double re = t[k++];
      const double im = t[k++];
      x(r, c) = Complex(re, im);
      x(c, r) = Complex(-re, im);
    }
  }
  return x;
}

SkewHermitianParams disassemble(const ComplexMatrix& x) {
  if (x.rows() != x.cols() || x.rows() < 1) {
    throw ContractError("disassemble: expected a non-empty square matrix");
  }
  if (!linalg::all_finite(x)) throw DomainError("disassemble: non-finite entries");
  const double dev = (x + x.adjoint()).cwiseAbs().maxCoeff();
  if (dev > 1e-10) {
    throw DomainError("disassemble: matrix is not skew-Hermitian (deviation " +
                      std::to_string(dev) + ")");
  }
  const Eigen::Index d = x.rows();
  std::vector<double> t;
  t.reserve(param_count(static_cast<std::size_t>(d)));
  for (Eigen::Index r = 0; r < d; ++r) {
    t.push_back(x(r, r).imag());
    for (Eigen::Index c = r + 1; c < d; ++c) {
      t.push_back(x(r, c).real());
      t.push_back(x(r, c).imag());
    }
  }
  return SkewHermitianParams(d, std::move(t));
}

std::vector<double> param_grad(const ComplexMatrix& x_bar) {
  if (x_bar.rows() != x_bar.cols() || x_bar.rows() < 1) {
    throw ContractError("param_grad: expected a non-empty square matrix");
  }
  const Eigen::Index d = x_bar.rows();
  std::vector<double> g;
  g.reserve(param_count(static_cast<std::size_t>(d)));
  for (Eigen::Index r = 0; r < d; ++r) {
    // dX/dtheta = i e_rr
    g.push_back(x_bar(r, r).imag());
    for (Eigen::Index c = r + 1; c < d; ++c) {
      // re: +1 at (r,c), -1 at (c,r); im: +i at both.
      g.push_back(x_bar(r, c).real() - x_bar(c, r).real());
      g.push_back(x_bar(r, c).imag() + x_bar(c, r).imag());
    }
  }
  return g;
}

linalg::UnitaryMatrix to_unitary(const SkewHermitianParams& p) {
  return linalg::UnitaryMatrix(linalg::matexp(assemble(p)));
}

SkewHermitianParams random_params(Eigen::Index dim, std::uint64_t seed) {
  return random_params(dim, seed, 1.0 / static_cast<double>(dim));
}

SkewHermitianParams random_params(Eigen::Index dim, std::uint64_t seed, double sigma) {
  if (dim < 1) throw ContractError("random_params: dim must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  std::vector<double> t(param_count(static_cast<std::size_t>(dim)));
  for (double& v : t) v = normal(rng);
  return SkewHermitianParams(dim, std::move(t));
}

nlohmann::json to_json(const SkewHermitianParams& p) {
  return nlohmann::json{{"dim", p.dim()}, {"theta", p.theta()}};
}

SkewHermitianParams params_from_json(const nlohmann::json& j) {
  try {
    return SkewHermitianParams(j.at("dim").get<Eigen::Index>(),
                               j.at("theta").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("params: ") + e.what());
  }
}

}  // namespace uf::lie
