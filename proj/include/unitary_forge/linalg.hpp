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

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

namespace uf::linalg {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Largest tolerated max-abs entry of (M^H M - I) for a matrix to count as
// unitary.
inline constexpr double kUnitarityTolerance = 1e-6;

// A square complex matrix that passed the unitarity check at construction.
class UnitaryMatrix {
 public:
  // Throws DomainError if unitarity_error(m) > kUnitarityTolerance.
  explicit UnitaryMatrix(ComplexMatrix m);

  Eigen::Index dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }
  UnitaryMatrix adjoint() const;

 private:
  struct Trusted {};
  UnitaryMatrix(ComplexMatrix m, Trusted) : m_(std::move(m)) {}

  ComplexMatrix m_;
};

// exp(A) by scaling and squaring with a diagonal Pade approximant of degree
// 3, 5, 7, 9 or 13, picked from the 1-norm of A.
ComplexMatrix matexp(const ComplexMatrix& a);

// Simultaneous exp(A) and Frechet derivative L(A, E) = d/dt exp(A + tE)|_0.
// Equivalent to the diagonal and upper-right blocks of exp([[A, E], [0, A]]);
// evaluated with the block-triangular structure kept implicit.
struct ExpWithDerivative {
  ComplexMatrix exp;
  ComplexMatrix derivative;
};
ExpWithDerivative matexp_frechet(const ComplexMatrix& a, const ComplexMatrix& e);

// Vector-Jacobian product of the matrix exponential. With the real inner
// product <X, Y> = Re tr(X^H Y), returns A_bar such that
//   Re<G, L(A, E)> = Re<A_bar, E>   for every E,
// i.e. A_bar = L(A^H, G), the upper-right block of exp([[A^H, G], [0, A^H]]).
ComplexMatrix matexp_vjp(const ComplexMatrix& a, const ComplexMatrix& cotangent);

// max_ij |(M^H M - I)_ij|.
double unitarity_error(const ComplexMatrix& m);

// Re tr(X^H Y).
double real_inner(const ComplexMatrix& x, const ComplexMatrix& y);

// exp(X - X^H) for X with i.i.d. standard complex normal entries.
UnitaryMatrix random_unitary(Eigen::Index d, std::uint64_t seed);

bool all_finite(const ComplexMatrix& m);

}  // namespace uf::linalg
