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

#include "unitary_forge/linalg.hpp"

#include <array>
#include <cmath>
#include <random>
#include <string>

#include "unitary_forge/errors.hpp"

namespace uf::linalg {
namespace {

// Higham (2005) degree thresholds for double precision.
constexpr std::array<double, 5> kTheta = {1.495585217958292e-2, 2.539398330063230e-1,
                                          9.504178996162932e-1, 2.097847961257068e0,
                                          5.371920351148152e0};
constexpr std::array<int, 5> kDegrees = {3, 5, 7, 9, 13};

constexpr std::array<double, 14> kB13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};

const double* pade_coefficients(int m) {
  static constexpr double b3[] = {120.0, 60.0, 12.0, 1.0};
  static constexpr double b5[] = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
  static constexpr double b7[] = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                  25200.0,    1512.0,    56.0,      1.0};
  static constexpr double b9[] = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0,
                                  30270240.0,    2162160.0,    110880.0,     3960.0,
                                  90.0,          1.0};
  switch (m) {
    case 3: return b3;
    case 5: return b5;
    case 7: return b7;
    case 9: return b9;
    default: return kB13.data();
  }
}

// Dense d x d evaluation.
struct DenseOps {
  using Value = ComplexMatrix;

  static Value mul(const Value& a, const Value& b) {
    Value r(a.rows(), b.cols());
    r.noalias() = a * b;
    return r;
  }
  static Value identity(const Value& like) { return Value::Identity(like.rows(), like.cols()); }
  static Value zero(const Value& like) { return Value::Zero(like.rows(), like.cols()); }
  static void axpy(Value& y, double alpha, const Value& x) { y += alpha * x; }
  static Value scaled(const Value& x, double alpha) { return alpha * x; }
  static Value sub(const Value& x, const Value& y) { return x - y; }
  static Value add(const Value& x, const Value& y) { return x + y; }
  // Solves p * X = q.
  static Value solve(const Value& p, const Value& q) { return p.partialPivLu().solve(q); }
};

// Block upper-triangular matrices [[D, F], [0, D]], closed under the ring
// operations used by the Pade evaluation. F carries the Frechet derivative.
struct BlockTriangular {
  ComplexMatrix diag;
  ComplexMatrix upper;
};

struct BlockOps {
  using Value = BlockTriangular;

  static Value mul(const Value& a, const Value& b) {
    Value r{ComplexMatrix(a.diag.rows(), b.diag.cols()), ComplexMatrix(a.diag.rows(), b.diag.cols())};
    r.diag.noalias() = a.diag * b.diag;
    r.upper.noalias() = a.diag * b.upper;
    r.upper.noalias() += a.upper * b.diag;
    return r;
  }
  static Value identity(const Value& like) {
    return {ComplexMatrix::Identity(like.diag.rows(), like.diag.cols()),
            ComplexMatrix::Zero(like.diag.rows(), like.diag.cols())};
  }
  static Value zero(const Value& like) {
    return {ComplexMatrix::Zero(like.diag.rows(), like.diag.cols()),
            ComplexMatrix::Zero(like.diag.rows(), like.diag.cols())};
  }
  static void axpy(Value& y, double alpha, const Value& x) {
    y.diag += alpha * x.diag;
    y.upper += alpha * x.upper;
  }
  static Value scaled(const Value& x, double alpha) { return {alpha * x.diag, alpha * x.upper}; }
  static Value sub(const Value& x, const Value& y) { return {x.diag - y.diag, x.upper - y.upper}; }
  static Value add(const Value& x, const Value& y) { return {x.diag + y.diag, x.upper + y.upper}; }
  // [[P, Q], [0, P]] X = [[R, S], [0, R]]  =>  X = [[P\R, P\(S - Q (P\R))], [0, P\R]].
  static Value solve(const Value& p, const Value& q) {
    Eigen::PartialPivLU<ComplexMatrix> lu(p.diag);
    Value x;
    x.diag = lu.solve(q.diag);
    ComplexMatrix rhs = q.upper;
    rhs.noalias() -= p.upper * x.diag;
    x.upper = lu.solve(rhs);
    return x;
  }
};

template <class Ops>
typename Ops::Value pade_exp(const typename Ops::Value& a, double norm1) {
  using Value = typename Ops::Value;

  int degree = 13;
  int squarings = 0;
  for (std::size_t i = 0; i + 1 < kDegrees.size(); ++i) {
    if (norm1 <= kTheta[i]) {
      degree = kDegrees[i];
      break;
    }
  }
  if (degree == 13 && norm1 > kTheta.back()) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / kTheta.back())));
  }

  const Value as = squarings > 0 ? Ops::scaled(a, std::ldexp(1.0, -squarings)) : a;
  const double* b = pade_coefficients(degree);
  const Value ident = Ops::identity(as);
  const Value a2 = Ops::mul(as, as);

  Value u_inner = Ops::zero(as);
  Value v = Ops::zero(as);
  if (degree == 13) {
    const Value a4 = Ops::mul(a2, a2);
    const Value a6 = Ops::mul(a4, a2);
    Value hi_u = Ops::scaled(a6, b[13]);
    Ops::axpy(hi_u, b[11], a4);
    Ops::axpy(hi_u, b[9], a2);
    u_inner = Ops::mul(a6, hi_u);
    Ops::axpy(u_inner, b[7], a6);
    Ops::axpy(u_inner, b[5], a4);
    Ops::axpy(u_inner, b[3], a2);
    Ops::axpy(u_inner, b[1], ident);

    Value hi_v = Ops::scaled(a6, b[12]);
    Ops::axpy(hi_v, b[10], a4);
    Ops::axpy(hi_v, b[8], a2);
    v = Ops::mul(a6, hi_v);
    Ops::axpy(v, b[6], a6);
    Ops::axpy(v, b[4], a4);
    Ops::axpy(v, b[2], a2);
    Ops::axpy(v, b[0], ident);
  } else {
    // Even powers A^0, A^2, ..., A^(degree-1).
    Ops::axpy(u_inner, b[1], ident);
    Ops::axpy(v, b[0], ident);
    Value power = a2;
    for (int j = 2; j < degree; j += 2) {
      if (j > 2) power = Ops::mul(power, a2);
      Ops::axpy(u_inner, b[j + 1], power);
      Ops::axpy(v, b[j], power);
    }
  }
  const Value u = Ops::mul(as, u_inner);

  Value r = Ops::solve(Ops::sub(v, u), Ops::add(v, u));
  for (int i = 0; i < squarings; ++i) r = Ops::mul(r, r);
  return r;
}

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw ContractError(std::string(what) + ": expected a non-empty square matrix, got " +
                        std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

void require_finite(const ComplexMatrix& m, const char* what) {
  if (!all_finite(m)) throw DomainError(std::string(what) + ": matrix has non-finite entries");
}

}  // namespace

UnitaryMatrix::UnitaryMatrix(ComplexMatrix m) : m_(std::move(m)) {
  require_square(m_, "UnitaryMatrix");
  const double err = unitarity_error(m_);
  if (!(err <= kUnitarityTolerance)) {
    throw DomainError("UnitaryMatrix: unitarity error " + std::to_string(err) +
                      " exceeds tolerance");
  }
}

UnitaryMatrix UnitaryMatrix::adjoint() const { return UnitaryMatrix(m_.adjoint(), Trusted{}); }

bool all_finite(const ComplexMatrix& m) {
  const auto* p = m.data();
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    if (!std::isfinite(p[i].real()) || !std::isfinite(p[i].imag())) return false;
  }
  return true;
}

ComplexMatrix matexp(const ComplexMatrix& a) {
  require_square(a, "matexp");
  require_finite(a, "matexp");
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  if (norm1 == 0.0) return ComplexMatrix::Identity(a.rows(), a.cols());
  return pade_exp<DenseOps>(a, norm1);
}

ExpWithDerivative matexp_frechet(const ComplexMatrix& a, const ComplexMatrix& e) {
  require_square(a, "matexp_frechet");
  if (e.rows() != a.rows() || e.cols() != a.cols()) {
    throw ContractError("matexp_frechet: direction has dimension " + std::to_string(e.rows()) +
                        "x" + std::to_string(e.cols()) + ", expected " +
                        std::to_string(a.rows()));
  }
  require_finite(a, "matexp_frechet");
  require_finite(e, "matexp_frechet");
  // Degree and scaling follow A alone; the derivative block is linear in E.
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  if (norm1 == 0.0) return {ComplexMatrix::Identity(a.rows(), a.cols()), e};
  BlockTriangular r = pade_exp<BlockOps>(BlockTriangular{a, e}, norm1);
  return {std::move(r.diag), std::move(r.upper)};
}

ComplexMatrix matexp_vjp(const ComplexMatrix& a, const ComplexMatrix& cotangent) {
  require_square(a, "matexp_vjp");
  if (cotangent.rows() != a.rows() || cotangent.cols() != a.cols()) {
    throw ContractError("matexp_vjp: cotangent dimension does not match A");
  }
  return matexp_frechet(a.adjoint(), cotangent).derivative;
}

double unitarity_error(const ComplexMatrix& m) {
  require_square(m, "unitarity_error");
  ComplexMatrix g(m.cols(), m.cols());
  g.noalias() = m.adjoint() * m;
  g.diagonal().array() -= 1.0;
  return g.cwiseAbs().maxCoeff();
}

double real_inner(const ComplexMatrix& x, const ComplexMatrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw ContractError("real_inner: shape mismatch");
  }
  // sum conj(x_ij) y_ij
  return (x.array().conjugate() * y.array()).sum().real();
}

UnitaryMatrix random_unitary(Eigen::Index d, std::uint64_t seed) {
  if (d < 1) throw ContractError("random_unitary: dimension must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix x(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      x(i, j) = Complex(re, im);
    }
  }
  const ComplexMatrix skew = x - x.adjoint();
  return UnitaryMatrix(matexp(skew));
}

}  // namespace uf::linalg
