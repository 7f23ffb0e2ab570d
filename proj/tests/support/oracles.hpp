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

// Reference implementations used only by the tests. They trade speed for
// transparency: dense operators, extended precision, finite differences.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "unitary_forge/circuit.hpp"
#include "unitary_forge/linalg.hpp"

namespace uf::testing {

using Cd = std::complex<double>;
using Cld = std::complex<long double>;
using MatrixXcld = Eigen::Matrix<Cld, Eigen::Dynamic, Eigen::Dynamic>;
using linalg::ComplexMatrix;

inline constexpr double kPi = 3.14159265358979323846;

// exp(A) by Taylor series accumulated in long double, after scaling A down
// to 1-norm <= 1/2 and squaring back.
inline ComplexMatrix taylor_expm(const ComplexMatrix& a) {
  const Eigen::Index d = a.rows();
  MatrixXcld x = a.cast<Cld>();
  long double norm = 0.0L;
  for (Eigen::Index c = 0; c < d; ++c) {
    long double s = 0.0L;
    for (Eigen::Index r = 0; r < d; ++r) s += std::abs(x(r, c));
    norm = std::max(norm, s);
  }
  int squarings = 0;
  while (norm > 0.5L) {
    norm /= 2.0L;
    ++squarings;
  }
  x /= std::ldexp(1.0L, squarings);
  MatrixXcld sum = MatrixXcld::Identity(d, d);
  MatrixXcld term = MatrixXcld::Identity(d, d);
  for (int k = 1; k < 60; ++k) {
    term = (term * x) / static_cast<long double>(k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() < 1e-30L) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum.cast<Cd>();
}

inline double rel_frobenius(const ComplexMatrix& got, const ComplexMatrix& want) {
  return (got - want).norm() / std::max(want.norm(), 1e-300);
}

inline double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline ComplexMatrix random_complex(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng,
                                    double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  ComplexMatrix m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = {n(rng), n(rng)};
  }
  return m;
}

inline ComplexMatrix random_skew_hermitian(Eigen::Index d, std::mt19937_64& rng, double scale = 1.0) {
  const ComplexMatrix g = random_complex(d, d, rng, scale);
  return (g - g.adjoint()) / 2.0;
}

// Columns are normalized random states.
inline ComplexMatrix random_states(int n_qubits, Eigen::Index batch, std::mt19937_64& rng) {
  ComplexMatrix m = random_complex(Eigen::Index{1} << n_qubits, batch, rng);
  for (Eigen::Index b = 0; b < batch; ++b) m.col(b).normalize();
  return m;
}

inline std::vector<double> central_differences(const std::function<double(const std::vector<double>&)>& f,
                                               std::vector<double> x, double h = 1e-5) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double keep = x[i];
    x[i] = keep + h;
    const double up = f(x);
    x[i] = keep - h;
    const double down = f(x);
    x[i] = keep;
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

// |got - want| <= atol + rtol |want| elementwise.
inline bool allclose(const std::vector<double>& got, const std::vector<double>& want, double rtol,
                     double atol) {
  if (got.size() != want.size()) return false;
  for (std::size_t i = 0; i < got.size(); ++i) {
    if (!(std::abs(got[i] - want[i]) <= atol + rtol * std::abs(want[i]))) return false;
  }
  return true;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return k;
}

inline int wire_bit(std::uint64_t index, int n_qubits, int wire) {
  return static_cast<int>((index >> (n_qubits - 1 - wire)) & 1U);
}

// Dense 2^N operator acting as `u` on `wires` (wires[0] is the most
// significant bit of u's index) and as identity elsewhere.
inline ComplexMatrix embed(int n_qubits, const std::vector<int>& wires, const ComplexMatrix& u) {
  const std::uint64_t d = std::uint64_t{1} << n_qubits;
  const int k = static_cast<int>(wires.size());
  ComplexMatrix full = ComplexMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  auto sub = [&](std::uint64_t idx) {
    std::uint64_t s = 0;
    for (int t = 0; t < k; ++t) s = (s << 1) | static_cast<std::uint64_t>(wire_bit(idx, n_qubits, wires[t]));
    return s;
  };
  for (std::uint64_t r = 0; r < d; ++r) {
    for (std::uint64_t c = 0; c < d; ++c) {
      bool same_outside = true;
      for (int w = 0; w < n_qubits && same_outside; ++w) {
        bool in_group = false;
        for (int t = 0; t < k; ++t) in_group = in_group || wires[t] == w;
        if (!in_group && wire_bit(r, n_qubits, w) != wire_bit(c, n_qubits, w)) same_outside = false;
      }
      if (same_outside) {
        full(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            u(static_cast<Eigen::Index>(sub(r)), static_cast<Eigen::Index>(sub(c)));
      }
    }
  }
  return full;
}

inline ComplexMatrix rx2(double t) {
  const Cd i(0.0, 1.0);
  ComplexMatrix m(2, 2);
  m << std::cos(t / 2), -i * std::sin(t / 2), -i * std::sin(t / 2), std::cos(t / 2);
  return m;
}

inline ComplexMatrix ry2(double t) {
  ComplexMatrix m(2, 2);
  m << std::cos(t / 2), -std::sin(t / 2), std::sin(t / 2), std::cos(t / 2);
  return m;
}

inline ComplexMatrix rz2(double t) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = std::polar(1.0, -t / 2);
  m(1, 1) = std::polar(1.0, t / 2);
  return m;
}

inline ComplexMatrix gate_operator(int n_qubits, const circuit::GateOp& g) {
  switch (g.kind) {
    case circuit::GateKind::RX: return embed(n_qubits, {g.wires[0]}, rx2(g.theta));
    case circuit::GateKind::RY: return embed(n_qubits, {g.wires[0]}, ry2(g.theta));
    case circuit::GateKind::RZ: return embed(n_qubits, {g.wires[0]}, rz2(g.theta));
    case circuit::GateKind::CNOT: {
      ComplexMatrix cx = ComplexMatrix::Zero(4, 4);
      cx(0, 0) = cx(1, 1) = cx(2, 3) = cx(3, 2) = 1.0;
      return embed(n_qubits, {g.wires[0], g.wires[1]}, cx);
    }
  }
  return {};
}

inline ComplexMatrix circuit_operator(const circuit::AnsatzCircuit& c) {
  const Eigen::Index d = Eigen::Index{1} << c.n_qubits();
  ComplexMatrix u = ComplexMatrix::Identity(d, d);
  for (const auto& g : c.ops()) u = gate_operator(c.n_qubits(), g) * u;
  return u;
}

// <Z_i> for each column, brute force over basis states.
inline Eigen::MatrixXd z_expect(const ComplexMatrix& amps, int n_qubits) {
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(amps.cols(), n_qubits);
  for (Eigen::Index b = 0; b < amps.cols(); ++b) {
    for (Eigen::Index j = 0; j < amps.rows(); ++j) {
      const double p = std::norm(amps(j, b));
      for (int w = 0; w < n_qubits; ++w) z(b, w) += wire_bit(static_cast<std::uint64_t>(j), n_qubits, w) ? -p : p;
    }
  }
  return z;
}

}  // namespace uf::testing
