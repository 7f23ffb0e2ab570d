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

#include "unitary_forge/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "unitary_forge/errors.hpp"

namespace uf::circuit {

using linalg::Complex;

namespace {

inline Eigen::Index dim_of(int n_qubits) { return Eigen::Index{1} << n_qubits; }

inline Eigen::Index bit_of_wire(int n_qubits, int wire) {
  return Eigen::Index{1} << (n_qubits - 1 - wire);
}

void require_wires(int n_qubits, std::span<const int> wires, const char* what) {
  if (wires.empty()) throw ContractError(std::string(what) + ": empty wire list");
  std::vector<bool> seen(static_cast<std::size_t>(std::max(n_qubits, 0)), false);
  for (int w : wires) {
    if (w < 0 || w >= n_qubits) {
      throw ContractError(std::string(what) + ": wire " + std::to_string(w) +
                          " out of range for " + std::to_string(n_qubits) + " qubits");
    }
    if (seen[static_cast<std::size_t>(w)]) {
      throw ContractError(std::string(what) + ": repeated wire " + std::to_string(w));
    }
    seen[static_cast<std::size_t>(w)] = true;
  }
}

// Index layout of an operator on `wires`: offsets[j] is the basis-index
// contribution of local pattern j, rest lists every basis index with all
// group bits clear.
struct GroupIndex {
  std::vector<Eigen::Index> offsets;
  std::vector<Eigen::Index> rest;
};

GroupIndex group_index(int n_qubits, std::span<const int> wires) {
  const int k = static_cast<int>(wires.size());
  const Eigen::Index dk = Eigen::Index{1} << k;
  GroupIndex gi;
  gi.offsets.resize(static_cast<std::size_t>(dk));
  Eigen::Index group_mask = 0;
  for (int t = 0; t < k; ++t) group_mask |= bit_of_wire(n_qubits, wires[static_cast<std::size_t>(t)]);
  for (Eigen::Index j = 0; j < dk; ++j) {
    Eigen::Index off = 0;
    for (int t = 0; t < k; ++t) {
      if ((j >> (k - 1 - t)) & 1) off |= bit_of_wire(n_qubits, wires[static_cast<std::size_t>(t)]);
    }
    gi.offsets[static_cast<std::size_t>(j)] = off;
  }
  const Eigen::Index d = dim_of(n_qubits);
  gi.rest.reserve(static_cast<std::size_t>(d / dk));
  for (Eigen::Index i = 0; i < d; ++i) {
    if ((i & group_mask) == 0) gi.rest.push_back(i);
  }
  return gi;
}

// dk x (B * R) matrix with column b*R + r holding the local amplitudes of
// state b around rest index r.
ComplexMatrix gather(const ComplexMatrix& amps, const GroupIndex& gi) {
  const auto dk = static_cast<Eigen::Index>(gi.offsets.size());
  const auto nr = static_cast<Eigen::Index>(gi.rest.size());
  ComplexMatrix s(dk, amps.cols() * nr);
  for (Eigen::Index b = 0; b < amps.cols(); ++b) {
    const Complex* src = amps.col(b).data();
    for (Eigen::Index r = 0; r < nr; ++r) {
      Complex* dst = s.col(b * nr + r).data();
      const Eigen::Index base = gi.rest[static_cast<std::size_t>(r)];
      for (Eigen::Index j = 0; j < dk; ++j) dst[j] = src[base + gi.offsets[static_cast<std::size_t>(j)]];
    }
  }
  return s;
}

void scatter(const ComplexMatrix& s, const GroupIndex& gi, ComplexMatrix& amps) {
  const auto dk = static_cast<Eigen::Index>(gi.offsets.size());
  const auto nr = static_cast<Eigen::Index>(gi.rest.size());
  for (Eigen::Index b = 0; b < amps.cols(); ++b) {
    Complex* dst = amps.col(b).data();
    for (Eigen::Index r = 0; r < nr; ++r) {
      const Complex* src = s.col(b * nr + r).data();
      const Eigen::Index base = gi.rest[static_cast<std::size_t>(r)];
      for (Eigen::Index j = 0; j < dk; ++j) dst[base + gi.offsets[static_cast<std::size_t>(j)]] = src[j];
    }
  }
}

// Plain complex product without the C99 Annex G NaN/inf recovery path.
inline Complex cmul(Complex a, Complex b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

void apply_2x2(ComplexMatrix& amps, int n_qubits, int wire, const Eigen::Matrix2cd& m) {
  const Eigen::Index mask = bit_of_wire(n_qubits, wire);
  const Eigen::Index d = amps.rows();
  const Complex m00 = m(0, 0), m01 = m(0, 1), m10 = m(1, 0), m11 = m(1, 1);
  for (Eigen::Index b = 0; b < amps.cols(); ++b) {
    Complex* p = amps.col(b).data();
    for (Eigen::Index base = 0; base < d; base += 2 * mask) {
      for (Eigen::Index i = base; i < base + mask; ++i) {
        const Complex a0 = p[i];
        const Complex a1 = p[i + mask];
        p[i] = cmul(m00, a0) + cmul(m01, a1);
        p[i + mask] = cmul(m10, a0) + cmul(m11, a1);
      }
    }
  }
}

void apply_cnot(ComplexMatrix& amps, int n_qubits, int control, int target) {
  const Eigen::Index cm = bit_of_wire(n_qubits, control);
  const Eigen::Index tm = bit_of_wire(n_qubits, target);
  const Eigen::Index d = amps.rows();
  for (Eigen::Index b = 0; b < amps.cols(); ++b) {
    Complex* p = amps.col(b).data();
    for (Eigen::Index i = 0; i < d; ++i) {
      if ((i & cm) != 0 && (i & tm) == 0) std::swap(p[i], p[i | tm]);
    }
  }
}

Eigen::Matrix2cd pauli_generator(GateKind kind) {
  Eigen::Matrix2cd p;
  switch (kind) {
    case GateKind::RX: p << 0, 1, 1, 0; break;
    case GateKind::RY: p << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case GateKind::RZ: p << 1, 0, 0, -1; break;
    case GateKind::CNOT: throw ContractError("CNOT has no rotation generator");
  }
  return p;
}

// sum_b Re <lambda_b, (-i/2) P psi_b> restricted to `wire`.
double rotation_grad(const ComplexMatrix& psi, const ComplexMatrix& lambda, int n_qubits,
                     int wire, GateKind kind) {
  const Eigen::Index mask = bit_of_wire(n_qubits, wire);
  const Eigen::Index d = psi.rows();
  const Eigen::Matrix2cd p = pauli_generator(kind) * Complex(0.0, -0.5);
  const Complex p00 = p(0, 0), p01 = p(0, 1), p10 = p(1, 0), p11 = p(1, 1);
  double total = 0.0;
  for (Eigen::Index b = 0; b < psi.cols(); ++b) {
    const Complex* s = psi.col(b).data();
    const Complex* l = lambda.col(b).data();
    double acc = 0.0;
    for (Eigen::Index base = 0; base < d; base += 2 * mask) {
      for (Eigen::Index i = base; i < base + mask; ++i) {
        const Complex a0 = s[i];
        const Complex a1 = s[i + mask];
        const Complex q0 = cmul(p00, a0) + cmul(p01, a1);
        const Complex q1 = cmul(p10, a0) + cmul(p11, a1);
        acc += l[i].real() * q0.real() + l[i].imag() * q0.imag();
        acc += l[i + mask].real() * q1.real() + l[i + mask].imag() * q1.imag();
      }
    }
    total += acc;
  }
  return total;
}

}  // namespace

// --- StateBatch ------------------------------------------------------------

StateBatch::StateBatch(int n_qubits, ComplexMatrix amplitudes) {
  if (n_qubits < 1 || n_qubits > 30) throw ContractError("StateBatch: n_qubits must be in 1..30");
  if (amplitudes.rows() != dim_of(n_qubits)) {
    throw ContractError("StateBatch: expected " + std::to_string(dim_of(n_qubits)) +
                        " amplitudes per state, got " + std::to_string(amplitudes.rows()));
  }
  if (amplitudes.cols() < 1) throw ContractError("StateBatch: batch must be >= 1");
  n_qubits_ = n_qubits;
  amps_ = std::move(amplitudes);
  const double dev = max_norm_deviation();
  if (!(dev <= kNormTolerance)) {
    throw DomainError("StateBatch: state not normalized (deviation " + std::to_string(dev) + ")");
  }
}

StateBatch StateBatch::zero_state(int n_qubits, Eigen::Index batch) {
  if (n_qubits < 1 || n_qubits > 30) throw ContractError("StateBatch: n_qubits must be in 1..30");
  if (batch < 1) throw ContractError("StateBatch: batch must be >= 1");
  ComplexMatrix amps = ComplexMatrix::Zero(dim_of(n_qubits), batch);
  amps.row(0).setOnes();
  return adopt_unchecked(n_qubits, std::move(amps));
}

StateBatch StateBatch::adopt_unchecked(int n_qubits, ComplexMatrix amplitudes) {
  StateBatch s;
  s.n_qubits_ = n_qubits;
  s.amps_ = std::move(amplitudes);
  return s;
}

double StateBatch::max_norm_deviation() const {
  return (amps_.colwise().squaredNorm().array() - 1.0).abs().maxCoeff();
}

// --- WirePartition / PartitionedUnitary --------------------------------------

WirePartition::WirePartition(std::vector<std::vector<int>> groups) : groups_(std::move(groups)) {}

void WirePartition::validate(int n_qubits) const {
  std::vector<int> all;
  for (const auto& g : groups_) {
    if (g.empty()) throw ContractError("WirePartition: empty group");
    all.insert(all.end(), g.begin(), g.end());
  }
  std::sort(all.begin(), all.end());
  bool ok = static_cast<int>(all.size()) == n_qubits;
  for (std::size_t i = 0; ok && i < all.size(); ++i) ok = all[i] == static_cast<int>(i);
  if (!ok) {
    throw ContractError("WirePartition: groups must be disjoint and cover wires 0.." +
                        std::to_string(n_qubits - 1));
  }
}

PartitionedUnitary::PartitionedUnitary(int n_qubits, std::vector<PartitionLayer> layers)
    : n_qubits_(n_qubits), layers_(std::move(layers)) {
  if (n_qubits_ < 1) throw ContractError("PartitionedUnitary: n_qubits must be >= 1");
  if (layers_.empty()) throw ContractError("PartitionedUnitary: at least one layer required");
  for (const auto& layer : layers_) {
    layer.partition.validate(n_qubits_);
    const auto& groups = layer.partition.groups();
    if (groups.size() != layer.params.size()) {
      throw ContractError("PartitionedUnitary: one parameter set per group required");
    }
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (layer.params[g].dim() != dim_of(static_cast<int>(groups[g].size()))) {
        throw ContractError("PartitionedUnitary: group of size " + std::to_string(groups[g].size()) +
                            " needs parameters of dim " +
                            std::to_string(dim_of(static_cast<int>(groups[g].size()))));
      }
    }
  }
}

PartitionedUnitary PartitionedUnitary::uniform(int n_qubits, int k, int m) {
  if (k < 1 || m < 1 || n_qubits < 1 || n_qubits % k != 0) {
    throw ContractError("PartitionedUnitary::uniform: need k >= 1 dividing n_qubits and m >= 1");
  }
  std::vector<PartitionLayer> layers;
  for (int l = 0; l < m; ++l) {
    std::vector<std::vector<int>> groups;
    std::vector<lie::SkewHermitianParams> params;
    for (int g = 0; g < n_qubits / k; ++g) {
      std::vector<int> wires;
      for (int t = 0; t < k; ++t) wires.push_back((g * k + t + l) % n_qubits);
      groups.push_back(std::move(wires));
      params.push_back(lie::SkewHermitianParams::zeros(dim_of(k)));
    }
    layers.push_back({WirePartition(std::move(groups)), std::move(params)});
  }
  return PartitionedUnitary(n_qubits, std::move(layers));
}

std::size_t PartitionedUnitary::param_count() const {
  std::size_t n = 0;
  for (const auto& layer : layers_) {
    for (const auto& p : layer.params) n += p.theta().size();
  }
  return n;
}

std::vector<double> PartitionedUnitary::flat_params() const {
  std::vector<double> out;
  out.reserve(param_count());
  for (const auto& layer : layers_) {
    for (const auto& p : layer.params) out.insert(out.end(), p.theta().begin(), p.theta().end());
  }
  return out;
}

void PartitionedUnitary::set_flat_params(std::span<const double> values) {
  if (values.size() != param_count()) {
    throw ContractError("PartitionedUnitary: expected " + std::to_string(param_count()) +
                        " parameters, got " + std::to_string(values.size()));
  }
  std::size_t k = 0;
  for (auto& layer : layers_) {
    for (auto& p : layer.params) {
      auto t = p.mutable_theta();
      std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(k), t.size(), t.begin());
      k += t.size();
    }
  }
}

// --- gates -------------------------------------------------------------------

std::string_view to_string(GateKind kind) {
  switch (kind) {
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::CNOT: return "CNOT";
  }
  return "?";
}

GateKind gate_kind_from_string(std::string_view name) {
  if (name == "RX") return GateKind::RX;
  if (name == "RY") return GateKind::RY;
  if (name == "RZ") return GateKind::RZ;
  if (name == "CNOT") return GateKind::CNOT;
  throw ParseError("unknown gate kind '" + std::string(name) + "'");
}

void GateOp::validate(int n_qubits) const {
  auto in_range = [&](int w) { return w >= 0 && w < n_qubits; };
  if (!in_range(wires[0])) throw ContractError("GateOp: wire out of range");
  if (kind == GateKind::CNOT) {
    if (!in_range(wires[1])) throw ContractError("GateOp: CNOT target out of range");
    if (wires[0] == wires[1]) throw ContractError("GateOp: CNOT control equals target");
  } else if (!std::isfinite(theta)) {
    throw DomainError("GateOp: non-finite angle");
  }
}

AnsatzCircuit::AnsatzCircuit(int n_qubits, std::vector<GateOp> ops)
    : n_qubits_(n_qubits), ops_(std::move(ops)) {
  if (n_qubits_ < 1) throw ContractError("AnsatzCircuit: n_qubits must be >= 1");
  for (const auto& op : ops_) op.validate(n_qubits_);
}

std::size_t AnsatzCircuit::param_count() const {
  return static_cast<std::size_t>(
      std::count_if(ops_.begin(), ops_.end(), [](const GateOp& g) { return g.is_rotation(); }));
}

std::vector<double> AnsatzCircuit::angles() const {
  std::vector<double> out;
  out.reserve(param_count());
  for (const auto& g : ops_) {
    if (g.is_rotation()) out.push_back(g.theta);
  }
  return out;
}

void AnsatzCircuit::set_angles(std::span<const double> values) {
  if (values.size() != param_count()) {
    throw ContractError("AnsatzCircuit: expected " + std::to_string(param_count()) +
                        " angles, got " + std::to_string(values.size()));
  }
  std::size_t k = 0;
  for (auto& g : ops_) {
    if (g.is_rotation()) g.theta = values[k++];
  }
}

Eigen::Matrix2cd rotation_matrix(GateKind kind, double theta) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  Eigen::Matrix2cd m;
  switch (kind) {
    case GateKind::RX: m << c, Complex(0, -s), Complex(0, -s), c; break;
    case GateKind::RY: m << c, -s, s, c; break;
    case GateKind::RZ: m << Complex(c, -s), 0, 0, Complex(c, s); break;
    case GateKind::CNOT: throw ContractError("rotation_matrix: CNOT is not a rotation");
  }
  return m;
}

// --- forward operations ----------------------------------------------------------

StateBatch rx_encode(const RealMatrix& features) {
  const auto batch = features.rows();
  const auto n = static_cast<int>(features.cols());
  if (batch < 1 || n < 1) throw ContractError("rx_encode: need at least one row and one feature");
  if (n > 30) throw ContractError("rx_encode: too many wires");
  if (!features.allFinite()) throw DomainError("rx_encode: non-finite feature");
  const Eigen::Index d = dim_of(n);
  ComplexMatrix amps(d, batch);
  for (Eigen::Index b = 0; b < batch; ++b) {
    Complex* p = amps.col(b).data();
    p[0] = 1.0;
    Eigen::Index len = 1;
    for (int w = 0; w < n; ++w) {
      const Complex f0(std::cos(features(b, w) / 2.0), 0.0);
      const Complex f1(0.0, -std::sin(features(b, w) / 2.0));
      // Kronecker with (f0, f1): the new factor becomes the least significant bit.
      for (Eigen::Index i = len - 1; i >= 0; --i) {
        p[2 * i + 1] = p[i] * f1;
        p[2 * i] = p[i] * f0;
      }
      len *= 2;
    }
  }
  return StateBatch::adopt_unchecked(n, std::move(amps));
}

StateBatch apply_full(const StateBatch& s, const linalg::UnitaryMatrix& u) {
  if (u.dim() != s.dim()) {
    throw ContractError("apply_full: unitary of dim " + std::to_string(u.dim()) +
                        " on a state of dim " + std::to_string(s.dim()));
  }
  ComplexMatrix out(s.dim(), s.batch());
  out.noalias() = u.matrix() * s.amplitudes();
  return StateBatch::adopt_unchecked(s.n_qubits(), std::move(out));
}

void apply_group_inplace(ComplexMatrix& amps, int n_qubits, std::span<const int> wires,
                         const ComplexMatrix& u_small) {
  require_wires(n_qubits, wires, "apply_group");
  if (u_small.rows() != dim_of(static_cast<int>(wires.size())) || u_small.cols() != u_small.rows()) {
    throw ContractError("apply_group: operator dimension does not match " +
                        std::to_string(wires.size()) + " wires");
  }
  if (amps.rows() != dim_of(n_qubits)) throw ContractError("apply_group: state dimension mismatch");
  const GroupIndex gi = group_index(n_qubits, wires);
  const ComplexMatrix local = gather(amps, gi);
  ComplexMatrix mapped(local.rows(), local.cols());
  mapped.noalias() = u_small * local;
  scatter(mapped, gi, amps);
}

StateBatch apply_group(const StateBatch& s, std::span<const int> wires,
                       const linalg::UnitaryMatrix& u_small) {
  ComplexMatrix amps = s.amplitudes();
  apply_group_inplace(amps, s.n_qubits(), wires, u_small.matrix());
  return StateBatch::adopt_unchecked(s.n_qubits(), std::move(amps));
}

StateBatch apply_partitioned(const StateBatch& s, const PartitionedUnitary& pu) {
  if (pu.n_qubits() != s.n_qubits()) throw ContractError("apply_partitioned: qubit count mismatch");
  ComplexMatrix amps = s.amplitudes();
  for (const auto& layer : pu.layers()) {
    const auto& groups = layer.partition.groups();
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const linalg::UnitaryMatrix u = lie::to_unitary(layer.params[g]);
      apply_group_inplace(amps, s.n_qubits(), groups[g], u.matrix());
    }
  }
  return StateBatch::adopt_unchecked(s.n_qubits(), std::move(amps));
}

void apply_gate_inplace(ComplexMatrix& amps, int n_qubits, const GateOp& g) {
  g.validate(n_qubits);
  if (g.kind == GateKind::CNOT) {
    apply_cnot(amps, n_qubits, g.wires[0], g.wires[1]);
  } else {
    apply_2x2(amps, n_qubits, g.wires[0], rotation_matrix(g.kind, g.theta));
  }
}

StateBatch apply_gate(const StateBatch& s, const GateOp& g) {
  ComplexMatrix amps = s.amplitudes();
  apply_gate_inplace(amps, s.n_qubits(), g);
  return StateBatch::adopt_unchecked(s.n_qubits(), std::move(amps));
}

StateBatch run_ansatz(const StateBatch& s, const AnsatzCircuit& c) {
  if (c.n_qubits() != s.n_qubits()) throw ContractError("run_ansatz: qubit count mismatch");
  ComplexMatrix amps = s.amplitudes();
  for (const auto& g : c.ops()) apply_gate_inplace(amps, s.n_qubits(), g);
  return StateBatch::adopt_unchecked(s.n_qubits(), std::move(amps));
}

RealMatrix z_expectations(const StateBatch& s) {
  const int n = s.n_qubits();
  const Eigen::Index d = s.dim();
  RealMatrix z = RealMatrix::Zero(s.batch(), n);
  for (Eigen::Index b = 0; b < s.batch(); ++b) {
    const Complex* p = s.amplitudes().col(b).data();
    for (Eigen::Index j = 0; j < d; ++j) {
      const double prob = std::norm(p[j]);
      for (int w = 0; w < n; ++w) {
        z(b, w) += (j & bit_of_wire(n, w)) ? -prob : prob;
      }
    }
  }
  return z;
}

AnsatzCircuit random_layer(int n_qubits, std::size_t n_params, std::uint64_t seed) {
  if (n_params < 1) throw ContractError("random_layer: n_params must be >= 1");
  if (n_qubits < 1) throw ContractError("random_layer: n_qubits must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> kind_dist(0, 2);
  std::uniform_int_distribution<int> wire_dist(0, n_qubits - 1);
  std::uniform_real_distribution<double> angle_dist(0.0, 2.0 * std::numbers::pi);
  std::bernoulli_distribution cnot_dist(0.3);
  std::vector<GateOp> ops;
  ops.reserve(n_params + n_params / 2);
  static constexpr GateKind kinds[] = {GateKind::RX, GateKind::RY, GateKind::RZ};
  for (std::size_t i = 0; i < n_params; ++i) {
    const GateKind kind = kinds[kind_dist(rng)];
    const int wire = wire_dist(rng);
    const double theta = angle_dist(rng);
    ops.push_back({kind, {wire, 0}, theta});
    if (n_qubits >= 2 && cnot_dist(rng)) {
      const int control = wire_dist(rng);
      int target = wire_dist(rng);
      while (target == control) target = wire_dist(rng);
      ops.push_back(GateOp::cnot(control, target));
    }
  }
  return AnsatzCircuit(n_qubits, std::move(ops));
}

// --- reverse mode --------------------------------------------------------------

ComplexMatrix z_expectations_vjp(const StateBatch& s, const RealMatrix& dz) {
  const int n = s.n_qubits();
  if (dz.rows() != s.batch() || dz.cols() != n) {
    throw ContractError("z_expectations_vjp: cotangent shape mismatch");
  }
  const Eigen::Index d = s.dim();
  ComplexMatrix c(d, s.batch());
  for (Eigen::Index b = 0; b < s.batch(); ++b) {
    const Complex* p = s.amplitudes().col(b).data();
    Complex* out = c.col(b).data();
    for (Eigen::Index j = 0; j < d; ++j) {
      double w = 0.0;
      for (int i = 0; i < n; ++i) w += (j & bit_of_wire(n, i)) ? -dz(b, i) : dz(b, i);
      out[j] = 2.0 * w * p[j];
    }
  }
  return c;
}

ComplexMatrix group_unitary_cotangent(const ComplexMatrix& psi_in, const ComplexMatrix& c,
                                      int n_qubits, std::span<const int> wires) {
  require_wires(n_qubits, wires, "group_unitary_cotangent");
  if (psi_in.rows() != dim_of(n_qubits) || c.rows() != psi_in.rows() || c.cols() != psi_in.cols()) {
    throw ContractError("group_unitary_cotangent: shape mismatch");
  }
  const GroupIndex gi = group_index(n_qubits, wires);
  const ComplexMatrix sc = gather(c, gi);
  const ComplexMatrix sp = gather(psi_in, gi);
  ComplexMatrix out(sc.rows(), sp.rows());
  out.noalias() = sc * sp.adjoint();
  return out;
}

std::vector<double> ansatz_angle_grad(const StateBatch& output, const ComplexMatrix& c,
                                      const AnsatzCircuit& circuit) {
  if (circuit.n_qubits() != output.n_qubits()) {
    throw ContractError("ansatz_angle_grad: qubit count mismatch");
  }
  if (c.rows() != output.dim() || c.cols() != output.batch()) {
    throw ContractError("ansatz_angle_grad: cotangent shape mismatch");
  }
  const int n = circuit.n_qubits();
  ComplexMatrix psi = output.amplitudes();
  ComplexMatrix lambda = c;
  std::vector<double> grad(circuit.param_count());
  std::size_t k = grad.size();
  const auto& ops = circuit.ops();
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    const GateOp& g = *it;
    if (g.kind == GateKind::CNOT) {
      apply_cnot(psi, n, g.wires[0], g.wires[1]);
      apply_cnot(lambda, n, g.wires[0], g.wires[1]);
      continue;
    }
    grad[--k] = rotation_grad(psi, lambda, n, g.wires[0], g.kind);
    const Eigen::Matrix2cd inv = rotation_matrix(g.kind, g.theta).adjoint();
    apply_2x2(psi, n, g.wires[0], inv);
    apply_2x2(lambda, n, g.wires[0], inv);
  }
  return grad;
}

std::vector<double> partitioned_param_grad(const StateBatch& input, const ComplexMatrix& c,
                                           const PartitionedUnitary& pu) {
  if (pu.n_qubits() != input.n_qubits()) {
    throw ContractError("partitioned_param_grad: qubit count mismatch");
  }
  if (c.rows() != input.dim() || c.cols() != input.batch()) {
    throw ContractError("partitioned_param_grad: cotangent shape mismatch");
  }
  const int n = input.n_qubits();

  struct Step {
    const std::vector<int>* wires;
    ComplexMatrix generator;
    ComplexMatrix unitary;
    ComplexMatrix psi_in;
    std::size_t offset;
  };
  std::vector<Step> tape;
  ComplexMatrix psi = input.amplitudes();
  std::size_t offset = 0;
  for (const auto& layer : pu.layers()) {
    const auto& groups = layer.partition.groups();
    for (std::size_t g = 0; g < groups.size(); ++g) {
      ComplexMatrix x = lie::assemble(layer.params[g]);
      ComplexMatrix u = linalg::matexp(x);
      tape.push_back({&groups[g], std::move(x), u, psi, offset});
      apply_group_inplace(psi, n, groups[g], u);
      offset += layer.params[g].theta().size();
    }
  }

  std::vector<double> grad(pu.param_count());
  ComplexMatrix lambda = c;
  for (auto it = tape.rbegin(); it != tape.rend(); ++it) {
    const ComplexMatrix u_bar = group_unitary_cotangent(it->psi_in, lambda, n, *it->wires);
    const std::vector<double> g = lie::param_grad(linalg::matexp_vjp(it->generator, u_bar));
    std::copy(g.begin(), g.end(), grad.begin() + static_cast<std::ptrdiff_t>(it->offset));
    apply_group_inplace(lambda, n, *it->wires, it->unitary.adjoint());
  }
  return grad;
}

// --- JSON ------------------------------------------------------------------------

nlohmann::json to_json(const AnsatzCircuit& c) {
  nlohmann::json ops = nlohmann::json::array();
  for (const auto& g : c.ops()) {
    nlohmann::json op{{"kind", to_string(g.kind)}};
    if (g.kind == GateKind::CNOT) {
      op["wires"] = {g.wires[0], g.wires[1]};
    } else {
      op["wires"] = {g.wires[0]};
      op["theta"] = g.theta;
    }
    ops.push_back(std::move(op));
  }
  return {{"n_qubits", c.n_qubits()}, {"ops", std::move(ops)}};
}

AnsatzCircuit ansatz_from_json(const nlohmann::json& j) {
  try {
    std::vector<GateOp> ops;
    for (const auto& op : j.at("ops")) {
      GateOp g;
      g.kind = gate_kind_from_string(op.at("kind").get<std::string>());
      const auto wires = op.at("wires").get<std::vector<int>>();
      if (wires.size() != (g.kind == GateKind::CNOT ? 2u : 1u)) {
        throw ParseError("ansatz: wrong number of wires for " + std::string(to_string(g.kind)));
      }
      g.wires[0] = wires[0];
      if (g.kind == GateKind::CNOT) {
        g.wires[1] = wires[1];
      } else {
        g.theta = op.at("theta").get<double>();
      }
      ops.push_back(g);
    }
    return AnsatzCircuit(j.at("n_qubits").get<int>(), std::move(ops));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("ansatz: ") + e.what());
  }
}

nlohmann::json to_json(const PartitionedUnitary& pu) {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& layer : pu.layers()) {
    nlohmann::json params = nlohmann::json::array();
    for (const auto& p : layer.params) params.push_back(lie::to_json(p));
    layers.push_back({{"groups", layer.partition.groups()}, {"params", std::move(params)}});
  }
  return {{"n_qubits", pu.n_qubits()}, {"layers", std::move(layers)}};
}

PartitionedUnitary partitioned_from_json(const nlohmann::json& j) {
  try {
    std::vector<PartitionLayer> layers;
    for (const auto& layer : j.at("layers")) {
      std::vector<lie::SkewHermitianParams> params;
      for (const auto& p : layer.at("params")) params.push_back(lie::params_from_json(p));
      layers.push_back({WirePartition(layer.at("groups").get<std::vector<std::vector<int>>>()),
                        std::move(params)});
    }
    return PartitionedUnitary(j.at("n_qubits").get<int>(), std::move(layers));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("partitioned unitary: ") + e.what());
  }
}

}  // namespace uf::circuit
