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

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "unitary_forge/liegroup.hpp"
#include "unitary_forge/linalg.hpp"

// Batched statevector simulation.
//
// Conventions used throughout:
//  * a batch of B states on N wires is stored as a 2^N x B matrix, one state
//    per column;
//  * wire 0 is the most significant bit of the basis-state index;
//  * an operator on a wire list (w0, w1, ...) treats w0 as the most
//    significant bit of its own index.
namespace uf::circuit {

using linalg::ComplexMatrix;
using RealMatrix = Eigen::MatrixXd;

inline constexpr double kNormTolerance = 1e-8;

class StateBatch {
 public:
  // Throws ContractError on shape problems and DomainError if some column's
  // squared norm differs from 1 by more than kNormTolerance.
  StateBatch(int n_qubits, ComplexMatrix amplitudes);

  // |0...0> repeated batch times.
  static StateBatch zero_state(int n_qubits, Eigen::Index batch);

  // Skips the norm check. Only for producers that preserve norms by
  // construction (unitary application of a validated state).
  static StateBatch adopt_unchecked(int n_qubits, ComplexMatrix amplitudes);

  int n_qubits() const { return n_qubits_; }
  Eigen::Index batch() const { return amps_.cols(); }
  Eigen::Index dim() const { return amps_.rows(); }
  const ComplexMatrix& amplitudes() const { return amps_; }

  // Largest | ||psi_b||^2 - 1 | over the batch.
  double max_norm_deviation() const;

 private:
  StateBatch() = default;

  int n_qubits_ = 0;
  ComplexMatrix amps_;
};

class WirePartition {
 public:
  explicit WirePartition(std::vector<std::vector<int>> groups);

  const std::vector<std::vector<int>>& groups() const { return groups_; }
  // Throws ContractError unless the groups are disjoint and cover 0..n-1.
  void validate(int n_qubits) const;

  friend bool operator==(const WirePartition&, const WirePartition&) = default;

 private:
  std::vector<std::vector<int>> groups_;
};

struct PartitionLayer {
  WirePartition partition;
  // params[g] has dim 2^|groups[g]|.
  std::vector<lie::SkewHermitianParams> params;

  friend bool operator==(const PartitionLayer&, const PartitionLayer&) = default;
};

// Product over layers of tensor products of group unitaries.
class PartitionedUnitary {
 public:
  PartitionedUnitary(int n_qubits, std::vector<PartitionLayer> layers);

  // m layers of groups of k consecutive wires; layer l is cyclically shifted
  // by l wires. Requires k to divide n_qubits. Parameters start at zero.
  static PartitionedUnitary uniform(int n_qubits, int k, int m);

  int n_qubits() const { return n_qubits_; }
  const std::vector<PartitionLayer>& layers() const { return layers_; }

  // Sum over layers and groups of 2^(2k).
  std::size_t param_count() const;
  std::vector<double> flat_params() const;
  void set_flat_params(std::span<const double> values);

  friend bool operator==(const PartitionedUnitary&, const PartitionedUnitary&) = default;

 private:
  int n_qubits_;
  std::vector<PartitionLayer> layers_;
};

enum class GateKind { RX, RY, RZ, CNOT };

std::string_view to_string(GateKind kind);
GateKind gate_kind_from_string(std::string_view name);

struct GateOp {
  GateKind kind = GateKind::RX;
  // wires[0] for rotations; (control, target) for CNOT.
  std::array<int, 2> wires{0, 0};
  double theta = 0.0;

  static GateOp rx(int wire, double theta) { return {GateKind::RX, {wire, 0}, theta}; }
  static GateOp ry(int wire, double theta) { return {GateKind::RY, {wire, 0}, theta}; }
  static GateOp rz(int wire, double theta) { return {GateKind::RZ, {wire, 0}, theta}; }
  static GateOp cnot(int control, int target) { return {GateKind::CNOT, {control, target}, 0.0}; }

  bool is_rotation() const { return kind != GateKind::CNOT; }
  void validate(int n_qubits) const;

  friend bool operator==(const GateOp&, const GateOp&) = default;
};

class AnsatzCircuit {
 public:
  AnsatzCircuit(int n_qubits, std::vector<GateOp> ops);

  int n_qubits() const { return n_qubits_; }
  const std::vector<GateOp>& ops() const { return ops_; }

  // Trainable angles, in gate order (CNOTs carry none).
  std::size_t param_count() const;
  std::vector<double> angles() const;
  void set_angles(std::span<const double> values);

  friend bool operator==(const AnsatzCircuit&, const AnsatzCircuit&) = default;

 private:
  int n_qubits_;
  std::vector<GateOp> ops_;
};

// 2x2 matrix of a rotation gate: RX, RY as printed in the usual
// cos(t/2)/sin(t/2) form, RZ = diag(e^{-it/2}, e^{it/2}).
Eigen::Matrix2cd rotation_matrix(GateKind kind, double theta);

// features: B x N angles; row b becomes (x) RX(x_bi)|0>.
StateBatch rx_encode(const RealMatrix& features);

StateBatch apply_full(const StateBatch& s, const linalg::UnitaryMatrix& u);
StateBatch apply_group(const StateBatch& s, std::span<const int> wires,
                       const linalg::UnitaryMatrix& u_small);
StateBatch apply_partitioned(const StateBatch& s, const PartitionedUnitary& pu);
StateBatch apply_gate(const StateBatch& s, const GateOp& g);
StateBatch run_ansatz(const StateBatch& s, const AnsatzCircuit& c);

// B x N matrix of <Z_i>.
RealMatrix z_expectations(const StateBatch& s);

// n_params rotations with kinds drawn uniformly from {RX, RY, RZ} on uniform
// wires and angles uniform in [0, 2pi); after each rotation a CNOT on a
// uniformly drawn ordered wire pair follows with probability 0.3 (N >= 2).
AnsatzCircuit random_layer(int n_qubits, std::size_t n_params, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Reverse-mode pieces. A cotangent C of a state batch is the 2^N x B matrix
// with dL = Re tr(C^H d psi).

// In-place kernels on raw amplitude matrices (no norm requirement).
void apply_group_inplace(ComplexMatrix& amps, int n_qubits, std::span<const int> wires,
                         const ComplexMatrix& u_small);
void apply_gate_inplace(ComplexMatrix& amps, int n_qubits, const GateOp& g);

// Cotangent of psi from the cotangent dz (B x N) of z_expectations.
ComplexMatrix z_expectations_vjp(const StateBatch& s, const RealMatrix& dz);

// Matrix cotangent of the small unitary in psi_out = (U on wires) psi_in:
// sum over batch and untouched basis states of c * psi_in^H.
ComplexMatrix group_unitary_cotangent(const ComplexMatrix& psi_in, const ComplexMatrix& c,
                                      int n_qubits, std::span<const int> wires);

// Gradient of L with respect to every trainable angle of c, given the
// circuit's output state and its cotangent. Walks the circuit backwards,
// uncomputing the state.
std::vector<double> ansatz_angle_grad(const StateBatch& output, const ComplexMatrix& c,
                                      const AnsatzCircuit& circuit);

// Gradient with respect to PartitionedUnitary::flat_params.
std::vector<double> partitioned_param_grad(const StateBatch& input, const ComplexMatrix& c,
                                           const PartitionedUnitary& pu);

nlohmann::json to_json(const AnsatzCircuit& c);
AnsatzCircuit ansatz_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PartitionedUnitary& pu);
PartitionedUnitary partitioned_from_json(const nlohmann::json& j);

}  // namespace uf::circuit
