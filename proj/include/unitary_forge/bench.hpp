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
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "unitary_forge/optim.hpp"

namespace uf::bench {

struct BenchConfig {
  std::vector<int> qubit_range{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  int epochs = 10;
  int dataset_size = 32;
  std::vector<int> batch_sizes{1, 32};
  std::vector<optim::ModelKind> model_kinds{optim::ModelKind::FullUnitary, optim::ModelKind::Ansatz};
  std::uint64_t seed = 0;
  // Optional upper bound on the qubit count; cells above it are not run.
  // Keyed by model-kind name ("Ansatz") or kind plus batch ("FullUnitary_b1").
  std::map<std::string, int> max_qubits{};
  double learning_rate = 0.01;

  // Throws ContractError when a field is out of range.
  void validate() const;
};

nlohmann::json to_json(const BenchConfig& cfg);
BenchConfig bench_config_from_json(const nlohmann::json& j);

struct BenchRow {
  int n_qubits = 0;
  optim::ModelKind model_kind = optim::ModelKind::FullUnitary;
  int batch_size = 1;
  int dataset_size = 0;
  std::size_t n_params = 0;
  double mean_epoch_seconds = 0.0;
  double std_epoch_seconds = 0.0;  // unbiased; 0 for a single sample
  std::vector<double> samples;     // one per timed epoch
  double final_loss = 0.0;
  // Empty when the cell ran; otherwise why it failed (e.g. out of memory).
  std::string error;

  friend bool operator==(const BenchRow&, const BenchRow&) = default;
};

struct BenchReport {
  int epochs = 0;
  int threads = 1;
  std::vector<BenchRow> rows;

  friend bool operator==(const BenchReport&, const BenchReport&) = default;

  const BenchRow* find(int n_qubits, optim::ModelKind kind, int batch_size) const;
};

// Called after every finished cell.
using ProgressFn = std::function<void(const BenchRow&)>;

// Cells run sequentially, qubits outermost. Each cell trains the identity
// task with one untimed warmup epoch followed by cfg.epochs timed epochs.
BenchReport run_bench(const BenchConfig& cfg, const ProgressFn& progress = {});

// Mean and unbiased standard deviation.
std::pair<double, double> mean_std(const std::vector<double>& samples);

enum class ReportFormat { Csv, Json, Markdown };
ReportFormat report_format_from_string(const std::string& name);

// Csv and Markdown pivot to one line per qubit count with a mean/std pair per
// (model kind, batch size) configuration, numbers in 3-significant-digit
// scientific notation. Json is the lossless form.
std::string emit_report(const BenchReport& r, ReportFormat format);

nlohmann::json to_json(const BenchReport& r);
BenchReport bench_report_from_json(const nlohmann::json& j);

}  // namespace uf::bench
