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

#include "unitary_forge/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <new>
#include <set>
#include <sstream>

#include "unitary_forge/errors.hpp"
#include "unitary_forge/runtime.hpp"

namespace uf::bench {

using optim::ModelKind;

void BenchConfig::validate() const {
  auto fail = [](const std::string& what) { throw ContractError("BenchConfig: " + what); };
  if (qubit_range.empty()) fail("qubit_range must not be empty");
  for (int n : qubit_range) {
    if (n < 1 || n > 20) fail("qubit counts must be in 1..20");
  }
  if (epochs < 1) fail("epochs must be >= 1");
  if (dataset_size < 1) fail("dataset_size must be >= 1");
  if (batch_sizes.empty()) fail("batch_sizes must not be empty");
  for (int b : batch_sizes) {
    if (b < 1) fail("batch sizes must be >= 1");
  }
  if (model_kinds.empty()) fail("model_kinds must not be empty");
  for (ModelKind k : model_kinds) {
    if (k == ModelKind::Partitioned) fail("model_kinds must be FullUnitary or Ansatz");
  }
  for (const auto& [key, n] : max_qubits) {
    optim::model_kind_from_string(key.substr(0, key.find("_b")));
    if (n < 1) fail("max_qubits entries must be >= 1");
  }
  if (!(learning_rate > 0.0)) fail("learning_rate must be > 0");
}

nlohmann::json to_json(const BenchConfig& cfg) {
  std::vector<std::string> kinds;
  for (ModelKind k : cfg.model_kinds) kinds.emplace_back(optim::to_string(k));
  return {{"qubit_range", cfg.qubit_range}, {"epochs", cfg.epochs},
          {"dataset_size", cfg.dataset_size}, {"batch_sizes", cfg.batch_sizes},
          {"model_kinds", kinds},             {"seed", cfg.seed},
          {"max_qubits", cfg.max_qubits},     {"learning_rate", cfg.learning_rate}};
}

BenchConfig bench_config_from_json(const nlohmann::json& j) {
  BenchConfig cfg;
  try {
    if (!j.is_object()) throw ParseError("bench config must be a JSON object");
    if (j.contains("qubit_range")) {
      const auto& q = j.at("qubit_range");
      if (q.is_object()) {
        // {"min": a, "max": b}
        cfg.qubit_range.clear();
        for (int n = q.at("min").get<int>(); n <= q.at("max").get<int>(); ++n) cfg.qubit_range.push_back(n);
      } else {
        cfg.qubit_range = q.get<std::vector<int>>();
      }
    }
    if (j.contains("epochs")) cfg.epochs = j.at("epochs").get<int>();
    if (j.contains("dataset_size")) cfg.dataset_size = j.at("dataset_size").get<int>();
    if (j.contains("batch_sizes")) cfg.batch_sizes = j.at("batch_sizes").get<std::vector<int>>();
    if (j.contains("model_kinds")) {
      cfg.model_kinds.clear();
      for (const auto& k : j.at("model_kinds")) cfg.model_kinds.push_back(optim::model_kind_from_string(k.get<std::string>()));
    }
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("max_qubits")) cfg.max_qubits = j.at("max_qubits").get<std::map<std::string, int>>();
    if (j.contains("learning_rate")) cfg.learning_rate = j.at("learning_rate").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bench config: ") + e.what());
  }
  return cfg;
}

std::pair<double, double> mean_std(const std::vector<double>& samples) {
  if (samples.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= static_cast<double>(samples.size());
  if (samples.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double s : samples) ss += (s - mean) * (s - mean);
  return {mean, std::sqrt(ss / static_cast<double>(samples.size() - 1))};
}

const BenchRow* BenchReport::find(int n_qubits, ModelKind kind, int batch_size) const {
  for (const auto& r : rows) {
    if (r.n_qubits == n_qubits && r.model_kind == kind && r.batch_size == batch_size) return &r;
  }
  return nullptr;
}

namespace {

int qubit_cap(const BenchConfig& cfg, ModelKind kind, int batch) {
  const std::string name(optim::to_string(kind));
  int cap = std::numeric_limits<int>::max();
  for (const std::string& key : {name, name + "_b" + std::to_string(batch)}) {
    const auto it = cfg.max_qubits.find(key);
    if (it != cfg.max_qubits.end()) cap = std::min(cap, it->second);
  }
  return cap;
}

}  // namespace

BenchReport run_bench(const BenchConfig& cfg, const ProgressFn& progress) {
  cfg.validate();
  BenchReport report;
  report.epochs = cfg.epochs;
  report.threads = thread_count();
  for (int n : cfg.qubit_range) {
    for (ModelKind kind : cfg.model_kinds) {
      for (int batch : cfg.batch_sizes) {
        if (n > qubit_cap(cfg, kind, batch)) continue;
        optim::TrainConfig tc;
        tc.learning_rate = cfg.learning_rate;
        tc.epochs = cfg.epochs;
        tc.batch_size = batch;
        tc.seed = cfg.seed;
        tc.model_kind = kind;
        tc.warmup_epochs = 1;
        // Both kinds carry 4^N trainable parameters.
        tc.ansatz_params = std::size_t{1} << (2 * n);

        BenchRow row;
        row.n_qubits = n;
        row.model_kind = kind;
        row.batch_size = batch;
        row.dataset_size = cfg.dataset_size;
        row.n_params = tc.ansatz_params;
        try {
          const optim::TrainReport tr = optim::train_identity(tc, n, cfg.dataset_size);
          row.samples = tr.epoch_times;
          row.final_loss = tr.final_loss;
          std::tie(row.mean_epoch_seconds, row.std_epoch_seconds) = mean_std(row.samples);
        } catch (const std::bad_alloc&) {
          row.error = "out of memory";
        } catch (const std::exception& e) {
          row.error = e.what();
        }
        if (progress) progress(row);
        report.rows.push_back(std::move(row));
      }
    }
  }
  return report;
}

ReportFormat report_format_from_string(const std::string& name) {
  if (name == "csv") return ReportFormat::Csv;
  if (name == "json") return ReportFormat::Json;
  if (name == "markdown" || name == "md") return ReportFormat::Markdown;
  throw ParseError("unknown report format '" + name + "'");
}

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

std::string column_label(ModelKind kind, int batch) {
  return std::string(optim::to_string(kind)) + "_b" + std::to_string(batch);
}

struct Pivot {
  std::vector<std::pair<ModelKind, int>> columns;  // first-appearance order
  std::vector<int> qubits;                         // ascending
};

Pivot pivot(const BenchReport& r) {
  Pivot p;
  std::set<int> qubits;
  for (const auto& row : r.rows) {
    const std::pair<ModelKind, int> key{row.model_kind, row.batch_size};
    if (std::find(p.columns.begin(), p.columns.end(), key) == p.columns.end()) p.columns.push_back(key);
    qubits.insert(row.n_qubits);
  }
  p.qubits.assign(qubits.begin(), qubits.end());
  return p;
}

}  // namespace

std::string emit_report(const BenchReport& r, ReportFormat format) {
  if (format == ReportFormat::Json) return to_json(r).dump(2) + "\n";

  const Pivot p = pivot(r);
  std::ostringstream out;
  if (format == ReportFormat::Csv) {
    out << "qubits";
    for (const auto& [kind, batch] : p.columns) {
      out << ',' << column_label(kind, batch) << "_mean," << column_label(kind, batch) << "_std";
    }
    out << '\n';
    for (int n : p.qubits) {
      out << n;
      for (const auto& [kind, batch] : p.columns) {
        const BenchRow* row = r.find(n, kind, batch);
        if (row == nullptr || !row->error.empty()) {
          out << ",,";
        } else {
          out << ',' << sci(row->mean_epoch_seconds) << ',' << sci(row->std_epoch_seconds);
        }
      }
      out << '\n';
    }
    return out.str();
  }

  out << "| qubits |";
  for (const auto& [kind, batch] : p.columns) out << ' ' << optim::to_string(kind) << " (batch " << batch << ") |";
  out << "\n|---|";
  for (std::size_t i = 0; i < p.columns.size(); ++i) out << "---|";
  out << '\n';
  for (int n : p.qubits) {
    out << "| " << n << " |";
    for (const auto& [kind, batch] : p.columns) {
      const BenchRow* row = r.find(n, kind, batch);
      if (row == nullptr) {
        out << "  |";
      } else if (!row->error.empty()) {
        out << " " << row->error << " |";
      } else {
        out << ' ' << sci(row->mean_epoch_seconds) << " ± " << sci(row->std_epoch_seconds) << " |";
      }
    }
    out << '\n';
  }
  out << "\nSeconds per epoch over " << r.epochs << " epochs";
  if (!r.rows.empty()) out << " on " << r.rows.front().dataset_size << " data points";
  out << "; " << r.threads << " thread(s).\n";
  return out.str();
}

nlohmann::json to_json(const BenchReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"n_qubits", row.n_qubits},
                    {"model_kind", optim::to_string(row.model_kind)},
                    {"batch_size", row.batch_size},
                    {"dataset_size", row.dataset_size},
                    {"n_params", row.n_params},
                    {"mean_epoch_seconds", row.mean_epoch_seconds},
                    {"std_epoch_seconds", row.std_epoch_seconds},
                    {"samples", row.samples},
                    {"final_loss", row.final_loss},
                    {"error", row.error}});
  }
  return {{"epochs", r.epochs}, {"threads", r.threads}, {"rows", std::move(rows)}};
}

BenchReport bench_report_from_json(const nlohmann::json& j) {
  BenchReport r;
  try {
    r.epochs = j.at("epochs").get<int>();
    r.threads = j.at("threads").get<int>();
    for (const auto& jr : j.at("rows")) {
      BenchRow row;
      row.n_qubits = jr.at("n_qubits").get<int>();
      row.model_kind = optim::model_kind_from_string(jr.at("model_kind").get<std::string>());
      row.batch_size = jr.at("batch_size").get<int>();
      row.dataset_size = jr.at("dataset_size").get<int>();
      row.n_params = jr.at("n_params").get<std::size_t>();
      row.mean_epoch_seconds = jr.at("mean_epoch_seconds").get<double>();
      row.std_epoch_seconds = jr.at("std_epoch_seconds").get<double>();
      row.samples = jr.at("samples").get<std::vector<double>>();
      row.final_loss = jr.at("final_loss").get<double>();
      row.error = jr.at("error").get<std::string>();
      r.rows.push_back(std::move(row));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bench report: ") + e.what());
  }
  return r;
}

}  // namespace uf::bench
