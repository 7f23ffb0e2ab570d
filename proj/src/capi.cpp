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

#include "unitary_forge/unitary_forge.h"

#include <cstring>
#include <new>
#include <string>
#include <utility>

#include <json.hpp>

#include "unitary_forge/bench.hpp"
#include "unitary_forge/circuit.hpp"
#include "unitary_forge/errors.hpp"
#include "unitary_forge/liegroup.hpp"
#include "unitary_forge/linalg.hpp"
#include "unitary_forge/optim.hpp"
#include "unitary_forge/quanv.hpp"
#include "unitary_forge/runtime.hpp"

struct uf_matrix {
  uf::linalg::ComplexMatrix m;
};
struct uf_params {
  uf::lie::SkewHermitianParams p;
};
struct uf_state {
  uf::circuit::StateBatch s;
};
struct uf_ansatz {
  uf::circuit::AnsatzCircuit c;
};
struct uf_partitioned {
  uf::circuit::PartitionedUnitary pu;
};
struct uf_train_report {
  uf::optim::TrainReport r;
};
struct uf_bench_report {
  uf::bench::BenchReport r;
};
struct uf_text {
  std::string s;
};

namespace {

thread_local std::string g_last_error;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class Fn>
uf_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return UF_OK;
  } catch (const uf::ContractError& e) {
    g_last_error = e.what();
    return UF_ERR_CONTRACT;
  } catch (const uf::DomainError& e) {
    g_last_error = e.what();
    return UF_ERR_DOMAIN;
  } catch (const uf::ParseError& e) {
    g_last_error = e.what();
    return UF_ERR_PARSE;
  } catch (const nlohmann::json::exception& e) {
    g_last_error = e.what();
    return UF_ERR_PARSE;
  } catch (const IoError& e) {
    g_last_error = e.what();
    return UF_ERR_IO;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return UF_ERR_OUT_OF_MEMORY;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return UF_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return UF_ERR_INTERNAL;
  }
}

#define UF_REQUIRE(ptr)                                                        \
  do {                                                                         \
    if ((ptr) == nullptr) {                                                    \
      g_last_error = std::string("null argument: ") + #ptr;                    \
      return UF_ERR_NULL_ARGUMENT;                                             \
    }                                                                          \
  } while (0)

uf::linalg::ComplexMatrix matrix_from_interleaved(std::size_t rows, std::size_t cols, const double* data) {
  uf::linalg::ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t k = 2 * (r * cols + c);
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = {data[k], data[k + 1]};
    }
  }
  return m;
}

void check_out_len(std::size_t have, std::size_t need) {
  if (have < need) {
    throw uf::ContractError("output buffer holds " + std::to_string(have) + " doubles, need " +
                            std::to_string(need));
  }
}

void write_interleaved(const uf::linalg::ComplexMatrix& m, double* out) {
  // row-major
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const std::size_t k = 2 * static_cast<std::size_t>(r * m.cols() + c);
      out[k] = m(r, c).real();
      out[k + 1] = m(r, c).imag();
    }
  }
}

nlohmann::json parse_json(const char* text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw uf::ParseError(std::string("invalid JSON: ") + e.what());
  }
}

uf::quanv::LabeledImages load_dataset(const nlohmann::json& j, std::uint64_t seed) {
  const std::string kind = j.value("kind", "synthetic");
  const int channels = j.value("channels", 16);
  const int height = j.value("height", 8);
  const int width = j.value("width", 8);
  if (kind == "synthetic") {
    return uf::quanv::make_bright_half_dataset(j.value("n_images", 64), channels, height, width,
                                               j.value("noise", 0.1), uf::derive_seed(seed, "dataset"));
  }
  if (kind == "csv") {
    const std::string path = j.at("path").get<std::string>();
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (f == nullptr) throw IoError("cannot open dataset '" + path + "'");
    std::fclose(f);
    return uf::quanv::load_csv_dataset(path, channels, height, width);
  }
  throw uf::ParseError("unknown dataset kind '" + kind + "'");
}

}  // namespace

extern "C" {

const char* uf_version(void) { return "1.0.0"; }

const char* uf_last_error(void) { return g_last_error.c_str(); }

const char* uf_status_name(uf_status status) {
  switch (status) {
    case UF_OK: return "ok";
    case UF_ERR_NULL_ARGUMENT: return "null argument";
    case UF_ERR_CONTRACT: return "contract violation";
    case UF_ERR_DOMAIN: return "domain error";
    case UF_ERR_PARSE: return "parse error";
    case UF_ERR_IO: return "i/o error";
    case UF_ERR_OUT_OF_MEMORY: return "out of memory";
    case UF_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

int uf_thread_count(void) { return uf::thread_count(); }

uf_status uf_set_thread_count(int n) {
  return guarded([&] {
    if (n < 1) throw uf::ContractError("thread count must be >= 1");
    uf::set_thread_count(n);
  });
}

// --- text --------------------------------------------------------------------

const char* uf_text_data(const uf_text* text) { return text ? text->s.c_str() : ""; }
size_t uf_text_size(const uf_text* text) { return text ? text->s.size() : 0; }
void uf_text_destroy(uf_text* text) { delete text; }

// --- matrices -----------------------------------------------------------------

uf_status uf_matrix_create(size_t dim, const double* data, uf_matrix** out) {
  UF_REQUIRE(data);
  UF_REQUIRE(out);
  return guarded([&] {
    if (dim < 1) throw uf::ContractError("matrix dimension must be >= 1");
    *out = new uf_matrix{matrix_from_interleaved(dim, dim, data)};
  });
}

void uf_matrix_destroy(uf_matrix* m) { delete m; }

size_t uf_matrix_dim(const uf_matrix* m) { return m ? static_cast<size_t>(m->m.rows()) : 0; }

uf_status uf_matrix_read(const uf_matrix* m, double* out, size_t out_len) {
  UF_REQUIRE(m);
  UF_REQUIRE(out);
  return guarded([&] {
    check_out_len(out_len, 2 * static_cast<std::size_t>(m->m.size()));
    write_interleaved(m->m, out);
  });
}

uf_status uf_matexp(const uf_matrix* a, uf_matrix** out) {
  UF_REQUIRE(a);
  UF_REQUIRE(out);
  return guarded([&] { *out = new uf_matrix{uf::linalg::matexp(a->m)}; });
}

uf_status uf_matexp_vjp(const uf_matrix* a, const uf_matrix* cotangent, uf_matrix** out) {
  UF_REQUIRE(a);
  UF_REQUIRE(cotangent);
  UF_REQUIRE(out);
  return guarded([&] { *out = new uf_matrix{uf::linalg::matexp_vjp(a->m, cotangent->m)}; });
}

uf_status uf_unitarity_error(const uf_matrix* m, double* out) {
  UF_REQUIRE(m);
  UF_REQUIRE(out);
  return guarded([&] { *out = uf::linalg::unitarity_error(m->m); });
}

uf_status uf_random_unitary(size_t dim, uint64_t seed, uf_matrix** out) {
  UF_REQUIRE(out);
  return guarded([&] {
    *out = new uf_matrix{uf::linalg::random_unitary(static_cast<Eigen::Index>(dim), seed).matrix()};
  });
}

// --- params -------------------------------------------------------------------------

uf_status uf_params_create(size_t dim, const double* theta, size_t theta_len, uf_params** out) {
  UF_REQUIRE(theta);
  UF_REQUIRE(out);
  return guarded([&] {
    *out = new uf_params{uf::lie::SkewHermitianParams(static_cast<Eigen::Index>(dim),
                                                      std::vector<double>(theta, theta + theta_len))};
  });
}

uf_status uf_params_random(size_t dim, uint64_t seed, uf_params** out) {
  UF_REQUIRE(out);
  return guarded([&] { *out = new uf_params{uf::lie::random_params(static_cast<Eigen::Index>(dim), seed)}; });
}

void uf_params_destroy(uf_params* p) { delete p; }
size_t uf_params_dim(const uf_params* p) { return p ? static_cast<size_t>(p->p.dim()) : 0; }
size_t uf_params_count(const uf_params* p) { return p ? p->p.theta().size() : 0; }

uf_status uf_params_read(const uf_params* p, double* out, size_t out_len) {
  UF_REQUIRE(p);
  UF_REQUIRE(out);
  return guarded([&] {
    check_out_len(out_len, p->p.theta().size());
    std::memcpy(out, p->p.theta().data(), p->p.theta().size() * sizeof(double));
  });
}

uf_status uf_params_assemble(const uf_params* p, uf_matrix** out) {
  UF_REQUIRE(p);
  UF_REQUIRE(out);
  return guarded([&] { *out = new uf_matrix{uf::lie::assemble(p->p)}; });
}

uf_status uf_params_disassemble(const uf_matrix* x, uf_params** out) {
  UF_REQUIRE(x);
  UF_REQUIRE(out);
  return guarded([&] { *out = new uf_params{uf::lie::disassemble(x->m)}; });
}

uf_status uf_params_to_unitary(const uf_params* p, uf_matrix** out) {
  UF_REQUIRE(p);
  UF_REQUIRE(out);
  return guarded([&] { *out = new uf_matrix{uf::lie::to_unitary(p->p).matrix()}; });
}

uf_status uf_params_grad(const uf_matrix* cotangent, double* out, size_t out_len) {
  UF_REQUIRE(cotangent);
  UF_REQUIRE(out);
  return guarded([&] {
    const std::vector<double> g = uf::lie::param_grad(cotangent->m);
    check_out_len(out_len, g.size());
    std::memcpy(out, g.data(), g.size() * sizeof(double));
  });
}

uf_status uf_params_to_json(const uf_params* p, uf_text** out) {
  UF_REQUIRE(p);
  UF_REQUIRE(out);
  return guarded([&] { *out = new uf_text{uf::lie::to_json(p->p).dump()}; });
}

uf_status uf_params_from_json(const char* json, uf_params** out) {
  UF_REQUIRE(json);
  UF_REQUIRE(out);
  return guarded([&] { *out = new uf_params{uf::lie::params_from_json(parse_json(json))}; });
}

// --- states -------------------------------------------------------------------------

uf_status uf_state_create(int n_qubits, size_t batch, const double* amplitudes, uf_state** out) {
  UF_REQUIRE(amplitudes);
  UF_REQUIRE(out);
  return guarded([&] {
    if (n_qubits < 1 || n_qubits > 30) throw uf::ContractError("n_qubits must be in 1..30");
    const std::size_t d = std::size_t{1} << n_qubits;
    // Row-major B x d input becomes the d x B column-per-state layout.
    uf::linalg::ComplexMatrix rows = matrix_from_interleaved(batch, d, amplitudes);
    *out = new uf_state{uf::circuit::StateBatch(n_qubits, rows.transpose())};
  });
}

uf_status uf_state_rx_encode(int n_qubits, size_t batch, const double* features, uf_state** out) {
  UF_REQUIRE(features);
  UF_REQUIRE(out);
  return guarded([&] {
    if (n_qubits < 1) throw uf::ContractError("n_qubits must be >= 1");
    uf::circuit::RealMatrix f(static_cast<Eigen::Index>(batch), n_qubits);
    for (std::size_t b = 0; b < batch; ++b) {
      for (int i = 0; i < n_qubits; ++i) f(static_cast<Eigen::Index>(b), i) = features[b * n_qubits + i];
    }
    *out = new uf_state{uf::circuit::rx_encode(f)};
  });
}

void uf_state_destroy(uf_state* s) { delete s; }
int uf_state_qubits(const uf_state* s) { return s ? s->s.n_qubits() : 0; }
size_t uf_state_batch(const uf_state* s) { return s ? static_cast<size_t>(s->s.batch()) : 0; }

uf_status uf_state_read(const uf_state* s, double* out, size_t out_len) {
  UF_REQUIRE(s);
  UF_REQUIRE(out);
  return guarded([&] {
    check_out_len(out_len, 2 * static_cast<std::size_t>(s->s.amplitudes().size()));
    write_interleaved(s->s.amplitudes().transpose(), out);
  });
}

uf_status uf_state_z_expectations(const uf_state* s, double* out, size_t out_len) {
  UF_REQUIRE(s);
  UF_REQUIRE(out);
  return guarded([&] {
    const uf::circuit::RealMatrix z = uf::circuit::z_expectations(s->s);
    check_out_len(out_len, static_cast<std::size_t>(z.size()));
    for (Eigen::Index b = 0; b < z.rows(); ++b) {
      for (Eigen::Index i = 0; i < z.cols(); ++i) out[b * z.cols() + i] = z(b, i);
    }
  });
}

uf_status uf_state_apply_full(const uf_state* s, const uf_matrix* u, uf_state** out) {
  UF_REQUIRE(s);
  UF_REQUIRE(u);
  UF_REQUIRE(out);
  return guarded([&] {
    *out = new uf_state{uf::circuit::apply_full(s->s, uf::linalg::UnitaryMatrix(u->m))};
  });
}

uf_status uf_state_apply_group(const uf_state* s, const int* wires, size_t n_wires,
                               const uf_matrix* u_small, uf_state** out) {
  UF_REQUIRE(s);
  UF_REQUIRE(wires);
  UF_REQUIRE(u_small);
  UF_REQUIRE(out);
  return guarded([&] {
    *out = new uf_state{uf::circuit::apply_group(s->s, std::span<const int>(wires, n_wires),
                                                 uf::linalg::UnitaryMatrix(u_small->m))};
  });
}

uf_status uf_state_apply_gate(const uf_state* s, uf_gate_kind kind, int wire0, int wire1, double theta,
                              uf_state** out) {
  UF_REQUIRE(s);
  UF_REQUIRE(out);
  return guarded([&] {
    uf::circuit::GateOp g;
    switch (kind) {
      case UF_GATE_RX: g = uf::circuit::GateOp::rx(wire0, theta); break;
      case UF_GATE_RY: g = uf::circuit::GateOp::ry(wire0, theta); break;
      case UF_GATE_RZ: g = uf::circuit::GateOp::rz(wire0, theta); break;
      case UF_GATE_CNOT: g = uf::circuit::GateOp::cnot(wire0, wire1); break;
      default: throw uf::ContractError("unknown gate kind");
    }
    *out = new uf_state{uf::circuit::apply_gate(s->s, g)};
  });
}

uf_status uf_state_run_ansatz(const uf_state* s, const uf_ansatz* c, uf_state** out) {
  UF_REQUIRE(s);
  UF_REQUIRE(c);
  UF_REQUIRE(out);
  return guarded([&] { *out = new uf_state{uf::circuit::run_ansatz(s->s, c->c)}; });
}

uf_status uf_state_apply_partitioned(const uf_state* s, const uf_partitioned* pu, uf_state** out) {
  UF_REQUIRE(s);
  UF_REQUIRE(pu);
  UF_REQUIRE(out);
  return guarded([&] { *out = new uf_state{uf::circuit::apply_partitioned(s->s, pu->pu)}; });
}

// --- circuits ----------------------------------------------------------------------------

uf_status uf_ansatz_random_layer(int n_qubits, size_t n_params, uint64_t seed, uf_ansatz** out) {
  UF_REQUIRE(out);
  return guarded([&] { *out = new uf_ansatz{uf::circuit::random_layer(n_qubits, n_params, seed)}; });
}

uf_status uf_ansatz_from_json(const char* json, uf_ansatz** out) {
  UF_REQUIRE(json);
  UF_REQUIRE(out);
  return guarded([&] { *out = new uf_ansatz{uf::circuit::ansatz_from_json(parse_json(json))}; });
}

uf_status uf_ansatz_to_json(const uf_ansatz* c, uf_text** out) {
  UF_REQUIRE(c);
  UF_REQUIRE(out);
  return guarded([&] { *out = new uf_text{uf::circuit::to_json(c->c).dump()}; });
}

size_t uf_ansatz_gate_count(const uf_ansatz* c) { return c ? c->c.ops().size() : 0; }
size_t uf_ansatz_param_count(const uf_ansatz* c) { return c ? c->c.param_count() : 0; }
void uf_ansatz_destroy(uf_ansatz* c) { delete c; }

uf_status uf_partitioned_create(int n_qubits, int k, int m, uint64_t seed, uf_partitioned** out) {
  UF_REQUIRE(out);
  return guarded([&] {
    uf::optim::TrainConfig cfg;
    cfg.model_kind = uf::optim::ModelKind::Partitioned;
    cfg.partition_k = k;
    cfg.partition_layers = m;
    cfg.seed = seed;
    auto model = uf::optim::make_model(cfg, n_qubits);
    *out = new uf_partitioned{std::get<uf::circuit::PartitionedUnitary>(std::move(model))};
  });
}

uf_status uf_partitioned_from_json(const char* json, uf_partitioned** out) {
  UF_REQUIRE(json);
  UF_REQUIRE(out);
  return guarded([&] { *out = new uf_partitioned{uf::circuit::partitioned_from_json(parse_json(json))}; });
}

uf_status uf_partitioned_to_json(const uf_partitioned* pu, uf_text** out) {
  UF_REQUIRE(pu);
  UF_REQUIRE(out);
  return guarded([&] { *out = new uf_text{uf::circuit::to_json(pu->pu).dump()}; });
}

size_t uf_partitioned_param_count(const uf_partitioned* pu) { return pu ? pu->pu.param_count() : 0; }
void uf_partitioned_destroy(uf_partitioned* pu) { delete pu; }

// --- pipelines ------------------------------------------------------------------------------

uf_status uf_train_identity(const char* config_json, const uint64_t* seed_override, uf_train_report** out) {
  UF_REQUIRE(config_json);
  UF_REQUIRE(out);
  return guarded([&] {
    const nlohmann::json j = parse_json(config_json);
    uf::optim::TrainConfig cfg = uf::optim::train_config_from_json(j);
    if (seed_override != nullptr) cfg.seed = *seed_override;
    int n_qubits = 4;
    int dataset_size = 32;
    try {
      n_qubits = j.value("n_qubits", 4);
      dataset_size = j.value("dataset_size", 32);
    } catch (const nlohmann::json::exception& e) {
      throw uf::ParseError(std::string("train config: ") + e.what());
    }
    *out = new uf_train_report{uf::optim::train_identity(cfg, n_qubits, dataset_size)};
  });
}

uf_status uf_train_report_json(const uf_train_report* r, uf_text** out) {
  UF_REQUIRE(r);
  UF_REQUIRE(out);
  return guarded([&] { *out = new uf_text{uf::optim::to_json(r->r).dump(2) + "\n"}; });
}

uf_status uf_train_report_csv(const uf_train_report* r, uf_text** out) {
  UF_REQUIRE(r);
  UF_REQUIRE(out);
  return guarded([&] { *out = new uf_text{uf::optim::loss_curve_csv(r->r)}; });
}

uf_status uf_train_report_checkpoint(const uf_train_report* r, uf_text** out) {
  UF_REQUIRE(r);
  UF_REQUIRE(out);
  return guarded([&] { *out = new uf_text{uf::optim::to_json(r->r.final_model).dump() + "\n"}; });
}

double uf_train_report_final_loss(const uf_train_report* r) { return r ? r->r.final_loss : 0.0; }
void uf_train_report_destroy(uf_train_report* r) { delete r; }

uf_status uf_run_bench(const char* config_json, const uint64_t* seed_override, uf_bench_progress_fn progress,
                       void* user, uf_bench_report** out) {
  UF_REQUIRE(config_json);
  UF_REQUIRE(out);
  return guarded([&] {
    uf::bench::BenchConfig cfg = uf::bench::bench_config_from_json(parse_json(config_json));
    if (seed_override != nullptr) cfg.seed = *seed_override;
    uf::bench::ProgressFn fn;
    if (progress != nullptr) {
      fn = [&](const uf::bench::BenchRow& row) {
        uf::bench::BenchReport one;
        one.rows.push_back(row);
        const std::string text = uf::bench::to_json(one)["rows"][0].dump();
        progress(text.c_str(), user);
      };
    }
    *out = new uf_bench_report{uf::bench::run_bench(cfg, fn)};
  });
}

uf_status uf_bench_report_from_json(const char* json, uf_bench_report** out) {
  UF_REQUIRE(json);
  UF_REQUIRE(out);
  return guarded([&] { *out = new uf_bench_report{uf::bench::bench_report_from_json(parse_json(json))}; });
}

uf_status uf_bench_report_emit(const uf_bench_report* r, uf_report_format format, uf_text** out) {
  UF_REQUIRE(r);
  UF_REQUIRE(out);
  return guarded([&] {
    uf::bench::ReportFormat f;
    switch (format) {
      case UF_REPORT_CSV: f = uf::bench::ReportFormat::Csv; break;
      case UF_REPORT_JSON: f = uf::bench::ReportFormat::Json; break;
      case UF_REPORT_MARKDOWN: f = uf::bench::ReportFormat::Markdown; break;
      default: throw uf::ContractError("unknown report format");
    }
    *out = new uf_text{uf::bench::emit_report(r->r, f)};
  });
}

size_t uf_bench_report_rows(const uf_bench_report* r) { return r ? r->r.rows.size() : 0; }
void uf_bench_report_destroy(uf_bench_report* r) { delete r; }

uf_status uf_quanv_demo(const char* config_json, const uint64_t* seed_override, uf_text** out) {
  UF_REQUIRE(config_json);
  UF_REQUIRE(out);
  return guarded([&] {
    const nlohmann::json j = parse_json(config_json);
    if (!j.is_object()) throw uf::ParseError("quanv config must be a JSON object");
    uf::optim::TrainConfig cfg = uf::optim::train_config_from_json(j.value("train", nlohmann::json::object()));
    if (seed_override != nullptr) cfg.seed = *seed_override;
    uf::quanv::QuanvSpec spec = uf::quanv::quanv_spec_from_json(j.value("spec", nlohmann::json::object()));
    const uf::quanv::LabeledImages data = [&] {
      try {
        return load_dataset(j.value("dataset", nlohmann::json::object()), cfg.seed);
      } catch (const nlohmann::json::exception& e) {
        throw uf::ParseError(std::string("dataset config: ") + e.what());
      }
    }();
    const uf::quanv::QuanvReport report = uf::quanv::train_quanv_demo(data, std::move(spec), cfg);
    *out = new uf_text{uf::quanv::to_json(report).dump(2) + "\n"};
  });
}

}  // extern "C"
