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

/* C interface to the unitary-forge library.
 *
 * Every object is an opaque handle created by a uf_*_create / producing call
 * and released with the matching uf_*_destroy. Functions return a uf_status;
 * on failure uf_last_error() describes the problem (thread-local, valid until
 * the next call on the same thread). Output handles are only written on
 * success.
 *
 * Complex data crosses the boundary as interleaved (re, im) doubles. State
 * batches are B x 2^N row-major: state b occupies entries
 * [2 * b * 2^N, 2 * (b + 1) * 2^N). Wire 0 is the most significant bit of the
 * basis-state index.
 */
#ifndef UNITARY_FORGE_H_
#define UNITARY_FORGE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(UF_BUILDING_LIBRARY)
#    define UF_API __declspec(dllexport)
#  else
#    define UF_API __declspec(dllimport)
#  endif
#else
#  define UF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum uf_status {
  UF_OK = 0,
  UF_ERR_NULL_ARGUMENT = 1, /* a required pointer was NULL */
  UF_ERR_CONTRACT = 2,      /* shape, length or index precondition violated */
  UF_ERR_DOMAIN = 3,        /* mathematically invalid input */
  UF_ERR_PARSE = 4,         /* malformed JSON, CSV or configuration */
  UF_ERR_IO = 5,            /* file could not be read */
  UF_ERR_OUT_OF_MEMORY = 6,
  UF_ERR_INTERNAL = 7
} uf_status;

typedef enum uf_gate_kind { UF_GATE_RX = 0, UF_GATE_RY = 1, UF_GATE_RZ = 2, UF_GATE_CNOT = 3 } uf_gate_kind;

typedef enum uf_report_format { UF_REPORT_CSV = 0, UF_REPORT_JSON = 1, UF_REPORT_MARKDOWN = 2 } uf_report_format;

typedef struct uf_matrix uf_matrix;             /* square complex matrix */
typedef struct uf_params uf_params;             /* skew-Hermitian coordinates */
typedef struct uf_state uf_state;               /* batch of statevectors */
typedef struct uf_ansatz uf_ansatz;             /* composed-gate circuit */
typedef struct uf_partitioned uf_partitioned;   /* partitioned unitary */
typedef struct uf_train_report uf_train_report;
typedef struct uf_bench_report uf_bench_report;
typedef struct uf_text uf_text;                 /* owned UTF-8 string */

UF_API const char* uf_version(void);
UF_API const char* uf_last_error(void);
UF_API const char* uf_status_name(uf_status status);

/* Internal thread cap (UNITARY_FORGE_THREADS by default). */
UF_API int uf_thread_count(void);
UF_API uf_status uf_set_thread_count(int n);

/* --- text ---------------------------------------------------------------- */
UF_API const char* uf_text_data(const uf_text* text);
UF_API size_t uf_text_size(const uf_text* text);
UF_API void uf_text_destroy(uf_text* text);

/* --- matrices -------------------------------------------------------------- */
/* data: dim * dim interleaved complex entries, row-major. */
UF_API uf_status uf_matrix_create(size_t dim, const double* data, uf_matrix** out);
UF_API void uf_matrix_destroy(uf_matrix* m);
UF_API size_t uf_matrix_dim(const uf_matrix* m);
/* Copies 2 * dim * dim doubles (row-major, interleaved) into out. */
UF_API uf_status uf_matrix_read(const uf_matrix* m, double* out, size_t out_len);
UF_API uf_status uf_matexp(const uf_matrix* a, uf_matrix** out);
UF_API uf_status uf_matexp_vjp(const uf_matrix* a, const uf_matrix* cotangent, uf_matrix** out);
UF_API uf_status uf_unitarity_error(const uf_matrix* m, double* out);
UF_API uf_status uf_random_unitary(size_t dim, uint64_t seed, uf_matrix** out);

/* --- Lie-algebra parameters ----------------------------------------------- */
/* theta: dim * dim reals. */
UF_API uf_status uf_params_create(size_t dim, const double* theta, size_t theta_len, uf_params** out);
/* theta ~ Normal(0, 1/dim). */
UF_API uf_status uf_params_random(size_t dim, uint64_t seed, uf_params** out);
UF_API void uf_params_destroy(uf_params* p);
UF_API size_t uf_params_dim(const uf_params* p);
UF_API size_t uf_params_count(const uf_params* p);
UF_API uf_status uf_params_read(const uf_params* p, double* out, size_t out_len);
UF_API uf_status uf_params_assemble(const uf_params* p, uf_matrix** out);
UF_API uf_status uf_params_disassemble(const uf_matrix* x, uf_params** out);
UF_API uf_status uf_params_to_unitary(const uf_params* p, uf_matrix** out);
/* Gradient with respect to theta of Re<cotangent, assemble(theta)>. */
UF_API uf_status uf_params_grad(const uf_matrix* cotangent, double* out, size_t out_len);
/* {"dim": d, "theta": [...]} */
UF_API uf_status uf_params_to_json(const uf_params* p, uf_text** out);
UF_API uf_status uf_params_from_json(const char* json, uf_params** out);

/* --- states ----------------------------------------------------------------- */
/* amplitudes: batch * 2^n_qubits interleaved complex values; rows normalized. */
UF_API uf_status uf_state_create(int n_qubits, size_t batch, const double* amplitudes, uf_state** out);
/* features: batch x n_qubits row-major angles. */
UF_API uf_status uf_state_rx_encode(int n_qubits, size_t batch, const double* features, uf_state** out);
UF_API void uf_state_destroy(uf_state* s);
UF_API int uf_state_qubits(const uf_state* s);
UF_API size_t uf_state_batch(const uf_state* s);
UF_API uf_status uf_state_read(const uf_state* s, double* out, size_t out_len);
/* out: batch x n_qubits row-major. */
UF_API uf_status uf_state_z_expectations(const uf_state* s, double* out, size_t out_len);
UF_API uf_status uf_state_apply_full(const uf_state* s, const uf_matrix* u, uf_state** out);
UF_API uf_status uf_state_apply_group(const uf_state* s, const int* wires, size_t n_wires,
                                      const uf_matrix* u_small, uf_state** out);
UF_API uf_status uf_state_apply_gate(const uf_state* s, uf_gate_kind kind, int wire0, int wire1,
                                     double theta, uf_state** out);
UF_API uf_status uf_state_run_ansatz(const uf_state* s, const uf_ansatz* c, uf_state** out);
UF_API uf_status uf_state_apply_partitioned(const uf_state* s, const uf_partitioned* pu, uf_state** out);

/* --- circuits ----------------------------------------------------------------- */
UF_API uf_status uf_ansatz_random_layer(int n_qubits, size_t n_params, uint64_t seed, uf_ansatz** out);
UF_API uf_status uf_ansatz_from_json(const char* json, uf_ansatz** out);
UF_API uf_status uf_ansatz_to_json(const uf_ansatz* c, uf_text** out);
UF_API size_t uf_ansatz_gate_count(const uf_ansatz* c);
UF_API size_t uf_ansatz_param_count(const uf_ansatz* c);
UF_API void uf_ansatz_destroy(uf_ansatz* c);

/* m layers of k-wire groups; parameters ~ Normal(0, 1/2^k) when seed-driven. */
UF_API uf_status uf_partitioned_create(int n_qubits, int k, int m, uint64_t seed, uf_partitioned** out);
UF_API uf_status uf_partitioned_from_json(const char* json, uf_partitioned** out);
UF_API uf_status uf_partitioned_to_json(const uf_partitioned* pu, uf_text** out);
UF_API size_t uf_partitioned_param_count(const uf_partitioned* pu);
UF_API void uf_partitioned_destroy(uf_partitioned* pu);

/* --- pipelines -------------------------------------------------------------------- */
/* config_json: training configuration plus "n_qubits" and "dataset_size".
 * seed_override is applied when non-NULL. */
UF_API uf_status uf_train_identity(const char* config_json, const uint64_t* seed_override,
                                   uf_train_report** out);
UF_API uf_status uf_train_report_json(const uf_train_report* r, uf_text** out);
UF_API uf_status uf_train_report_csv(const uf_train_report* r, uf_text** out);
UF_API uf_status uf_train_report_checkpoint(const uf_train_report* r, uf_text** out);
UF_API double uf_train_report_final_loss(const uf_train_report* r);
UF_API void uf_train_report_destroy(uf_train_report* r);

typedef void (*uf_bench_progress_fn)(const char* row_json, void* user);
UF_API uf_status uf_run_bench(const char* config_json, const uint64_t* seed_override,
                              uf_bench_progress_fn progress, void* user, uf_bench_report** out);
UF_API uf_status uf_bench_report_from_json(const char* json, uf_bench_report** out);
UF_API uf_status uf_bench_report_emit(const uf_bench_report* r, uf_report_format format, uf_text** out);
UF_API size_t uf_bench_report_rows(const uf_bench_report* r);
UF_API void uf_bench_report_destroy(uf_bench_report* r);

/* config_json: {"dataset": {...}, "spec": {...}, "train": {...}}; returns
 * the report as JSON text. */
UF_API uf_status uf_quanv_demo(const char* config_json, const uint64_t* seed_override, uf_text** out);

#ifdef __cplusplus
}
#endif

#endif /* UNITARY_FORGE_H_ */
