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

#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "unitary_forge/unitary_forge.h"

namespace uf::cli {

namespace fs = std::filesystem;

const char* to_string(Command c) {
  switch (c) {
    case Command::Bench: return "bench";
    case Command::TrainIdentity: return "train-identity";
    case Command::QuanvDemo: return "quanv-demo";
  }
  return "?";
}

namespace {

struct TextDeleter {
  void operator()(uf_text* t) const { uf_text_destroy(t); }
};
using Text = std::unique_ptr<uf_text, TextDeleter>;

int exit_for(uf_status s) {
  switch (s) {
    case UF_OK: return kExitOk;
    case UF_ERR_PARSE: return kExitConfig;
    case UF_ERR_IO: return kExitIo;
    default: return kExitRuntime;
  }
}

class Failure {
 public:
  Failure(int code, std::string msg) : code(code), message(std::move(msg)) {}
  int code;
  std::string message;
};

void check(uf_status s, const char* what) {
  if (s != UF_OK) {
    throw Failure(exit_for(s), std::string(what) + ": " + uf_status_name(s) + ": " + uf_last_error());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure(kExitIo, "cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw Failure(kExitIo, "cannot write '" + path.string() + "'");
}

std::string take(uf_text* t) {
  Text owned(t);
  return std::string(uf_text_data(t), uf_text_size(t));
}

// CSV dataset paths are resolved against the config file's directory.
std::string resolve_dataset_path(const std::string& config_text, const std::string& config_path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(config_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Failure(kExitConfig, std::string("invalid JSON config: ") + e.what());
  }
  if (!j.is_object() || !j.contains("dataset") || !j["dataset"].is_object()) return config_text;
  auto& ds = j["dataset"];
  if (!ds.contains("path") || !ds["path"].is_string()) return config_text;
  fs::path p = ds["path"].get<std::string>();
  if (p.is_relative()) ds["path"] = (fs::path(config_path).parent_path() / p).string();
  return j.dump();
}

void run_bench(const std::string& config, const uint64_t* seed, const fs::path& out, std::ostream& log) {
  uf_bench_report* raw = nullptr;
  auto progress = [](const char* row, void* user) { *static_cast<std::ostream*>(user) << row << "\n"; };
  check(uf_run_bench(config.c_str(), seed, progress, &log, &raw), "bench");
  std::unique_ptr<uf_bench_report, void (*)(uf_bench_report*)> report(raw, uf_bench_report_destroy);
  const std::pair<uf_report_format, const char*> outputs[] = {
      {UF_REPORT_CSV, "report.csv"}, {UF_REPORT_JSON, "report.json"}, {UF_REPORT_MARKDOWN, "report.md"}};
  for (const auto& [format, name] : outputs) {
    uf_text* t = nullptr;
    check(uf_bench_report_emit(report.get(), format, &t), "bench report");
    write_file(out / name, take(t));
  }
}

void run_train(const std::string& config, const uint64_t* seed, const fs::path& out, std::ostream& log) {
  uf_train_report* raw = nullptr;
  check(uf_train_identity(config.c_str(), seed, &raw), "train-identity");
  std::unique_ptr<uf_train_report, void (*)(uf_train_report*)> report(raw, uf_train_report_destroy);
  uf_text* t = nullptr;
  check(uf_train_report_json(report.get(), &t), "train report");
  write_file(out / "train_report.json", take(t));
  check(uf_train_report_checkpoint(report.get(), &t), "checkpoint");
  write_file(out / "checkpoint.json", take(t));
  check(uf_train_report_csv(report.get(), &t), "loss curve");
  write_file(out / "loss_curve.csv", take(t));
  log << "final_loss " << uf_train_report_final_loss(report.get()) << "\n";
}

void run_quanv(const std::string& config, const uint64_t* seed, const fs::path& out, std::ostream& log) {
  uf_text* t = nullptr;
  check(uf_quanv_demo(config.c_str(), seed, &t), "quanv-demo");
  const std::string report = take(t);
  write_file(out / "quanv_report.json", report);
  try {
    log << "final_accuracy " << nlohmann::json::parse(report).at("final_accuracy").get<double>() << "\n";
  } catch (const nlohmann::json::exception&) {
  }
}

}  // namespace

ParseResult parse_args(const std::vector<std::string>& argv) {
  CLI::App app{"Ansatz-free quantum circuit optimization: training, benchmarks and quanvolution demo",
               "unitary_forge"};
  app.require_subcommand(1);
  RunManifest m;
  std::uint64_t seed = 0;

  auto add = [&](const char* name, const char* help, Command c) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", m.config_path, "JSON config file")->required();
    sub->add_option("--out", m.output_dir, "output directory (created if missing)")->required();
    sub->add_option("--seed", seed, "override the config seed");
    sub->callback([&m, c] { m.command = c; });
    return sub;
  };
  CLI::App* bench = add("bench", "epoch timing sweep; writes report.{csv,json,md}", Command::Bench);
  CLI::App* train = add("train-identity", "identity learning; writes train_report.json, checkpoint.json",
                        Command::TrainIdentity);
  CLI::App* quanv = add("quanv-demo", "quanvolution classifier demo; writes quanv_report.json", Command::QuanvDemo);

  std::vector<const char*> args{"unitary_forge"};
  for (const auto& a : argv) args.push_back(a.c_str());
  ParseResult r;
  try {
    app.parse(static_cast<int>(args.size()), args.data());
  } catch (const CLI::CallForHelp&) {
    r.exit_code = kExitOk;
    r.message = app.help();
    return r;
  } catch (const CLI::ParseError& e) {
    r.exit_code = kExitUsage;
    r.message = std::string(e.what()) + "\n" + app.help();
    return r;
  }
  for (CLI::App* sub : {bench, train, quanv}) {
    if (sub->parsed() && sub->count("--seed") > 0) m.seed_override = seed;
  }
  if (m.config_path.empty() || m.output_dir.empty()) {
    r.exit_code = kExitUsage;
    r.message = "--config and --out must be non-empty\n";
    return r;
  }
  r.manifest = m;
  return r;
}

int execute(const RunManifest& m, std::ostream& log) {
  try {
    std::string config = read_file(m.config_path);
    std::error_code ec;
    fs::create_directories(m.output_dir, ec);
    if (ec) throw Failure(kExitIo, "cannot create output directory '" + m.output_dir + "': " + ec.message());
    const uint64_t* seed = m.seed_override ? &*m.seed_override : nullptr;
    const fs::path out(m.output_dir);
    switch (m.command) {
      case Command::Bench: run_bench(config, seed, out, log); break;
      case Command::TrainIdentity: run_train(config, seed, out, log); break;
      case Command::QuanvDemo: run_quanv(resolve_dataset_path(config, m.config_path), seed, out, log); break;
    }
    return kExitOk;
  } catch (const Failure& f) {
    log << "error: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  ParseResult r = parse_args(args);
  if (!r.manifest) {
    (r.exit_code == kExitOk ? out : err) << r.message;
    return r.exit_code;
  }
  err << "threads " << uf_thread_count() << "\n";
  return execute(*r.manifest, err);
}

}  // namespace uf::cli
