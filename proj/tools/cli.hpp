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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace uf::cli {

enum class Command { Bench, TrainIdentity, QuanvDemo };

const char* to_string(Command c);

struct RunManifest {
  Command command = Command::Bench;
  std::string config_path;
  std::string output_dir;
  std::optional<std::uint64_t> seed_override;
};

// Documented process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitUsage = 64;

struct ParseResult {
  std::optional<RunManifest> manifest;
  int exit_code = kExitOk;  // meaningful only when manifest is empty
  std::string message;      // usage text or diagnostic
};

// argv excludes the program name.
ParseResult parse_args(const std::vector<std::string>& argv);

int execute(const RunManifest& m, std::ostream& log);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace uf::cli
