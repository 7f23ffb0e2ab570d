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

#include <chrono>
#include <cstdint>
#include <string_view>

namespace uf {

// Derives an independent sub-seed for a named component from a root seed.
// Stable across platforms (splitmix64 over an FNV-1a hash of the tag).
std::uint64_t derive_seed(std::uint64_t root, std::string_view tag);

// Number of threads the numeric kernels may use. Read once from
// UNITARY_FORGE_THREADS (default 1) unless overridden by set_thread_count.
int thread_count();
void set_thread_count(int n);

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace uf
