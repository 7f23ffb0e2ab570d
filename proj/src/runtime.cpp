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

#include "unitary_forge/runtime.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cstdlib>
#include <mutex>
#include <string>

namespace uf {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

int threads_from_env() {
  const char* raw = std::getenv("UNITARY_FORGE_THREADS");
  if (raw == nullptr) return 1;
  try {
    return std::max(1, std::stoi(raw));
  } catch (...) {
    return 1;
  }
}

std::once_flag g_init_once;
int g_threads = 1;

void ensure_init() {
  std::call_once(g_init_once, [] {
    g_threads = threads_from_env();
    Eigen::setNbThreads(g_threads);
  });
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t root, std::string_view tag) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(splitmix64(root) ^ h);
}

int thread_count() {
  ensure_init();
  return g_threads;
}

void set_thread_count(int n) {
  ensure_init();
  g_threads = std::max(1, n);
  Eigen::setNbThreads(g_threads);
}

}  // namespace uf
