// Copyright 2026 The robustflow Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <atomic>
#include <cstdlib>
#include <string_view>

#include "robustflow/common.h"
#include "robustflow/simd/kernels.h"

namespace robustflow::simd {
namespace {

bool CpuSupports(Backend backend) {
  switch (backend) {
    case Backend::kScalar:
      return true;
    case Backend::kAvx2:
#if defined(__x86_64__) || defined(__i386__)
      return avx2::Compiled() && __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Backend::kNeon:
      // Advanced SIMD is mandatory on AArch64.
      return neon::Compiled();
  }
  return false;
}

Backend DetectBackend() {
  if (const char* env = std::getenv("ROBUSTFLOW_SIMD")) {
    if (std::string_view(env) == "scalar") return Backend::kScalar;
  }
  if (CpuSupports(Backend::kAvx2)) return Backend::kAvx2;
  if (CpuSupports(Backend::kNeon)) return Backend::kNeon;
  return Backend::kScalar;
}

std::atomic<int>& ActiveSlot() {
  static std::atomic<int> slot{static_cast<int>(DetectBackend())};
  return slot;
}

}  // namespace

std::string_view BackendName(Backend backend) {
  switch (backend) {
    case Backend::kScalar: return "scalar";
    case Backend::kAvx2: return "avx2";
    case Backend::kNeon: return "neon";
  }
  return "unknown";
}

std::vector<Backend> AvailableBackends() {
  std::vector<Backend> out;
  for (Backend b : {Backend::kScalar, Backend::kAvx2, Backend::kNeon}) {
    if (CpuSupports(b)) out.push_back(b);
  }
  return out;
}

Backend ActiveBackend() {
  return static_cast<Backend>(ActiveSlot().load(std::memory_order_relaxed));
}

bool SetActiveBackend(Backend backend) {
  if (!CpuSupports(backend)) return false;
  ActiveSlot().store(static_cast<int>(backend), std::memory_order_relaxed);
  return true;
}

void Axpy(std::span<double> y, std::span<const double> x, double a) {
  if (y.size() != x.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "Axpy operands differ in length");
  }
  switch (ActiveBackend()) {
    case Backend::kAvx2: avx2::Axpy(y.data(), x.data(), a, y.size()); return;
    case Backend::kNeon: neon::Axpy(y.data(), x.data(), a, y.size()); return;
    case Backend::kScalar: break;
  }
  scalar::Axpy(y.data(), x.data(), a, y.size());
}

void Scale(std::span<double> x, double a) {
  switch (ActiveBackend()) {
    case Backend::kAvx2: avx2::Scale(x.data(), a, x.size()); return;
    case Backend::kNeon: neon::Scale(x.data(), a, x.size()); return;
    case Backend::kScalar: break;
  }
  scalar::Scale(x.data(), a, x.size());
}

}  // namespace robustflow::simd
