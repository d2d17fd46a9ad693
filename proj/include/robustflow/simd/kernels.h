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

// Row kernels used by the tableau pivot. Every backend performs the same
// sequence of IEEE multiplies and adds per element (no fused multiply-add),
// so all backends produce bit-identical results.

#ifndef ROBUSTFLOW_SIMD_KERNELS_H_
#define ROBUSTFLOW_SIMD_KERNELS_H_

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace robustflow::simd {

enum class Backend { kScalar, kAvx2, kNeon };

std::string_view BackendName(Backend backend);

// Backends compiled into this binary and supported by the running CPU.
// Always contains kScalar.
std::vector<Backend> AvailableBackends();

// The backend used by Axpy/Scale. Chosen on first use: the widest available
// backend, unless ROBUSTFLOW_SIMD=scalar is set in the environment.
Backend ActiveBackend();

// Overrides the dispatch choice. Returns false (and changes nothing) if the
// backend is not available.
bool SetActiveBackend(Backend backend);

// y[i] += a * x[i]
void Axpy(std::span<double> y, std::span<const double> x, double a);
// x[i] *= a
void Scale(std::span<double> x, double a);

// Direct entry points to each backend, for equivalence tests and benchmarks.
namespace scalar {
void Axpy(double* y, const double* x, double a, std::size_t n);
void Scale(double* x, double a, std::size_t n);
}  // namespace scalar

namespace avx2 {
bool Compiled();
void Axpy(double* y, const double* x, double a, std::size_t n);
void Scale(double* x, double a, std::size_t n);
}  // namespace avx2

namespace neon {
bool Compiled();
void Axpy(double* y, const double* x, double a, std::size_t n);
void Scale(double* x, double a, std::size_t n);
}  // namespace neon

}  // namespace robustflow::simd

#endif  // ROBUSTFLOW_SIMD_KERNELS_H_
