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

#include "robustflow/simd/kernels.h"

#if defined(__aarch64__) && defined(__ARM_NEON)
#include <arm_neon.h>
#define ROBUSTFLOW_HAVE_NEON 1
#endif

namespace robustflow::simd::neon {

#if defined(ROBUSTFLOW_HAVE_NEON)

bool Compiled() { return true; }

// vmulq/vaddq rather than vfmaq: results must match the scalar kernel.
void Axpy(double* y, const double* x, double a, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float64x2_t p0 = vmulq_f64(va, vld1q_f64(x + i));
    const float64x2_t p1 = vmulq_f64(va, vld1q_f64(x + i + 2));
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), p0));
    vst1q_f64(y + i + 2, vaddq_f64(vld1q_f64(y + i + 2), p1));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void Scale(double* x, double a, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vmulq_f64(vld1q_f64(x + i), va));
  for (; i < n; ++i) x[i] *= a;
}

#else

bool Compiled() { return false; }
void Axpy(double* y, const double* x, double a, std::size_t n) {
  scalar::Axpy(y, x, a, n);
}
void Scale(double* x, double a, std::size_t n) { scalar::Scale(x, a, n); }

#endif

}  // namespace robustflow::simd::neon
