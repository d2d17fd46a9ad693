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

// Compiled with -mavx2 (but never -mfma) when the toolchain targets x86-64.
// Keep this translation unit free of inline library templates: anything
// instantiated here would carry AVX2 code into shared symbols.

#include "robustflow/simd/kernels.h"

#if defined(__AVX2__)
#include <immintrin.h>
#endif

namespace robustflow::simd::avx2 {

#if defined(__AVX2__)

bool Compiled() { return true; }

void Axpy(double* y, const double* x, double a, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256d y0 = _mm256_loadu_pd(y + i);
    __m256d y1 = _mm256_loadu_pd(y + i + 4);
    const __m256d p0 = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    const __m256d p1 = _mm256_mul_pd(va, _mm256_loadu_pd(x + i + 4));
    y0 = _mm256_add_pd(y0, p0);
    y1 = _mm256_add_pd(y1, p1);
    _mm256_storeu_pd(y + i, y0);
    _mm256_storeu_pd(y + i + 4, y1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), p));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void Scale(double* x, double a, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), va));
  }
  for (; i < n; ++i) x[i] *= a;
}

#else

bool Compiled() { return false; }
void Axpy(double* y, const double* x, double a, std::size_t n) {
  scalar::Axpy(y, x, a, n);
}
void Scale(double* x, double a, std::size_t n) { scalar::Scale(x, a, n); }

#endif

}  // namespace robustflow::simd::avx2
