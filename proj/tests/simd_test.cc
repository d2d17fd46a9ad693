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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstring>
#include <random>

#include "robustflow/flow/flow_lp.h"
#include "robustflow/simd/kernels.h"
#include "test_util.h"

namespace robustflow::simd {
namespace {

bool BitEqual(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

using AxpyFn = void (*)(double*, const double*, double, std::size_t);
using ScaleFn = void (*)(double*, double, std::size_t);

std::vector<std::pair<AxpyFn, ScaleFn>> CompiledVariants() {
  std::vector<std::pair<AxpyFn, ScaleFn>> out;
  for (Backend b : AvailableBackends()) {
    if (b == Backend::kAvx2) out.emplace_back(avx2::Axpy, avx2::Scale);
    if (b == Backend::kNeon) out.emplace_back(neon::Axpy, neon::Scale);
  }
  return out;
}

TEST_CASE("scalar backend is always available") {
  const auto backends = AvailableBackends();
  CHECK(backends.front() == Backend::kScalar);
  MESSAGE("active backend: " << BackendName(ActiveBackend()));
}

TEST_CASE("SIMD kernels are bit-identical to the scalar reference") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> v(-1e3, 1e3);
  for (std::size_t n = 0; n < 67; ++n) {
    std::vector<double> x(n), y(n);
    for (double& e : x) e = v(rng);
    for (double& e : y) e = v(rng);
    const double a = v(rng) / 7.0;
    std::vector<double> ref_axpy = y, ref_scale = x;
    scalar::Axpy(ref_axpy.data(), x.data(), a, n);
    scalar::Scale(ref_scale.data(), a, n);
    for (auto [axpy, scale] : CompiledVariants()) {
      std::vector<double> got_axpy = y, got_scale = x;
      axpy(got_axpy.data(), x.data(), a, n);
      scale(got_scale.data(), a, n);
      CHECK(BitEqual(got_axpy, ref_axpy));
      CHECK(BitEqual(got_scale, ref_scale));
    }
  }
}

TEST_CASE("scalar Axpy is plain multiply then add") {
  std::vector<double> y{1.0, 2.0, 3.0};
  const std::vector<double> x{0.1, 0.2, 0.3};
  scalar::Axpy(y.data(), x.data(), 3.0, 3);
  for (std::size_t i = 0; i < 3; ++i) {
    volatile double prod = 3.0 * x[i];
    CHECK(y[i] == double(i + 1) + prod);
  }
}

TEST_CASE("dispatch override and end-to-end equivalence") {
  const Backend original = ActiveBackend();
  CHECK(SetActiveBackend(Backend::kScalar));
  std::mt19937_64 rng(9);
  const auto net = testing::RandomNetwork(rng, 7, 10);
  const auto demands = testing::RandomDemands(rng, 7, 5);
  const flow::ThroughputSolution ref = flow::SolveThroughput(net, demands);
  for (Backend b : AvailableBackends()) {
    REQUIRE(SetActiveBackend(b));
    const flow::ThroughputSolution got = flow::SolveThroughput(net, demands);
    CHECK(got.tableau == ref.tableau);
    CHECK(got.lambda_star == ref.lambda_star);
  }
  SetActiveBackend(original);
}

}  // namespace
}  // namespace robustflow::simd
