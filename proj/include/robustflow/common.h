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

#ifndef ROBUSTFLOW_COMMON_H_
#define ROBUSTFLOW_COMMON_H_

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace robustflow {

// Absolute tolerance used for feasibility, reduced costs and pivot detection.
inline constexpr double kTolerance = 1e-9;

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kNotPrimalFeasible,
  kNotDualFeasible,
  kUnknownConstraint,
  kInfeasibleSystem,
  kNoIndependentColumns,
  kNoDemand,
  kZeroThroughput,
  kSaturatedEdge,
  kScenarioInfeasible,
  kTooManyScenarios,
  kNoTableau,
  kUnbounded,
  kIterationLimit,
  kParseError,
  kUnknownNode,
  kNonPositiveCapacity,
  kSchemaError,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Dense row-major matrix of doubles. Rows are contiguous so that the SIMD
// row kernels can operate on them directly.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<double> row(std::size_t r) {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  void AppendRow(std::span<const double> values);
  void EraseColumn(std::size_t c);
  void EraseRow(std::size_t r);

  // Rows `rows` and all columns, or all rows and columns `cols`.
  Matrix SelectRows(std::span<const std::size_t> rows) const;
  Matrix SelectCols(std::span<const std::size_t> cols) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Solves `a * x = b` for a square regular `a` by Gaussian elimination with
// partial pivoting; `b` may hold several right-hand sides as columns.
// Throws kInvalidArgument if `a` is numerically singular.
Matrix SolveLinear(const Matrix& a, const Matrix& b);

}  // namespace robustflow

#endif  // ROBUSTFLOW_COMMON_H_
