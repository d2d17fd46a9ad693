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

#include "robustflow/common.h"

#include <algorithm>
#include <cmath>
#include <utility>

namespace robustflow {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNotPrimalFeasible: return "NotPrimalFeasible";
    case ErrorCode::kNotDualFeasible: return "NotDualFeasible";
    case ErrorCode::kUnknownConstraint: return "UnknownConstraint";
    case ErrorCode::kInfeasibleSystem: return "InfeasibleSystem";
    case ErrorCode::kNoIndependentColumns: return "NoIndependentColumns";
    case ErrorCode::kNoDemand: return "NoDemand";
    case ErrorCode::kZeroThroughput: return "ZeroThroughput";
    case ErrorCode::kSaturatedEdge: return "SaturatedEdge";
    case ErrorCode::kScenarioInfeasible: return "ScenarioInfeasible";
    case ErrorCode::kTooManyScenarios: return "TooManyScenarios";
    case ErrorCode::kNoTableau: return "NoTableau";
    case ErrorCode::kUnbounded: return "Unbounded";
    case ErrorCode::kIterationLimit: return "IterationLimit";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kUnknownNode: return "UnknownNode";
    case ErrorCode::kNonPositiveCapacity: return "NonPositiveCapacity";
    case ErrorCode::kSchemaError: return "SchemaError";
  }
  return "Unknown";
}

void Matrix::AppendRow(std::span<const double> values) {
  if (rows_ == 0 && cols_ == 0) cols_ = values.size();
  if (values.size() != cols_) {
    throw Error(ErrorCode::kDimensionMismatch, "row length differs from matrix");
  }
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

void Matrix::EraseColumn(std::size_t c) {
  std::vector<double> out;
  out.reserve(rows_ * (cols_ - 1));
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = 0; k < cols_; ++k) {
      if (k != c) out.push_back(data_[r * cols_ + k]);
    }
  }
  data_ = std::move(out);
  --cols_;
}

void Matrix::EraseRow(std::size_t r) {
  auto first = data_.begin() + static_cast<std::ptrdiff_t>(r * cols_);
  data_.erase(first, first + static_cast<std::ptrdiff_t>(cols_));
  --rows_;
}

Matrix Matrix::SelectRows(std::span<const std::size_t> rows) const {
  Matrix out(rows.size(), cols_);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::copy_n(row(rows[i]).begin(), cols_, out.row(i).begin());
  }
  return out;
}

Matrix Matrix::SelectCols(std::span<const std::size_t> cols) const {
  Matrix out(rows_, cols.size());
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t j = 0; j < cols.size(); ++j) out(r, j) = (*this)(r, cols[j]);
  }
  return out;
}

Matrix SolveLinear(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.rows() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "SolveLinear expects square system");
  }
  Matrix lu = a;
  Matrix x = b;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t r = k + 1; r < n; ++r) {
      if (std::abs(lu(r, k)) > std::abs(lu(pivot, k))) pivot = r;
    }
    if (std::abs(lu(pivot, k)) <= kTolerance) {
      throw Error(ErrorCode::kInvalidArgument, "singular matrix");
    }
    if (pivot != k) {
      std::swap_ranges(lu.row(k).begin(), lu.row(k).end(), lu.row(pivot).begin());
      std::swap_ranges(x.row(k).begin(), x.row(k).end(), x.row(pivot).begin());
    }
    for (std::size_t r = k + 1; r < n; ++r) {
      const double factor = lu(r, k) / lu(k, k);
      if (factor == 0.0) continue;
      for (std::size_t c = k; c < n; ++c) lu(r, c) -= factor * lu(k, c);
      for (std::size_t c = 0; c < x.cols(); ++c) x(r, c) -= factor * x(k, c);
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    for (std::size_t c = 0; c < x.cols(); ++c) {
      double v = x(k, c);
      for (std::size_t j = k + 1; j < n; ++j) v -= lu(k, j) * x(j, c);
      x(k, c) = v / lu(k, k);
    }
  }
  return x;
}

}  // namespace robustflow
