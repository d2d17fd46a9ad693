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

#include "robustflow/lp/simplex.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "robustflow/simd/kernels.h"

namespace robustflow::lp {
namespace {

// Ratio-test ties are resolved by index, so ratios this close count as equal.
constexpr double kRatioTieEps = 1e-12;
constexpr double kZeroLevel = 1e-8;

SolveOutcome Finish(SolveStatus status, SimplexTableau t, std::size_t pivots) {
  SolveOutcome out;
  out.status = status;
  out.objective = t.objective();
  out.tableau = std::move(t);
  out.pivot_count = pivots;
  return out;
}

}  // namespace

void StandardFormLP::Validate() const {
  if (eq_matrix.rows() != eq_rhs.size() || eq_matrix.cols() != cost.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "cost, eq_matrix and eq_rhs have inconsistent shapes");
  }
}

SimplexTableau::SimplexTableau(std::vector<std::size_t> basic_vars,
                               std::vector<std::size_t> nonbasic_vars,
                               Matrix body, std::vector<double> rhs,
                               std::vector<double> cost_row, double cost_corner,
                               std::vector<std::size_t> constraint_slacks)
    : basic_(std::move(basic_vars)),
      nonbasic_(std::move(nonbasic_vars)),
      body_(std::move(body)),
      rhs_(std::move(rhs)),
      cost_(std::move(cost_row)),
      corner_(cost_corner),
      constraint_slacks_(std::move(constraint_slacks)) {
  if (body_.rows() != basic_.size() || body_.cols() != nonbasic_.size() ||
      rhs_.size() != basic_.size() || cost_.size() != nonbasic_.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "tableau blocks disagree in size");
  }
  RebuildPositions();
  for (std::size_t s : constraint_slacks_) {
    if (s != kNoSlack && s >= num_variables()) {
      throw Error(ErrorCode::kDimensionMismatch, "constraint slack out of range");
    }
  }
}

void SimplexTableau::RebuildPositions() {
  const std::size_t n = num_variables();
  position_.assign(n, std::numeric_limits<std::int64_t>::min());
  auto claim = [&](std::size_t var, std::int64_t pos) {
    if (var >= n || position_[var] != std::numeric_limits<std::int64_t>::min()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "basic and non-basic variables must partition 0..n-1");
    }
    position_[var] = pos;
  };
  for (std::size_t r = 0; r < basic_.size(); ++r) {
    claim(basic_[r], static_cast<std::int64_t>(r));
  }
  for (std::size_t c = 0; c < nonbasic_.size(); ++c) {
    claim(nonbasic_[c], -static_cast<std::int64_t>(c) - 1);
  }
}

SimplexTableau SimplexTableau::FromInequalities(std::span<const double> cost,
                                                const Matrix& a,
                                                std::span<const double> b) {
  const std::size_t n = a.cols();
  const std::size_t m = a.rows();
  if (cost.size() != n || b.size() != m) {
    throw Error(ErrorCode::kDimensionMismatch, "inequality system shape");
  }
  std::vector<std::size_t> basic(m), nonbasic(n), slacks(m);
  std::iota(nonbasic.begin(), nonbasic.end(), 0);
  std::iota(basic.begin(), basic.end(), n);
  std::iota(slacks.begin(), slacks.end(), n);
  return SimplexTableau(std::move(basic), std::move(nonbasic), a,
                        std::vector<double>(b.begin(), b.end()),
                        std::vector<double>(cost.begin(), cost.end()), 0.0,
                        std::move(slacks));
}

std::size_t SimplexTableau::RowOf(std::size_t var) const {
  const std::int64_t p = position_.at(var);
  if (p < 0) throw Error(ErrorCode::kInvalidArgument, "variable is not basic");
  return static_cast<std::size_t>(p);
}

std::size_t SimplexTableau::ColumnOf(std::size_t var) const {
  const std::int64_t p = position_.at(var);
  if (p >= 0) throw Error(ErrorCode::kInvalidArgument, "variable is basic");
  return static_cast<std::size_t>(-p - 1);
}

std::size_t SimplexTableau::SlackOf(std::size_t constraint_id) const {
  if (constraint_id >= constraint_slacks_.size() ||
      constraint_slacks_[constraint_id] == kNoSlack) {
    throw Error(ErrorCode::kUnknownConstraint,
                "no slack for constraint " + std::to_string(constraint_id));
  }
  return constraint_slacks_[constraint_id];
}

bool SimplexTableau::PrimalFeasible(double tol) const {
  return std::all_of(rhs_.begin(), rhs_.end(), [&](double v) { return v >= -tol; });
}

bool SimplexTableau::DualFeasible(double tol) const {
  return std::all_of(cost_.begin(), cost_.end(), [&](double v) { return v >= -tol; });
}

std::vector<double> SimplexTableau::Point() const {
  std::vector<double> x(num_variables(), 0.0);
  for (std::size_t r = 0; r < basic_.size(); ++r) x[basic_[r]] = rhs_[r];
  return x;
}

double SimplexTableau::Value(std::size_t var) const {
  const std::int64_t p = position_.at(var);
  return p >= 0 ? rhs_[static_cast<std::size_t>(p)] : 0.0;
}

void SimplexTableau::Pivot(std::size_t row, std::size_t col) {
  const double p = body_(row, col);
  if (p == 0.0) throw Error(ErrorCode::kInvalidArgument, "zero pivot element");
  const double inv = 1.0 / p;
  std::span<double> prow = body_.row(row);
  prow[col] = 1.0;
  simd::Scale(prow, inv);
  rhs_[row] *= inv;
  const double pivot_rhs = rhs_[row];
  for (std::size_t i = 0; i < basic_.size(); ++i) {
    if (i == row) continue;
    const double a = body_(i, col);
    if (a == 0.0) continue;
    body_(i, col) = 0.0;
    simd::Axpy(body_.row(i), prow, -a);
    rhs_[i] -= a * pivot_rhs;
  }
  const double c = cost_[col];
  if (c != 0.0) {
    cost_[col] = 0.0;
    simd::Axpy(cost_, prow, -c);
    corner_ -= c * pivot_rhs;
  }
  std::swap(basic_[row], nonbasic_[col]);
  position_[basic_[row]] = static_cast<std::int64_t>(row);
  position_[nonbasic_[col]] = -static_cast<std::int64_t>(col) - 1;
}

void SimplexTableau::ShiftConstraintRhs(std::size_t constraint_id, double delta) {
  const std::size_t slack = SlackOf(constraint_id);
  if (delta == 0.0) return;
  const std::int64_t p = position_[slack];
  if (p >= 0) {
    rhs_[static_cast<std::size_t>(p)] -= delta;
    return;
  }
  // The old slack equals the new one plus delta; substitute in every row.
  const std::size_t col = static_cast<std::size_t>(-p - 1);
  for (std::size_t i = 0; i < basic_.size(); ++i) rhs_[i] -= delta * body_(i, col);
  corner_ -= delta * cost_[col];
}

std::size_t SimplexTableau::AppendCut(std::span<const double> coeffs, double b0) {
  if (coeffs.size() != num_variables()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "cut has " + std::to_string(coeffs.size()) +
                    " coefficients, tableau has " +
                    std::to_string(num_variables()) + " variables");
  }
  // Substitute the basic variables: a_N - body^T a_B and b0 - <a_B, rhs>.
  std::vector<double> row(nonbasic_.size());
  for (std::size_t j = 0; j < nonbasic_.size(); ++j) row[j] = coeffs[nonbasic_[j]];
  double rhs = b0;
  for (std::size_t i = 0; i < basic_.size(); ++i) {
    const double a = coeffs[basic_[i]];
    if (a == 0.0) continue;
    simd::Axpy(row, body_.row(i), -a);
    rhs -= a * rhs_[i];
  }
  const std::size_t slack = num_variables();
  body_.AppendRow(row);
  rhs_.push_back(rhs);
  basic_.push_back(slack);
  position_.push_back(static_cast<std::int64_t>(basic_.size() - 1));
  constraint_slacks_.push_back(slack);
  return constraint_slacks_.size() - 1;
}

void SimplexTableau::SetObjective(std::span<const double> cost) {
  if (cost.size() != num_variables()) {
    throw Error(ErrorCode::kDimensionMismatch, "objective length");
  }
  for (std::size_t j = 0; j < nonbasic_.size(); ++j) cost_[j] = cost[nonbasic_[j]];
  double value = 0.0;
  for (std::size_t i = 0; i < basic_.size(); ++i) {
    const double c = cost[basic_[i]];
    if (c == 0.0) continue;
    simd::Axpy(cost_, body_.row(i), -c);
    value += c * rhs_[i];
  }
  corner_ = -value;
}

void SimplexTableau::EliminateVariable(std::size_t var, double zero_tol) {
  if (var >= num_variables()) {
    throw Error(ErrorCode::kInvalidArgument, "variable out of range");
  }
  if (IsBasic(var)) {
    const std::size_t r = RowOf(var);
    if (std::abs(rhs_[r]) > zero_tol) {
      throw Error(ErrorCode::kInvalidArgument,
                  "cannot fix a basic variable with non-zero value");
    }
    std::size_t best = nonbasic_.size();
    double best_abs = kTolerance;
    for (std::size_t j = 0; j < nonbasic_.size(); ++j) {
      if (std::abs(body_(r, j)) > best_abs) {
        best_abs = std::abs(body_(r, j));
        best = j;
      }
    }
    if (best == nonbasic_.size()) {
      // Row reads var = 0 on its own: drop it together with the variable.
      body_.EraseRow(r);
      rhs_.erase(rhs_.begin() + static_cast<std::ptrdiff_t>(r));
      basic_.erase(basic_.begin() + static_cast<std::ptrdiff_t>(r));
    } else {
      rhs_[r] = 0.0;
      Pivot(r, best);
    }
  }
  if (!IsBasic(var)) {
    const std::size_t c = ColumnOf(var);
    body_.EraseColumn(c);
    cost_.erase(cost_.begin() + static_cast<std::ptrdiff_t>(c));
    nonbasic_.erase(nonbasic_.begin() + static_cast<std::ptrdiff_t>(c));
  }
  auto renumber = [var](std::size_t& v) {
    if (v != kNoSlack && v > var) --v;
  };
  std::for_each(basic_.begin(), basic_.end(), renumber);
  std::for_each(nonbasic_.begin(), nonbasic_.end(), renumber);
  for (std::size_t& s : constraint_slacks_) {
    if (s == var) {
      s = kNoSlack;
    } else {
      renumber(s);
    }
  }
  RebuildPositions();
}

std::string_view SolveStatusName(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "Optimal";
    case SolveStatus::kUnbounded: return "Unbounded";
    case SolveStatus::kInfeasible: return "Infeasible";
    case SolveStatus::kIterationLimit: return "IterationLimit";
  }
  return "Unknown";
}

std::size_t DefaultPivotLimit(const SimplexTableau& t) {
  const std::size_t s = t.num_rows() + t.num_nonbasic();
  return 10 * s * s + 10;
}

SolveOutcome PrimalSimplex(SimplexTableau t, std::size_t max_pivots) {
  if (!t.PrimalFeasible()) {
    throw Error(ErrorCode::kNotPrimalFeasible, "primal simplex needs rhs >= 0");
  }
  const std::vector<std::size_t>& basic = t.basic_vars();
  const std::vector<std::size_t>& nonbasic = t.nonbasic_vars();
  std::size_t pivots = 0;
  while (true) {
    std::size_t enter = t.num_nonbasic();
    for (std::size_t j = 0; j < t.num_nonbasic(); ++j) {
      if (t.cost_row()[j] < -kTolerance &&
          (enter == t.num_nonbasic() || nonbasic[j] < nonbasic[enter])) {
        enter = j;
      }
    }
    if (enter == t.num_nonbasic()) return Finish(SolveStatus::kOptimal, std::move(t), pivots);
    if (pivots >= max_pivots) {
      return Finish(SolveStatus::kIterationLimit, std::move(t), pivots);
    }
    std::size_t leave = t.num_rows();
    double best = 0.0;
    for (std::size_t i = 0; i < t.num_rows(); ++i) {
      const double a = t.body()(i, enter);
      if (a <= kTolerance) continue;
      const double ratio = std::max(t.rhs()[i], 0.0) / a;
      if (leave == t.num_rows() || ratio < best - kRatioTieEps) {
        best = ratio;
        leave = i;
      } else if (ratio <= best + kRatioTieEps && basic[i] < basic[leave]) {
        best = std::min(best, ratio);
        leave = i;
      }
    }
    if (leave == t.num_rows()) {
      const std::size_t var = nonbasic[enter];
      SolveOutcome out = Finish(SolveStatus::kUnbounded, std::move(t), pivots);
      out.unbounded_var = var;
      return out;
    }
    t.Pivot(leave, enter);
    ++pivots;
  }
}

SolveOutcome DualSimplex(SimplexTableau t, std::size_t max_pivots) {
  if (!t.DualFeasible()) {
    throw Error(ErrorCode::kNotDualFeasible, "dual simplex needs reduced costs >= 0");
  }
  const std::vector<std::size_t>& basic = t.basic_vars();
  const std::vector<std::size_t>& nonbasic = t.nonbasic_vars();
  const std::size_t bland_after = 50 * (t.num_rows() + t.num_nonbasic());
  std::size_t pivots = 0;
  while (true) {
    std::size_t leave = t.num_rows();
    for (std::size_t i = 0; i < t.num_rows(); ++i) {
      const double v = t.rhs()[i];
      if (v >= -kTolerance) continue;
      if (leave == t.num_rows()) {
        leave = i;
      } else if (pivots < bland_after) {
        const double best = t.rhs()[leave];
        if (v < best || (v == best && basic[i] < basic[leave])) leave = i;
      } else if (basic[i] < basic[leave]) {
        leave = i;
      }
    }
    if (leave == t.num_rows()) return Finish(SolveStatus::kOptimal, std::move(t), pivots);
    if (pivots >= max_pivots) {
      return Finish(SolveStatus::kIterationLimit, std::move(t), pivots);
    }
    std::size_t enter = t.num_nonbasic();
    double best = 0.0;
    for (std::size_t j = 0; j < t.num_nonbasic(); ++j) {
      const double a = t.body()(leave, j);
      if (a >= -kTolerance) continue;
      const double ratio = std::max(t.cost_row()[j], 0.0) / -a;
      if (enter == t.num_nonbasic() || ratio < best - kRatioTieEps) {
        best = ratio;
        enter = j;
      } else if (ratio <= best + kRatioTieEps && nonbasic[j] < nonbasic[enter]) {
        best = std::min(best, ratio);
        enter = j;
      }
    }
    if (enter == t.num_nonbasic()) {
      SolveOutcome out = Finish(SolveStatus::kInfeasible, std::move(t), pivots);
      out.infeasible_row = leave;
      return out;
    }
    t.Pivot(leave, enter);
    ++pivots;
  }
}

SimplexTableau TightenRhs(SimplexTableau t, std::size_t constraint_id,
                          double delta) {
  if (delta < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "tightening amount must be >= 0");
  }
  t.ShiftConstraintRhs(constraint_id, delta);
  return t;
}

SimplexTableau AddCutRow(SimplexTableau t, std::span<const double> coeffs,
                         double b0) {
  t.AppendCut(coeffs, b0);
  return t;
}

double RhsSensitivity(const SimplexTableau& t, std::size_t constraint_id) {
  const std::size_t slack = t.SlackOf(constraint_id);
  if (t.IsBasic(slack)) return 0.0;
  return -t.cost_row()[t.ColumnOf(slack)];
}

SolveOutcome SolveCold(const StandardFormLP& lp, std::size_t max_pivots) {
  lp.Validate();
  const std::size_t n = lp.cost.size();
  const std::size_t m = lp.eq_rhs.size();

  // Phase 1: artificial variable n+i in row i, rows sign-normalized so the
  // artificial basis is feasible.
  Matrix body = lp.eq_matrix;
  std::vector<double> rhs = lp.eq_rhs;
  for (std::size_t i = 0; i < m; ++i) {
    if (rhs[i] < 0.0) {
      rhs[i] = -rhs[i];
      for (double& v : body.row(i)) v = -v;
    }
  }
  std::vector<double> phase1_cost(n, 0.0);
  double phase1_corner = 0.0;
  double rhs_scale = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) phase1_cost[j] -= body(i, j);
    phase1_corner -= rhs[i];
    rhs_scale += rhs[i];
  }
  std::vector<std::size_t> basic(m), nonbasic(n);
  std::iota(basic.begin(), basic.end(), n);
  std::iota(nonbasic.begin(), nonbasic.end(), 0);
  SimplexTableau t(std::move(basic), std::move(nonbasic), std::move(body),
                   std::move(rhs), std::move(phase1_cost), phase1_corner);

  const std::size_t phase1_limit = max_pivots ? max_pivots : DefaultPivotLimit(t);
  SolveOutcome phase1 = PrimalSimplex(std::move(t), phase1_limit);
  std::size_t pivots = phase1.pivot_count;
  if (phase1.status == SolveStatus::kIterationLimit) return phase1;
  if (phase1.objective > kTolerance * rhs_scale) {
    return Finish(SolveStatus::kInfeasible, std::move(phase1.tableau), pivots);
  }
  t = std::move(phase1.tableau);

  // Remove artificials from the highest index down so no renumbering of the
  // structural variables occurs.
  const double zero_level = kZeroLevel + kTolerance * rhs_scale;
  for (std::size_t var = n + m; var-- > n;) t.EliminateVariable(var, zero_level);
  t.SetObjective(lp.cost);
  const std::size_t phase2_limit = max_pivots ? max_pivots : DefaultPivotLimit(t);
  SolveOutcome phase2 = PrimalSimplex(std::move(t), phase2_limit);
  phase2.pivot_count += pivots;
  return phase2;
}

}  // namespace robustflow::lp
