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

// Dense tableau simplex engine.
//
// A tableau with basic variables x_B and non-basic variables x_N encodes
//
//   min  <cost_row, x_N> - cost_corner   s.t.  x_B + body * x_N = rhs,
//                                               x_B, x_N >= 0,
//
// with the current vertex at x_N = 0, x_B = rhs. Inequality constraints of
// the original problem are tracked through their slack variables so that
// their right-hand sides can be tightened and differentiated after solving.

#ifndef ROBUSTFLOW_LP_SIMPLEX_H_
#define ROBUSTFLOW_LP_SIMPLEX_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "robustflow/common.h"

namespace robustflow::lp {

// min <cost, x>  s.t.  eq_matrix * x = eq_rhs, x >= 0.
struct StandardFormLP {
  std::vector<double> cost;
  Matrix eq_matrix;
  std::vector<double> eq_rhs;

  // Throws kDimensionMismatch on inconsistent shapes.
  void Validate() const;
};

class SimplexTableau {
 public:
  SimplexTableau() = default;

  // Takes an explicit basis representation. `constraint_slacks[k]` is the
  // slack variable of inequality constraint k. Throws kDimensionMismatch if
  // the shapes disagree or basic/nonbasic do not partition 0..n-1.
  SimplexTableau(std::vector<std::size_t> basic_vars,
                 std::vector<std::size_t> nonbasic_vars, Matrix body,
                 std::vector<double> rhs, std::vector<double> cost_row,
                 double cost_corner,
                 std::vector<std::size_t> constraint_slacks = {});

  // min <cost, x> s.t. a * x <= b with b >= 0, starting from the all-slack
  // basis. Structural variables are 0..n-1, the slack of row i is n+i and
  // row i is constraint i.
  static SimplexTableau FromInequalities(std::span<const double> cost,
                                         const Matrix& a,
                                         std::span<const double> b);

  std::size_t num_rows() const { return basic_.size(); }
  std::size_t num_nonbasic() const { return nonbasic_.size(); }
  std::size_t num_variables() const { return basic_.size() + nonbasic_.size(); }
  std::size_t num_constraints() const { return constraint_slacks_.size(); }

  const std::vector<std::size_t>& basic_vars() const { return basic_; }
  const std::vector<std::size_t>& nonbasic_vars() const { return nonbasic_; }
  const Matrix& body() const { return body_; }
  const std::vector<double>& rhs() const { return rhs_; }
  const std::vector<double>& cost_row() const { return cost_; }
  double cost_corner() const { return corner_; }
  double objective() const { return -corner_; }

  bool IsBasic(std::size_t var) const { return position_.at(var) >= 0; }
  // Row of a basic variable / column of a non-basic one.
  std::size_t RowOf(std::size_t var) const;
  std::size_t ColumnOf(std::size_t var) const;

  // Slack variable of an inequality constraint; kUnknownConstraint if the
  // constraint does not exist or its slack has been fixed away.
  std::size_t SlackOf(std::size_t constraint_id) const;

  bool PrimalFeasible(double tol = kTolerance) const;
  bool DualFeasible(double tol = kTolerance) const;

  // Value of every variable at the current vertex.
  std::vector<double> Point() const;
  double Value(std::size_t var) const;

  // Exchanges basic_vars[row] and nonbasic_vars[col]; body(row, col) must be
  // non-zero.
  void Pivot(std::size_t row, std::size_t col);

  // In-place forms of the public operations below.
  void ShiftConstraintRhs(std::size_t constraint_id, double delta);
  std::size_t AppendCut(std::span<const double> coeffs, double b0);

  // Replaces the objective by <cost, x> over all variables and recomputes
  // the reduced costs for the current basis.
  void SetObjective(std::span<const double> cost);

  // Restricts a variable to zero and removes it from the tableau. A basic
  // variable is first pivoted out (degenerately) when its value is zero; a
  // row that cannot be pivoted is redundant and is dropped. Variables with
  // larger indices are renumbered down by one. kInvalidArgument if the
  // variable is basic with |value| > zero_tol.
  void EliminateVariable(std::size_t var, double zero_tol = 1e-8);

  friend bool operator==(const SimplexTableau&, const SimplexTableau&) = default;

 private:
  void RebuildPositions();

  std::vector<std::size_t> basic_;
  std::vector<std::size_t> nonbasic_;
  Matrix body_;
  std::vector<double> rhs_;
  std::vector<double> cost_;
  double corner_ = 0.0;
  std::vector<std::size_t> constraint_slacks_;
  // >= 0: row of a basic variable; < 0: -(column + 1) of a non-basic one.
  std::vector<std::int64_t> position_;
};

inline constexpr std::size_t kNoSlack = static_cast<std::size_t>(-1);

enum class SolveStatus { kOptimal, kUnbounded, kInfeasible, kIterationLimit };

std::string_view SolveStatusName(SolveStatus status);

struct SolveOutcome {
  SolveStatus status = SolveStatus::kOptimal;
  SimplexTableau tableau;
  double objective = 0.0;
  std::size_t pivot_count = 0;
  // kUnbounded: the entering variable whose column admits an unbounded ray.
  std::optional<std::size_t> unbounded_var;
  // kInfeasible: a row with negative rhs and non-negative coefficients.
  std::optional<std::size_t> infeasible_row;
};

// 10 * (rows + cols)^2, the pivot budget used throughout the library.
std::size_t DefaultPivotLimit(const SimplexTableau& t);

// Bland's rule: smallest-index entering variable with negative reduced cost,
// ratio-test ties broken by smallest basic variable index.
// Throws kNotPrimalFeasible if some rhs entry is below -kTolerance.
SolveOutcome PrimalSimplex(SimplexTableau t, std::size_t max_pivots);

// Leaving row with the most negative rhs (ties: smallest basic index); the
// dual ratio test breaks ties by smallest variable index. After
// 50 * (rows + cols) pivots the leaving row switches to the smallest-index
// infeasible basic variable (Bland's dual rule), which cannot cycle.
// Throws kNotDualFeasible if some reduced cost is below -kTolerance.
SolveOutcome DualSimplex(SimplexTableau t, std::size_t max_pivots);

// Reduces the right-hand side of inequality `constraint_id` by `delta` >= 0.
// The result is dual feasible; it is also primal feasible (hence optimal)
// when the constraint's slack was basic with value >= delta.
SimplexTableau TightenRhs(SimplexTableau t, std::size_t constraint_id,
                          double delta);

// Appends <coeffs, x> <= b0 over all current variables, with a new basic
// slack. The cost row is unchanged. Throws kDimensionMismatch if
// coeffs.size() != t.num_variables().
SimplexTableau AddCutRow(SimplexTableau t, std::span<const double> coeffs,
                         double b0);

// d(optimal value)/d(rhs of constraint) for the basis held by `t`: zero if
// the slack is basic, minus its reduced cost otherwise. At a breakpoint of
// the value function this is the one-sided derivative implied by the basis,
// not a two-sided derivative.
double RhsSensitivity(const SimplexTableau& t, std::size_t constraint_id);

// Cold solve through an artificial-variable phase 1. Rows made redundant by
// rank deficiency are dropped. The returned tableau has no tracked
// constraints. max_pivots == 0 selects DefaultPivotLimit per phase.
SolveOutcome SolveCold(const StandardFormLP& lp, std::size_t max_pivots = 0);

}  // namespace robustflow::lp

#endif  // ROBUSTFLOW_LP_SIMPLEX_H_
