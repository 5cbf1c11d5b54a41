#pragma once

#include <cstddef>
#include <vector>

namespace quasiflow {

enum class Relation { kLessEqual, kEqual, kGreaterEqual };

// minimize c.x subject to rows (a_i . x  rel_i  b_i) and x >= 0.
struct LinearProgram {
  std::vector<double> c;
  std::vector<std::vector<double>> a;
  std::vector<Relation> rel;
  std::vector<double> b;

  void add_row(std::vector<double> row, Relation r, double rhs);
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;
  double objective = 0.0;
};

// Two-phase dense tableau simplex with Bland's rule.
LpSolution solve_lp(const LinearProgram& lp);

// Among the optima of `lp`, one minimising sum |x[vars[i]] - target[i]|.
LpSolution solve_lp_closest(const LinearProgram& lp, const std::vector<std::size_t>& vars,
                            const std::vector<double>& target);

}  // namespace quasiflow
