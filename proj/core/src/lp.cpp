#include "quasiflow/lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace quasiflow {
namespace {

constexpr double kEps = 1e-9;

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), t_(rows, std::vector<double>(cols + 1, 0.0)), basis_(rows, 0) {}

  std::vector<double>& row(std::size_t i) { return t_[i]; }
  std::size_t& basis(std::size_t i) { return basis_[i]; }
  std::size_t rows() const { return rows_; }
  double rhs(std::size_t i) const { return t_[i][cols_]; }

  void pivot(std::size_t r, std::size_t col, std::vector<double>& obj) {
    auto& pr = t_[r];
    const double p = pr[col];
    for (double& v : pr) v /= p;
    auto eliminate = [&](std::vector<double>& target) {
      const double f = target[col];
      if (f == 0.0) return;
      for (std::size_t j = 0; j <= cols_; ++j) target[j] -= f * pr[j];
      target[col] = 0.0;
    };
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i != r) eliminate(t_[i]);
    }
    eliminate(obj);
    basis_[r] = col;
  }

  // Minimises with reduced-cost row `obj` over columns below `limit`.
  LpStatus run(std::vector<double>& obj, std::size_t limit) {
    while (true) {
      std::size_t enter = limit;
      for (std::size_t j = 0; j < limit; ++j) {
        if (obj[j] < -kEps) {
          enter = j;
          break;
        }
      }
      if (enter == limit) return LpStatus::kOptimal;
      std::size_t leave = rows_;
      double best = 0.0;
      for (std::size_t i = 0; i < rows_; ++i) {
        if (t_[i][enter] <= kEps) continue;
        const double ratio = t_[i][cols_] / t_[i][enter];
        if (leave == rows_ || ratio < best - kEps || (ratio <= best + kEps && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == rows_) return LpStatus::kUnbounded;
      pivot(leave, enter, obj);
    }
  }

  void drop_row(std::size_t i) {
    t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(i));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
    --rows_;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::vector<double>> t_;
  std::vector<std::size_t> basis_;
};

}  // namespace

void LinearProgram::add_row(std::vector<double> row, Relation r, double rhs) {
  row.resize(c.size(), 0.0);
  a.push_back(std::move(row));
  rel.push_back(r);
  b.push_back(rhs);
}

LpSolution solve_lp(const LinearProgram& lp) {
  const std::size_t n = lp.c.size();
  const std::size_t m = lp.a.size();
  if (lp.rel.size() != m || lp.b.size() != m) throw std::invalid_argument("malformed linear program");

  // Normalise to b >= 0, then count slack and artificial columns.
  std::vector<std::vector<double>> a = lp.a;
  std::vector<Relation> rel = lp.rel;
  std::vector<double> b = lp.b;
  for (std::size_t i = 0; i < m; ++i) {
    a[i].resize(n, 0.0);
    if (b[i] < 0) {
      for (double& v : a[i]) v = -v;
      b[i] = -b[i];
      if (rel[i] == Relation::kLessEqual) {
        rel[i] = Relation::kGreaterEqual;
      } else if (rel[i] == Relation::kGreaterEqual) {
        rel[i] = Relation::kLessEqual;
      }
    }
  }
  std::size_t slacks = 0;
  std::size_t artificials = 0;
  for (Relation r : rel) {
    slacks += r != Relation::kEqual ? 1 : 0;
    artificials += r != Relation::kLessEqual ? 1 : 0;
  }
  const std::size_t real = n + slacks;
  const std::size_t cols = real + artificials;
  Tableau t(m, cols);
  std::size_t next_slack = n;
  std::size_t next_art = real;
  for (std::size_t i = 0; i < m; ++i) {
    auto& row = t.row(i);
    std::copy(a[i].begin(), a[i].end(), row.begin());
    row[cols] = b[i];
    if (rel[i] == Relation::kLessEqual) {
      row[next_slack] = 1.0;
      t.basis(i) = next_slack++;
    } else {
      if (rel[i] == Relation::kGreaterEqual) row[next_slack++] = -1.0;
      row[next_art] = 1.0;
      t.basis(i) = next_art++;
    }
  }

  LpSolution sol;
  if (artificials > 0) {
    std::vector<double> obj(cols + 1, 0.0);
    for (std::size_t j = real; j < cols; ++j) obj[j] = 1.0;
    for (std::size_t i = 0; i < t.rows(); ++i) {
      if (t.basis(i) >= real) {
        for (std::size_t j = 0; j <= cols; ++j) obj[j] -= t.row(i)[j];
      }
    }
    t.run(obj, cols);
    if (-obj[cols] > 1e-7) return sol;
    // Drive zero-level artificials out of the basis or drop redundant rows.
    for (std::size_t i = t.rows(); i-- > 0;) {
      if (t.basis(i) < real) continue;
      std::size_t col = real;
      for (std::size_t j = 0; j < real; ++j) {
        if (std::abs(t.row(i)[j]) > kEps) {
          col = j;
          break;
        }
      }
      if (col == real) {
        t.drop_row(i);
      } else {
        t.pivot(i, col, obj);
      }
    }
  }

  std::vector<double> obj(cols + 1, 0.0);
  std::copy(lp.c.begin(), lp.c.end(), obj.begin());
  for (std::size_t i = 0; i < t.rows(); ++i) {
    const std::size_t bv = t.basis(i);
    const double cb = bv < n ? lp.c[bv] : 0.0;
    if (cb == 0.0) continue;
    for (std::size_t j = 0; j <= cols; ++j) obj[j] -= cb * t.row(i)[j];
  }
  const LpStatus status = t.run(obj, real);
  sol.status = status;
  if (status != LpStatus::kOptimal) return sol;
  sol.x.assign(n, 0.0);
  for (std::size_t i = 0; i < t.rows(); ++i) {
    if (t.basis(i) < n) sol.x[t.basis(i)] = t.rhs(i);
  }
  for (std::size_t j = 0; j < n; ++j) sol.objective += lp.c[j] * sol.x[j];
  return sol;
}

LpSolution solve_lp_closest(const LinearProgram& lp, const std::vector<std::size_t>& vars,
                            const std::vector<double>& target) {
  if (vars.size() != target.size()) throw std::invalid_argument("one target per variable required");
  const LpSolution first = solve_lp(lp);
  if (first.status != LpStatus::kOptimal || vars.empty()) return first;
  const std::size_t n = lp.c.size();
  const double z = first.objective;
  // Columns: original variables, then d+ and d- per targeted variable.
  LinearProgram stage;
  stage.c.assign(n + 2 * vars.size(), 0.0);
  for (std::size_t i = 0; i < vars.size(); ++i) stage.c[n + 2 * i] = stage.c[n + 2 * i + 1] = 1.0;
  for (std::size_t r = 0; r < lp.a.size(); ++r) stage.add_row(lp.a[r], lp.rel[r], lp.b[r]);
  stage.add_row(lp.c, Relation::kLessEqual, z + 1e-11 * std::max(1.0, std::abs(z)));
  for (std::size_t i = 0; i < vars.size(); ++i) {
    std::vector<double> row(stage.c.size(), 0.0);
    row[vars[i]] = 1.0;
    row[n + 2 * i] = -1.0;
    row[n + 2 * i + 1] = 1.0;
    stage.add_row(std::move(row), Relation::kEqual, target[i]);
  }
  LpSolution s = solve_lp(stage);
  if (s.status != LpStatus::kOptimal) return first;
  s.x.resize(n);
  s.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) s.objective += lp.c[j] * s.x[j];
  return s;
}

}  // namespace quasiflow
