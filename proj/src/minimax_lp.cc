// Copyright 2026 The mfpsro Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mfpsro/minimax_lp.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace mfpsro {

namespace {

constexpr double kPivotTolerance = 1e-11;

// Dense simplex tableau for: max 1^T u  s.t.  C u <= 1, u >= 0, where
// C = (M + shift)^T has strictly positive entries. The row player's optimal
// mixture is rho = u / (1^T u) and the game value is 1 / (1^T u) - shift.
class GameSimplex {
 public:
  GameSimplex(const std::vector<std::vector<double>>& matrix, double shift)
      : rows_(static_cast<int>(matrix.size())),
        cols_(static_cast<int>(matrix[0].size())),
        width_(rows_ + cols_ + 1),
        tableau_(static_cast<size_t>(cols_ + 1) * width_, 0.0),
        basis_(cols_) {
    // Constraint k: sum_t (M[t][k] + shift) u_t + w_k = 1.
    for (int k = 0; k < cols_; ++k) {
      double* row = Row(k);
      for (int t = 0; t < rows_; ++t) row[t] = matrix[t][k] + shift;
      row[rows_ + k] = 1.0;
      row[width_ - 1] = 1.0;
      basis_[k] = rows_ + k;
    }
    // Objective row holds z_j - c_j; starts at -c.
    double* obj = Row(cols_);
    for (int t = 0; t < rows_; ++t) obj[t] = -1.0;
  }

  // Runs Bland's rule to optimality. The LP is feasible (u = 0) and bounded
  // (every structural column has positive constraint coefficients), so the
  // only failure mode is the iteration safety cap.
  void Solve() {
    const long long max_pivots = 2000LL + 50LL * (rows_ + cols_);
    for (long long pivots = 0;; ++pivots) {
      if (pivots > max_pivots) {
        throw NumericError("simplex exceeded its pivot budget");
      }
      int entering = -1;
      const double* obj = Row(cols_);
      for (int j = 0; j < rows_ + cols_; ++j) {
        if (obj[j] < -kPivotTolerance) {
          entering = j;
          break;  // Bland: lowest eligible index.
        }
      }
      if (entering < 0) return;

      int leaving = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < cols_; ++i) {
        double a = Row(i)[entering];
        if (a <= kPivotTolerance) continue;
        double ratio = Row(i)[width_ - 1] / a;
        if (ratio < best_ratio - kPivotTolerance ||
            (ratio < best_ratio + kPivotTolerance &&
             (leaving < 0 || basis_[i] < basis_[leaving]))) {
          best_ratio = std::min(best_ratio, ratio);
          leaving = i;
        }
      }
      if (leaving < 0) throw NumericError("simplex detected an unbounded ray");
      Pivot(leaving, entering);
    }
  }

  std::vector<double> Solution() const {
    std::vector<double> u(rows_, 0.0);
    for (int i = 0; i < cols_; ++i) {
      if (basis_[i] < rows_) u[basis_[i]] = Row(i)[width_ - 1];
    }
    return u;
  }

  // Dual variables are the reduced costs on the slack columns.
  std::vector<double> Duals() const {
    std::vector<double> y(cols_);
    const double* obj = Row(cols_);
    for (int k = 0; k < cols_; ++k) y[k] = obj[rows_ + k];
    return y;
  }

  const std::vector<int>& basis() const { return basis_; }

 private:
  double* Row(int i) { return &tableau_[static_cast<size_t>(i) * width_]; }
  const double* Row(int i) const {
    return &tableau_[static_cast<size_t>(i) * width_];
  }

  void Pivot(int leaving, int entering) {
    double* pivot_row = Row(leaving);
    double inv = 1.0 / pivot_row[entering];
    for (int j = 0; j < width_; ++j) pivot_row[j] *= inv;
    pivot_row[entering] = 1.0;
    for (int i = 0; i <= cols_; ++i) {
      if (i == leaving) continue;
      double* row = Row(i);
      double f = row[entering];
      if (f == 0.0) continue;
      for (int j = 0; j < width_; ++j) row[j] -= f * pivot_row[j];
      row[entering] = 0.0;
    }
    basis_[leaving] = entering;
  }

  int rows_, cols_, width_;
  std::vector<double> tableau_;
  std::vector<int> basis_;
};

// Re-solves the optimal basis system against fresh constraint data, removing
// drift accumulated across pivots. Returns false when the basis matrix is too
// ill-conditioned to repair, in which case the tableau solution stands.
bool RepairBasis(const std::vector<std::vector<double>>& matrix, double shift,
                 const std::vector<int>& basis, std::vector<double>* u,
                 std::vector<double>* y) {
  int rows = static_cast<int>(matrix.size());
  int cols = static_cast<int>(matrix[0].size());
  int m = cols;

  // B columns: structural j -> (M^T + shift) column j; slack j -> e_{j-rows}.
  std::vector<double> b_mat(static_cast<size_t>(m) * m, 0.0);
  for (int c = 0; c < m; ++c) {
    int j = basis[c];
    for (int k = 0; k < m; ++k) {
      b_mat[static_cast<size_t>(k) * m + c] =
          (j < rows) ? matrix[j][k] + shift : (k == j - rows ? 1.0 : 0.0);
    }
  }

  // One LU factorization serves both B x = 1 and B^T yb = c_B.
  std::vector<double> lu = b_mat;
  std::vector<int> perm(m);
  for (int i = 0; i < m; ++i) perm[i] = i;
  for (int col = 0; col < m; ++col) {
    int piv = col;
    for (int r = col + 1; r < m; ++r) {
      if (std::abs(lu[static_cast<size_t>(r) * m + col]) >
          std::abs(lu[static_cast<size_t>(piv) * m + col])) {
        piv = r;
      }
    }
    if (std::abs(lu[static_cast<size_t>(piv) * m + col]) < 1e-12) return false;
    if (piv != col) {
      for (int j = 0; j < m; ++j) {
        std::swap(lu[static_cast<size_t>(piv) * m + j],
                  lu[static_cast<size_t>(col) * m + j]);
      }
      std::swap(perm[piv], perm[col]);
    }
    double d = lu[static_cast<size_t>(col) * m + col];
    for (int r = col + 1; r < m; ++r) {
      double f = lu[static_cast<size_t>(r) * m + col] / d;
      lu[static_cast<size_t>(r) * m + col] = f;
      for (int j = col + 1; j < m; ++j) {
        lu[static_cast<size_t>(r) * m + j] -=
            f * lu[static_cast<size_t>(col) * m + j];
      }
    }
  }

  auto lu_solve = [&](const std::vector<double>& rhs) {
    std::vector<double> x(m);
    for (int i = 0; i < m; ++i) x[i] = rhs[perm[i]];
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < i; ++j) x[i] -= lu[static_cast<size_t>(i) * m + j] * x[j];
    }
    for (int i = m - 1; i >= 0; --i) {
      for (int j = i + 1; j < m; ++j) {
        x[i] -= lu[static_cast<size_t>(i) * m + j] * x[j];
      }
      x[i] /= lu[static_cast<size_t>(i) * m + i];
    }
    return x;
  };

  std::vector<double> xb = lu_solve(std::vector<double>(m, 1.0));
  for (double v : xb) {
    if (!std::isfinite(v) || v < -1e-7) return false;
  }
  std::fill(u->begin(), u->end(), 0.0);
  for (int c = 0; c < m; ++c) {
    if (basis[c] < rows) (*u)[basis[c]] = std::max(xb[c], 0.0);
  }

  // y solves B^T y = c_B; with B^T = PLU-transposed, reuse via dense solve.
  std::vector<double> bt(static_cast<size_t>(m) * m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      bt[static_cast<size_t>(i) * m + j] = b_mat[static_cast<size_t>(j) * m + i];
    }
  }
  std::vector<double> cb(m);
  for (int c = 0; c < m; ++c) cb[c] = basis[c] < rows ? 1.0 : 0.0;
  // Gaussian elimination on [B^T | c_B].
  std::vector<int> order(m);
  for (int i = 0; i < m; ++i) order[i] = i;
  for (int col = 0; col < m; ++col) {
    int piv = col;
    for (int r = col + 1; r < m; ++r) {
      if (std::abs(bt[static_cast<size_t>(r) * m + col]) >
          std::abs(bt[static_cast<size_t>(piv) * m + col])) {
        piv = r;
      }
    }
    if (std::abs(bt[static_cast<size_t>(piv) * m + col]) < 1e-12) return false;
    if (piv != col) {
      for (int j = 0; j < m; ++j) {
        std::swap(bt[static_cast<size_t>(piv) * m + j],
                  bt[static_cast<size_t>(col) * m + j]);
      }
      std::swap(cb[piv], cb[col]);
    }
    double d = bt[static_cast<size_t>(col) * m + col];
    for (int r = col + 1; r < m; ++r) {
      double f = bt[static_cast<size_t>(r) * m + col] / d;
      for (int j = col; j < m; ++j) {
        bt[static_cast<size_t>(r) * m + j] -=
            f * bt[static_cast<size_t>(col) * m + j];
      }
      cb[r] -= f * cb[col];
    }
  }
  for (int i = m - 1; i >= 0; --i) {
    for (int j = i + 1; j < m; ++j) {
      cb[i] -= bt[static_cast<size_t>(i) * m + j] * cb[j];
    }
    cb[i] /= bt[static_cast<size_t>(i) * m + i];
  }
  *y = cb;
  return true;
}

}  // namespace

MinimaxSolution SolveMinimax(const std::vector<std::vector<double>>& matrix) {
  int rows = static_cast<int>(matrix.size());
  if (rows < 1 || matrix[0].empty()) {
    throw ParamError("minimax needs a non-empty matrix");
  }
  int cols = static_cast<int>(matrix[0].size());
  double min_entry = std::numeric_limits<double>::infinity();
  for (const std::vector<double>& row : matrix) {
    if (static_cast<int>(row.size()) != cols) {
      throw ParamError("ragged minimax matrix");
    }
    for (double v : row) {
      if (!std::isfinite(v)) throw NumericError("non-finite matrix entry");
      min_entry = std::min(min_entry, v);
    }
  }
  double shift = 1.0 - min_entry;

  GameSimplex simplex(matrix, shift);
  simplex.Solve();
  std::vector<double> u = simplex.Solution();
  std::vector<double> y = simplex.Duals();
  RepairBasis(matrix, shift, simplex.basis(), &u, &y);

  double u_total = 0.0;
  for (double v : u) u_total += v;
  if (!(u_total > 0.0)) throw NumericError("degenerate simplex solution");

  MinimaxSolution sol;
  sol.rho.resize(rows);
  for (int t = 0; t < rows; ++t) sol.rho[t] = std::max(u[t], 0.0) / u_total;
  // Exact renormalization guards the sum-to-one invariant.
  double rho_total = 0.0;
  for (double v : sol.rho) rho_total += v;
  for (double& v : sol.rho) v /= rho_total;

  // Primal value on the original matrix.
  double primal = -std::numeric_limits<double>::infinity();
  std::vector<double> col_values(cols);
  for (int k = 0; k < cols; ++k) {
    double s = 0.0;
    for (int t = 0; t < rows; ++t) s += sol.rho[t] * matrix[t][k];
    col_values[k] = s;
    primal = std::max(primal, s);
  }

  // Dual value: the column player's guarantee min_t (M yhat)_t.
  double y_total = 0.0;
  for (double v : y) y_total += std::max(v, 0.0);
  if (y_total > 0.0) {
    double dual = std::numeric_limits<double>::infinity();
    for (int t = 0; t < rows; ++t) {
      double s = 0.0;
      for (int k = 0; k < cols; ++k) {
        s += matrix[t][k] * std::max(y[k], 0.0) / y_total;
      }
      dual = std::min(dual, s);
    }
    if (std::abs(primal - dual) > kLpDualityTolerance) {
      throw NumericError("minimax duality gap above tolerance");
    }
  }

  sol.value = primal;
  for (int k = 0; k < cols; ++k) {
    if (col_values[k] >= primal - kLpDualityTolerance) {
      sol.active_columns.push_back(k);
    }
  }
  return sol;
}

std::vector<NoisyGapSample> NoisyCompressionGap(
    const std::vector<std::vector<double>>& matrix, double sigma,
    const std::vector<uint64_t>& seeds) {
  if (sigma < 0.0) throw ParamError("negative noise level");
  MinimaxSolution clean = SolveMinimax(matrix);

  std::vector<NoisyGapSample> samples;
  samples.reserve(seeds.size());
  for (uint64_t seed : seeds) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d(0.0, sigma);
    std::vector<std::vector<double>> noisy = matrix;
    double eps_inf = 0.0;
    if (sigma > 0.0) {
      for (std::vector<double>& row : noisy) {
        for (double& v : row) {
          double eps = d(rng);
          v += eps;
          eps_inf = std::max(eps_inf, std::abs(eps));
        }
      }
    }
    MinimaxSolution perturbed = SolveMinimax(noisy);

    double worst = -std::numeric_limits<double>::infinity();
    int cols = static_cast<int>(matrix[0].size());
    for (int k = 0; k < cols; ++k) {
      double s = 0.0;
      for (size_t t = 0; t < matrix.size(); ++t) {
        s += perturbed.rho[t] * matrix[t][k];
      }
      worst = std::max(worst, s);
    }
    samples.push_back({worst - clean.value, 4.0 * eps_inf});
  }
  return samples;
}

}  // namespace mfpsro
