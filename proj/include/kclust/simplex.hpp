#pragma once

#include "kclust/numeric.hpp"

#include <vector>

namespace kclust {

// Exact tableau simplex for  max c.x  s.t.  A x <= b,  x >= 0.
// Two phases with one auxiliary variable; Bland's rule in both phases, so
// no cycling and no tolerances.
class ExactSimplex {
 public:
  enum class Status { Optimal, Infeasible, Unbounded };

  ExactSimplex(const std::vector<std::vector<Rational>>& A, const std::vector<Rational>& b,
               const std::vector<Rational>& c)
      : m_(b.size()), n_(c.size()), B_(m_), N_(n_ + 1), D_(m_ + 2, std::vector<Rational>(n_ + 2)) {
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = 0; j < n_; ++j) D_[i][j] = A[i][j];
    for (std::size_t i = 0; i < m_; ++i) {
      B_[i] = static_cast<long>(n_ + i);
      D_[i][n_] = -1;
      D_[i][n_ + 1] = b[i];
    }
    for (std::size_t j = 0; j < n_; ++j) {
      N_[j] = static_cast<long>(j);
      D_[m_][j] = -c[j];
    }
    N_[n_] = -1;
    D_[m_ + 1][n_] = 1;
  }

  Status solve(std::vector<Rational>& x, Rational& value) {
    std::size_t r = 0;
    for (std::size_t i = 1; i < m_; ++i)
      if (D_[i][n_ + 1] < D_[r][n_ + 1]) r = i;
    if (m_ > 0 && D_[r][n_ + 1] < 0) {
      pivot(r, n_);
      if (!run(2) || D_[m_ + 1][n_ + 1] < 0) return Status::Infeasible;
      for (std::size_t i = 0; i < m_; ++i) {
        if (B_[i] != -1) continue;
        // Drive the auxiliary variable out of the basis.
        std::size_t s = n_ + 1;
        for (std::size_t j = 0; j <= n_; ++j)
          if (D_[i][j] != 0 && (s == n_ + 1 || N_[j] < N_[s])) s = j;
        if (s != n_ + 1) pivot(i, s);
      }
    }
    if (!run(1)) return Status::Unbounded;
    x.assign(n_, Rational(0));
    for (std::size_t i = 0; i < m_; ++i)
      if (B_[i] >= 0 && static_cast<std::size_t>(B_[i]) < n_) x[static_cast<std::size_t>(B_[i])] = D_[i][n_ + 1];
    value = D_[m_][n_ + 1];
    return Status::Optimal;
  }

  std::size_t pivots() const { return pivots_; }

 private:
  void pivot(std::size_t r, std::size_t s) {
    ++pivots_;
    Rational inv = 1 / D_[r][s];
    for (std::size_t i = 0; i < m_ + 2; ++i) {
      if (i == r || D_[i][s] == 0) continue;
      Rational orig = D_[i][s];
      Rational f = orig * inv;
      for (std::size_t j = 0; j < n_ + 2; ++j)
        if (D_[r][j] != 0) D_[i][j] -= D_[r][j] * f;
      D_[i][s] = orig;  // scaled by -inv below
    }
    for (std::size_t j = 0; j < n_ + 2; ++j)
      if (j != s) D_[r][j] *= inv;
    for (std::size_t i = 0; i < m_ + 2; ++i)
      if (i != r) D_[i][s] *= -inv;
    D_[r][s] = inv;
    std::swap(B_[r], N_[s]);
  }

  // Bland: entering = negative reduced cost with the smallest variable id;
  // leaving = minimum ratio, ties by smallest basic variable id.
  bool run(int phase) {
    std::size_t x = m_ + static_cast<std::size_t>(phase) - 1;
    for (;;) {
      std::size_t s = n_ + 1;
      for (std::size_t j = 0; j <= n_; ++j) {
        if (N_[j] == -phase) continue;
        if (D_[x][j] < 0 && (s == n_ + 1 || N_[j] < N_[s])) s = j;
      }
      if (s == n_ + 1) return true;
      std::size_t r = m_;
      Rational best;
      for (std::size_t i = 0; i < m_; ++i) {
        if (D_[i][s] <= 0) continue;
        Rational ratio = D_[i][n_ + 1] / D_[i][s];
        if (r == m_ || ratio < best || (ratio == best && B_[i] < B_[r])) {
          r = i;
          best = ratio;
        }
      }
      if (r == m_) return false;
      pivot(r, s);
    }
  }

  std::size_t m_, n_;
  std::vector<long> B_, N_;
  std::vector<std::vector<Rational>> D_;
  std::size_t pivots_ = 0;
};

}  // namespace kclust
