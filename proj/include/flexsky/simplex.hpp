#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace flexsky {

enum class LpStatus { Optimal, Infeasible, Unbounded };

template <typename Scalar>
struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Scalar value = Scalar(0);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x;
};

/// Dense two-phase tableau simplex for
///
///     maximize c'x  subject to  A x <= b,  x >= 0.
///
/// Negative entries of b are handled by an auxiliary phase that drives an
/// artificial variable out of the basis. Entering columns follow Dantzig's
/// rule with index tie-breaks and fall back to Bland's rule once the pivot
/// count suggests cycling on a degenerate vertex.
template <typename Scalar>
class DenseSimplex {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  template <typename DerivedA, typename DerivedB, typename DerivedC>
  DenseSimplex(const Eigen::MatrixBase<DerivedA>& A, const Eigen::MatrixBase<DerivedB>& b,
               const Eigen::MatrixBase<DerivedC>& c, Scalar eps = Scalar(1e-9))
      : m_(static_cast<int>(b.size())),
        n_(static_cast<int>(c.size())),
        eps_(eps),
        basic_(m_),
        nonbasic_(n_ + 1),
        tab_(Matrix::Zero(m_ + 2, n_ + 2)) {
    tab_.topLeftCorner(m_, n_) = A.template cast<Scalar>();
    for (int i = 0; i < m_; ++i) {
      basic_[i] = n_ + i;
      tab_(i, n_) = Scalar(-1);
      tab_(i, n_ + 1) = static_cast<Scalar>(b(i));
    }
    for (int j = 0; j < n_; ++j) {
      nonbasic_[j] = j;
      tab_(m_, j) = -static_cast<Scalar>(c(j));
    }
    nonbasic_[n_] = -1;
    tab_(m_ + 1, n_) = Scalar(1);
  }

  LpSolution<Scalar> solve() {
    LpSolution<Scalar> out;
    out.x = Vec::Zero(n_);
    if (m_ > 0) {
      int r = 0;
      for (int i = 1; i < m_; ++i) {
        if (tab_(i, n_ + 1) < tab_(r, n_ + 1)) r = i;
      }
      if (tab_(r, n_ + 1) < -eps_) {
        pivot(r, n_);
        if (!run(2) || tab_(m_ + 1, n_ + 1) < -eps_) {
          out.status = LpStatus::Infeasible;
          return out;
        }
        for (int i = 0; i < m_; ++i) {
          if (basic_[i] != -1) continue;
          int s = 0;
          for (int j = 1; j <= n_; ++j) {
            if (less_at(i, j, s)) s = j;
          }
          pivot(i, s);
        }
      }
    }
    const bool bounded = run(1);
    for (int i = 0; i < m_; ++i) {
      if (basic_[i] >= 0 && basic_[i] < n_) out.x(basic_[i]) = tab_(i, n_ + 1);
    }
    if (!bounded) {
      out.status = LpStatus::Unbounded;
      out.value = std::numeric_limits<Scalar>::infinity();
      return out;
    }
    out.status = LpStatus::Optimal;
    out.value = tab_(m_, n_ + 1);
    return out;
  }

 private:
  bool less_at(int row, int j, int s) const {
    const Scalar a = tab_(row, j);
    const Scalar b = tab_(row, s);
    return a < b || (a == b && nonbasic_[j] < nonbasic_[s]);
  }

  void pivot(int r, int s) {
    const Scalar inv = Scalar(1) / tab_(r, s);
    for (int i = 0; i < m_ + 2; ++i) {
      if (i == r || std::abs(tab_(i, s)) <= eps_) continue;
      const Scalar factor = tab_(i, s) * inv;
      tab_.row(i) -= factor * tab_.row(r);
      tab_(i, s) = tab_(r, s) * factor;
    }
    tab_.row(r) *= inv;
    tab_.col(s) *= -inv;
    tab_(r, s) = inv;
    std::swap(basic_[r], nonbasic_[s]);
  }

  // Phase 1 optimizes the real objective row, phase 2 the auxiliary one.
  bool run(int phase) {
    const int obj = m_ + phase - 1;
    const long bland_after = 50L * (m_ + n_ + 2);
    for (long iter = 0;; ++iter) {
      int s = -1;
      if (iter < bland_after) {
        for (int j = 0; j <= n_; ++j) {
          if (nonbasic_[j] == -phase) continue;
          if (s == -1 || less_at(obj, j, s)) s = j;
        }
        if (s == -1 || tab_(obj, s) >= -eps_) return true;
      } else {
        for (int j = 0; j <= n_; ++j) {
          if (nonbasic_[j] == -phase || tab_(obj, j) >= -eps_) continue;
          if (s == -1 || nonbasic_[j] < nonbasic_[s]) s = j;
        }
        if (s == -1) return true;
      }
      int r = -1;
      for (int i = 0; i < m_; ++i) {
        if (tab_(i, s) <= eps_) continue;
        if (r == -1) {
          r = i;
          continue;
        }
        const Scalar ri = tab_(i, n_ + 1) / tab_(i, s);
        const Scalar rr = tab_(r, n_ + 1) / tab_(r, s);
        if (ri < rr || (ri == rr && basic_[i] < basic_[r])) r = i;
      }
      if (r == -1) return false;
      pivot(r, s);
    }
  }

  int m_;
  int n_;
  Scalar eps_;
  std::vector<int> basic_;
  std::vector<int> nonbasic_;
  Matrix tab_;
};

template <typename DerivedA, typename DerivedB, typename DerivedC>
auto solve_lp(const Eigen::MatrixBase<DerivedA>& A, const Eigen::MatrixBase<DerivedB>& b,
              const Eigen::MatrixBase<DerivedC>& c, typename DerivedA::Scalar eps = 1e-9) {
  using Scalar = typename DerivedA::Scalar;
  return DenseSimplex<Scalar>(A, b, c, eps).solve();
}

}  // namespace flexsky
