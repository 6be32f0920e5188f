#pragma once

#include <span>
#include <vector>

namespace cohesive {

/// LDL^T factorization of a symmetric tridiagonal matrix (diagonal d, off
/// diagonal e with e[i] coupling i and i+1).
class TridiagonalLdl {
 public:
  /// Returns false, leaving the object unusable, if a pivot is <= min_pivot.
  bool factor(std::span<const double> diag, std::span<const double> off,
              double min_pivot = 0.0) {
    const std::size_t n = diag.size();
    pivot_.assign(n, 0.0);
    lower_.assign(n > 0 ? n - 1 : 0, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double p = diag[i];
      if (i > 0) p -= lower_[i - 1] * lower_[i - 1] * pivot_[i - 1];
      if (!(p > min_pivot)) return false;
      pivot_[i] = p;
      if (i + 1 < n) lower_[i] = off[i] / p;
    }
    return true;
  }

  void solve(std::span<double> rhs) const {
    const std::size_t n = pivot_.size();
    for (std::size_t i = 1; i < n; ++i) rhs[i] -= lower_[i - 1] * rhs[i - 1];
    for (std::size_t i = 0; i < n; ++i) rhs[i] /= pivot_[i];
    for (std::size_t i = n; i-- > 1;) rhs[i - 1] -= lower_[i - 1] * rhs[i];
  }

 private:
  std::vector<double> pivot_;
  std::vector<double> lower_;
};

}  // namespace cohesive
