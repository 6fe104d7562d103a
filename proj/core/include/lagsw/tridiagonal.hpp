#pragma once

#include <span>
#include <vector>

namespace lagsw {

/// Symmetric tridiagonal system with diagonal `diag` (n entries) and
/// off-diagonal `off` (n-1 entries, off[i] couples unknowns i and i+1).
struct SymmetricTridiagonal {
  std::vector<double> diag;
  std::vector<double> off;

  explicit SymmetricTridiagonal(std::size_t n = 0) : diag(n, 0.0), off(n > 0 ? n - 1 : 0, 0.0) {}
  std::size_t size() const { return diag.size(); }
};

/// Solves A x = rhs by the Thomas recurrence, overwriting rhs with x.
///
/// Throws SolverError when a pivot is not strictly positive, which for the
/// symmetric positive-definite systems assembled by the steppers signals breakdown.
void solve_tridiagonal(const SymmetricTridiagonal& a, std::span<double> rhs);

/// y = A x, used by tests and residual checks.
std::vector<double> multiply(const SymmetricTridiagonal& a, std::span<const double> x);

}  // namespace lagsw
