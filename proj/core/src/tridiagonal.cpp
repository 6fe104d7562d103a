#include "lagsw/tridiagonal.hpp"

#include <cmath>
#include <stdexcept>

#include "lagsw/state.hpp"

namespace lagsw {

void solve_tridiagonal(const SymmetricTridiagonal& a, std::span<double> rhs) {
  const std::size_t n = a.size();
  if (rhs.size() != n) throw std::invalid_argument("tridiagonal: rhs size mismatch");
  if (n == 0) return;
  // Forward elimination keeps the modified super-diagonal in a scratch buffer.
  std::vector<double> c(n, 0.0);
  double pivot = a.diag[0];
  if (!(pivot > 0.0) || !std::isfinite(pivot)) throw SolverError("tridiagonal solve breakdown");
  if (n > 1) c[0] = a.off[0] / pivot;
  rhs[0] /= pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = a.diag[i] - a.off[i - 1] * c[i - 1];
    if (!(pivot > 0.0) || !std::isfinite(pivot)) throw SolverError("tridiagonal solve breakdown");
    if (i + 1 < n) c[i] = a.off[i] / pivot;
    rhs[i] = (rhs[i] - a.off[i - 1] * rhs[i - 1]) / pivot;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i] * rhs[i + 1];
}

std::vector<double> multiply(const SymmetricTridiagonal& a, std::span<const double> x) {
  const std::size_t n = a.size();
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = a.diag[i] * x[i];
    if (i > 0) y[i] += a.off[i - 1] * x[i - 1];
    if (i + 1 < n) y[i] += a.off[i] * x[i + 1];
  }
  return y;
}

}  // namespace lagsw
