#include "vps/jacobian.hpp"

#include <cmath>

#include "vps/errors.hpp"

namespace vps {

double lu_det(std::vector<double> m, std::size_t n) {
  if (m.size() != n * n) throw DomainError("lu_det: matrix size mismatch");
  double det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < n; ++row)
      if (std::abs(m[row * n + col]) > std::abs(m[pivot * n + col])) pivot = row;
    if (m[pivot * n + col] == 0.0) return 0.0;
    if (pivot != col) {
      for (std::size_t k = col; k < n; ++k) std::swap(m[pivot * n + k], m[col * n + k]);
      det = -det;
    }
    det *= m[col * n + col];
    for (std::size_t row = col + 1; row < n; ++row) {
      const double factor = m[row * n + col] / m[col * n + col];
      for (std::size_t k = col + 1; k < n; ++k) m[row * n + k] -= factor * m[col * n + k];
    }
  }
  return det;
}

double jacobian_det(const StepMap& map, std::span<const double> x, double h, double delta) {
  const std::size_t n = x.size();
  std::vector<double> jac(n * n);
  std::vector<double> xp(x.begin(), x.end()), xm(x.begin(), x.end());
  for (std::size_t i = 0; i < n; ++i) {
    const double d = delta * std::max(1.0, std::abs(x[i]));
    xp[i] = x[i] + d;
    xm[i] = x[i] - d;
    // The rounded perturbations are the actual stencil; dividing by their
    // exact spread avoids a spurious O(eps*x/delta) error on the diagonal.
    const double spread = xp[i] - xm[i];
    const auto fp = map(xp, h);
    const auto fm = map(xm, h);
    for (std::size_t k = 0; k < n; ++k) jac[k * n + i] = (fp[k] - fm[k]) / spread;
    xp[i] = x[i];
    xm[i] = x[i];
  }
  return lu_det(std::move(jac), n);
}

}  // namespace vps
