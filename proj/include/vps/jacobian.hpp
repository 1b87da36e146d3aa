#ifndef VPS_JACOBIAN_HPP
#define VPS_JACOBIAN_HPP

#include <functional>
#include <span>
#include <vector>

namespace vps {

using StepMap = std::function<std::vector<double>(std::span<const double> x, double h)>;

// Determinant of the step map's Jacobian at x via central finite differences
// with per-axis perturbation delta * max(1, |x_i|), then LU with partial
// pivoting. Map errors propagate.
double jacobian_det(const StepMap& map, std::span<const double> x, double h, double delta);

// Determinant of a dense matrix (row-major n x n) by LU with partial pivoting.
double lu_det(std::vector<double> m, std::size_t n);

}  // namespace vps

#endif  // VPS_JACOBIAN_HPP
