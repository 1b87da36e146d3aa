#ifndef VPS_PROBLEMS_HPP
#define VPS_PROBLEMS_HPP

#include <random>
#include <string>
#include <vector>

#include "vps/vector_field.hpp"

namespace vps {

// Quadratic Stokes flow:
//   x1' = -8 x1 x2 + eps x3
//   x2' = 11 x1^2 + 3 x2^2 + x3^2 - 3
//   x3' = 2 x3 x2 - eps x1
VectorField build_quad_stokes(double epsilon);

// Cubic Stokes drop flow x' = 1/2 [(5 r^2 - 3) E x - 2 x (x' E x)] + 1/2 w x x
// with E = diag(1, alpha, -(1+alpha)) / (1+alpha) and w = (w1, 0, w3),
// w1 = w_norm sin(theta), w3 = w_norm cos(theta) measured from the x3-axis.
// Throws ConstructionError if the expansion fails the divergence check.
VectorField build_cubic_stokes(double alpha, double w_norm, double theta);

// Laurent example:
//   x1' = 3 x1^-2 x2^2 + 2 x1^3 x2^-3
//   x2' = 2 x1^-3 x2^3 + 3 x1^2 x2^-2
VectorField build_laurent();

struct BuiltinDefaults {
  std::vector<double> x0;
  double h;
  double T;
};

// Reference setups used by the experiments (also the CLI defaults).
BuiltinDefaults builtin_defaults(const std::string& name);

// Admissible sampling box for a built-in problem: the unit ball for the
// Stokes problems, [0.05, 1]^2 with random signs for the Laurent problem.
std::vector<double> sample_admissible_point(const std::string& name, std::size_t dim,
                                            std::mt19937_64& rng);

bool is_builtin(const std::string& name);

}  // namespace vps

#endif  // VPS_PROBLEMS_HPP
