#ifndef VPS_IO_HPP
#define VPS_IO_HPP

#include <ostream>
#include <string>
#include <vector>

#include "vps/integrate.hpp"
#include "vps/vector_field.hpp"

namespace vps {

// Problem file schema:
//   { "dim": n, "components": [ [ {"exp": [e1,...,en], "coef": c}, ... ], ... ] }
// where each exponent is an integer or a string "p/q". Rejects dimension
// mismatches and zero denominators.
VectorField load_problem(const std::string& path);
VectorField parse_problem(const std::string& json_text);
std::string serialize_problem(const VectorField& f);

// CSV with header t,x1,...,xn and 17 significant digits per value.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

// CSV of section points; header keeps the retained coordinate names
// (e.g. x1,x3 for a section on axis 2 of a 3-D system).
void write_section_csv(std::ostream& os, const SectionResult& sec, std::size_t dim,
                       std::size_t section_axis);

// Shortest text that reloads to exactly the same double ("%.17g").
std::string format_double(double v);

}  // namespace vps

#endif  // VPS_IO_HPP
