#include "vps/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "vps/errors.hpp"

namespace vps {

namespace {

using nlohmann::json;

Rational exponent_from_json(const json& e) {
  if (e.is_number_integer() || e.is_number_unsigned()) return Rational(e.get<std::int64_t>());
  if (e.is_string()) return Rational::parse(e.get<std::string>());
  throw DomainError("exponent must be an integer or a \"p/q\" string");
}

json exponent_to_json(const Rational& e) {
  if (e.is_integer()) return json(e.num());
  return json(e.to_string());
}

VectorField field_from_json(const json& doc) {
  if (!doc.is_object()) throw DomainError("problem file must be a JSON object");
  const auto n = doc.at("dim").get<std::int64_t>();
  if (n < 1) throw DomainError("dim must be at least 1");
  const std::size_t dim = static_cast<std::size_t>(n);
  const auto& comps = doc.at("components");
  if (!comps.is_array() || comps.size() != dim)
    throw DomainError("components must be an array of length dim");

  std::vector<SparsePolynomial> fields;
  fields.reserve(dim);
  for (const auto& comp : comps) {
    if (!comp.is_array()) throw DomainError("each component must be an array of terms");
    std::vector<std::pair<MultiIndex, double>> terms;
    terms.reserve(comp.size());
    for (const auto& term : comp) {
      const auto& exp = term.at("exp");
      if (!exp.is_array() || exp.size() != dim)
        throw DomainError("term exponent list must have length dim");
      std::vector<Rational> exps;
      exps.reserve(dim);
      for (const auto& e : exp) exps.push_back(exponent_from_json(e));
      terms.emplace_back(MultiIndex(std::move(exps)), term.at("coef").get<double>());
    }
    fields.push_back(SparsePolynomial::from_terms(dim, terms));
  }
  return VectorField(std::move(fields));
}

}  // namespace

VectorField parse_problem(const std::string& json_text) {
  try {
    return field_from_json(json::parse(json_text));
  } catch (const json::exception& e) {
    throw DomainError(std::string("problem file: ") + e.what());
  }
}

VectorField load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open problem file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

std::string serialize_problem(const VectorField& f) {
  json doc;
  doc["dim"] = f.dim();
  json comps = json::array();
  for (std::size_t i = 0; i < f.dim(); ++i) {
    json terms = json::array();
    for (const auto& [j, coef] : f.component(i).terms()) {
      json exp = json::array();
      for (std::size_t k = 0; k < f.dim(); ++k) exp.push_back(exponent_to_json(j[k]));
      terms.push_back(json{{"exp", exp}, {"coef", coef}});
    }
    comps.push_back(terms);
  }
  doc["components"] = comps;
  return doc.dump(2);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  const std::size_t dim = traj.states.empty() ? 0 : traj.states.front().size();
  os << "t";
  for (std::size_t i = 1; i <= dim; ++i) os << ",x" << i;
  os << "\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    os << format_double(traj.times[k]);
    for (double v : traj.states[k]) os << "," << format_double(v);
    os << "\n";
  }
}

void write_section_csv(std::ostream& os, const SectionResult& sec, std::size_t dim,
                       std::size_t section_axis) {
  bool first = true;
  for (std::size_t i = 0; i < dim; ++i) {
    if (i == section_axis) continue;
    os << (first ? "" : ",") << "x" << (i + 1);
    first = false;
  }
  os << "\n";
  for (const auto& p : sec.points) {
    for (std::size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << format_double(p[i]);
    os << "\n";
  }
}

}  // namespace vps
