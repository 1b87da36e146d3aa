#include "vps/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "vps/edfvf.hpp"
#include "vps/errors.hpp"
#include "vps/integrate.hpp"
#include "vps/io.hpp"
#include "vps/jacobian.hpp"
#include "vps/log.hpp"
#include "vps/problems.hpp"
#include "vps/rk45.hpp"
#include "vps/scheme.hpp"

namespace vps {

namespace {

using nlohmann::json;

constexpr double kPi = 3.14159265358979323846;

// Flag-level misuse that CLI11 cannot catch itself (exit code 3).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string problem;
  std::string method = "split2";
  double h = 0.0;    // 0 selects the problem default
  double T = -1.0;   // < 0 selects the problem default
  std::string x0_text;
  std::string output;
  std::uint64_t seed = 0;
  double epsilon = 0.1;
  double alpha = 1.0;
  double w_norm = 1.5;
  double theta = 0.275 * kPi;
  double rel_tol = 1e-3;
  double abs_tol = 1e-6;
  // poincare
  int axis = 2;
  double level = 0.0;
  std::string direction = "+1";
  // verify
  std::uint64_t samples = 20;
  double delta = 1e-5;
};

void add_common_flags(CLI::App* cmd, Config& c, bool with_method) {
  cmd->set_help_flag("--help", "print this help message and exit");
  cmd->add_option("--problem", c.problem,
                  "builtin (quad_stokes|cubic_stokes|laurent) or a problem-file path")
      ->required();
  if (with_method)
    cmd->add_option("--method", c.method, "split1|split2|rk45")
        ->check(CLI::IsMember({"split1", "split2", "rk45"}));
  cmd->add_option("--h", c.h, "step size (builtin default when omitted)");
  cmd->add_option("--T", c.T, "integration horizon (builtin default when omitted)");
  cmd->add_option("--x0", c.x0_text, "initial point as a comma list, e.g. 0,0,0.96");
  cmd->add_option("--output", c.output, "output file path");
  cmd->add_option("--seed", c.seed, "sampling seed");
  cmd->add_option("--epsilon", c.epsilon, "quad_stokes perturbation");
  cmd->add_option("--alpha", c.alpha, "cubic_stokes strain ratio E22/E11");
  cmd->add_option("--wnorm", c.w_norm, "cubic_stokes vorticity magnitude");
  cmd->add_option("--theta", c.theta, "cubic_stokes vorticity angle from the x3-axis (radians)");
  cmd->add_option("--rel-tol", c.rel_tol, "rk45 relative tolerance");
  cmd->add_option("--abs-tol", c.abs_tol, "rk45 absolute tolerance");
}

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("bad --x0 entry: " + item);
    }
  }
  return out;
}

struct Problem {
  std::string name;  // builtin name or "file"
  VectorField field;
  std::vector<double> x0;
  double h;
  double T;
};

Problem resolve_problem(const Config& c, bool need_x0 = true) {
  if (is_builtin(c.problem)) {
    VectorField field = [&] {
      if (c.problem == "quad_stokes") return build_quad_stokes(c.epsilon);
      if (c.problem == "cubic_stokes") return build_cubic_stokes(c.alpha, c.w_norm, c.theta);
      return build_laurent();
    }();
    const auto defaults = builtin_defaults(c.problem);
    Problem p{c.problem, std::move(field), defaults.x0, defaults.h, defaults.T};
    if (!c.x0_text.empty()) p.x0 = parse_point(c.x0_text);
    if (c.h > 0.0) p.h = c.h;
    if (c.T >= 0.0) p.T = c.T;
    if (p.x0.size() != p.field.dim()) throw UsageError("--x0 has the wrong dimension");
    return p;
  }
  VectorField field = load_problem(c.problem);
  if (need_x0 && c.x0_text.empty()) throw UsageError("--x0 is required for problem files");
  Problem p{"file", std::move(field), {}, c.h > 0.0 ? c.h : 0.01, c.T >= 0.0 ? c.T : 1.0};
  if (!c.x0_text.empty()) {
    p.x0 = parse_point(c.x0_text);
    if (p.x0.size() != p.field.dim()) throw UsageError("--x0 has the wrong dimension");
  }
  return p;
}

int scheme_order(const Config& c) {
  if (c.method == "split1") return 1;
  if (c.method == "split2") return 2;
  return 0;  // rk45
}

void emit(const std::string& text, const std::string& output) {
  if (output.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(output);
  if (!out) throw Error("cannot open output file: " + output);
  out << text << "\n";
}

json index_to_json(const MultiIndex& j) {
  json arr = json::array();
  for (std::size_t i = 0; i < j.dim(); ++i) {
    if (j[i].is_integer())
      arr.push_back(j[i].num());
    else
      arr.push_back(j[i].to_string());
  }
  return arr;
}

json poly_to_json(const SparsePolynomial& p) {
  json terms = json::array();
  for (const auto& [j, coef] : p.terms())
    terms.push_back(json{{"exp", index_to_json(j)}, {"coef", coef}});
  return terms;
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double norm_inf_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

int cmd_decompose(const Config& c) {
  const Problem p = resolve_problem(c, /*need_x0=*/false);
  const auto split = diag_offdiag_split(p.field);
  std::vector<Edfvf> edfvfs;
  try {
    edfvfs = decompose_diagonal(split.diag);
  } catch (const NotDivergenceFreeError& e) {
    json err{{"error", "not_divergence_free"}, {"monomial", e.monomial}, {"residual", e.residual}};
    emit(err.dump(2), c.output);
    std::cerr << "vps: " << e.what() << "\n";
    return 2;
  }
  json report;
  report["dim"] = p.field.dim();
  json elist = json::array();
  for (const auto& e : edfvfs) {
    json item{{"j", index_to_json(e.j())},
              {"a", e.a()},
              {"c", e.c()},
              {"branch", e.exponential_branch() ? "exponential" : "power"},
              {"closure_residual", e.closure_residual()}};
    item["r"] = e.exponential_branch() ? json() : json(e.r());
    elist.push_back(item);
  }
  report["edfvfs"] = elist;
  json shears = json::array();
  for (const auto& s : ShearField(split.offdiag).shears())
    shears.push_back(json{{"axis", s.axis + 1}, {"g", poly_to_json(s.g)}});
  report["shears"] = shears;
  emit(report.dump(2), c.output);
  return 0;
}

json summary_json(const Trajectory& traj, double wall_seconds) {
  json s;
  s["status"] = traj.completed() ? "completed" : "aborted";
  if (!traj.completed()) {
    s["abort_reason"] = traj.abort_reason;
    s["t_abort"] = traj.t_abort;
  }
  s["final_time"] = traj.final_time();
  s["final_state"] = traj.final_state();
  s["steps"] = traj.steps_taken;
  s["wall_time_s"] = wall_seconds;
  double max_n2 = 0.0;
  for (const auto& st : traj.states) max_n2 = std::max(max_n2, norm2(st));
  s["max_norm2"] = max_n2;
  return s;
}

int cmd_integrate(const Config& c) {
  const Problem p = resolve_problem(c);
  const auto start = std::chrono::steady_clock::now();
  Trajectory traj;
  if (scheme_order(c) == 0) {
    RkOptions opts;
    opts.rel_tol = c.rel_tol;
    opts.abs_tol = c.abs_tol;
    opts.h_init = c.h;  // 0 = automatic
    traj = rk45(p.field, p.x0, p.T, opts);
  } else {
    const SplitScheme scheme = build_scheme(p.field, scheme_order(c));
    traj = run(scheme, p.x0, p.h, p.T);
  }
  const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - start;
  log::info("integrated " + p.name + " for " + std::to_string(traj.steps_taken) + " steps");
  if (!c.output.empty()) {
    std::ofstream out(c.output);
    if (!out) throw Error("cannot open output file: " + c.output);
    write_trajectory_csv(out, traj);
  }
  std::cout << summary_json(traj, wall.count()).dump(2) << "\n";
  return traj.completed() ? 0 : 1;
}

int parse_direction(const std::string& d) {
  if (d == "+1" || d == "1" || d == "up") return +1;
  if (d == "-1" || d == "down") return -1;
  if (d == "both") return 0;
  throw UsageError("bad --direction (use +1, -1, or both): " + d);
}

int cmd_poincare(const Config& c) {
  if (scheme_order(c) == 0) throw UsageError("poincare needs --method split1 or split2");
  const Problem p = resolve_problem(c);
  if (c.axis < 1 || static_cast<std::size_t>(c.axis) > p.field.dim())
    throw UsageError("--axis out of range");
  SectionSpec sec;
  sec.axis = static_cast<std::size_t>(c.axis - 1);
  sec.level = c.level;
  sec.direction = parse_direction(c.direction);

  const SplitScheme scheme = build_scheme(p.field, scheme_order(c));
  const auto start = std::chrono::steady_clock::now();
  const SectionResult result = poincare(scheme, p.x0, p.h, p.T, sec);
  const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - start;

  std::ostringstream csv;
  write_section_csv(csv, result, p.field.dim(), sec.axis);
  if (!c.output.empty()) {
    std::ofstream out(c.output);
    if (!out) throw Error("cannot open output file: " + c.output);
    out << csv.str();
  }
  json s;
  s["status"] = result.status == RunStatus::completed ? "completed" : "aborted";
  if (result.status != RunStatus::completed) {
    s["abort_reason"] = result.abort_reason;
    s["t_abort"] = result.t_abort;
  }
  s["points"] = result.points.size();
  s["wall_time_s"] = wall.count();
  std::cout << s.dump(2) << "\n";
  return result.status == RunStatus::completed ? 0 : 1;
}

int cmd_verify(const Config& c) {
  const Problem p = resolve_problem(c, /*need_x0=*/false);
  std::mt19937_64 rng(c.seed);
  const double h = p.h;

  StepMap map;
  SplitScheme scheme({}, 2);
  if (scheme_order(c) == 0) {
    map = [&p, &c](std::span<const double> x, double step_h) {
      RkOptions opts;
      opts.rel_tol = c.rel_tol;
      opts.abs_tol = c.abs_tol;
      const Trajectory t = rk45(p.field, x, step_h, opts);
      if (!t.completed()) throw Error("rk45 step aborted: " + t.abort_reason);
      return t.final_state();
    };
  } else {
    scheme = build_scheme(p.field, scheme_order(c));
    map = [&scheme](std::span<const double> x, double step_h) {
      return scheme.step(x, step_h);
    };
  }

  // Volume check with rejection sampling: points where the map or the FD
  // stencil leaves the flow's domain are skipped, as are points within a
  // factor 2 of an elementary flow's singular guard, where the finite
  // differences cannot resolve the determinant to the reported precision.
  std::vector<Edfvf> guard_flows;
  if (scheme_order(c) != 0)
    for (const auto& flow : scheme.flows())
      if (const auto* e = std::get_if<Edfvf>(&flow)) guard_flows.push_back(*e);
  double max_det_err = 0.0;
  std::uint64_t collected = 0, attempts = 0;
  while (collected < c.samples) {
    if (++attempts > 200 * c.samples) throw Error("could not sample enough admissible points");
    const auto x = sample_admissible_point(p.name, p.field.dim(), rng);
    try {
      bool in_margin = true;
      for (const Edfvf& e : guard_flows)
        if (std::abs(e.c() * e.monomial_value(x) * h) > 0.5) in_margin = false;
      if (!in_margin) continue;
      const double det = jacobian_det(map, x, h, c.delta);
      max_det_err = std::max(max_det_err, std::abs(det - 1.0));
      ++collected;
    } catch (const Error&) {
      continue;
    }
  }

  json report;
  report["samples"] = c.samples;
  report["h"] = h;
  report["delta"] = c.delta;
  report["max_abs_det_minus_1"] = max_det_err;

  if (scheme_order(c) != 0) {
    json flows = json::array();
    for (const auto& flow : scheme.flows()) {
      const auto* e = std::get_if<Edfvf>(&flow);
      if (!e) continue;
      double exactness = 0.0, drift = 0.0;
      const VectorField ef = e->as_vector_field();
      for (std::uint64_t s = 0; s < c.samples; ++s) {
        auto x = sample_admissible_point(p.name, p.field.dim(), rng);
        for (double& xi : x) xi = std::abs(xi) + 0.05;  // positive orthant for the integrals
        const double m0 = e->monomial_value(x);
        double hs = h;
        if (e->c() * m0 > 0.0) hs = std::min(hs, 0.5 / (e->c() * m0));
        const auto exact = e->flow(x, hs);
        const Trajectory ref = rk45(ef, x, hs, RkOptions::tol(1e-12));
        if (ref.completed())
          exactness = std::max(exactness, norm_inf_diff(exact, ref.final_state()));
        for (const auto& b : integrals_basis(*e)) {
          const double before = real_monomial_value(x, b);
          const double after = real_monomial_value(exact, b);
          if (before != 0.0)
            drift = std::max(drift, std::abs(after - before) / std::abs(before));
        }
      }
      flows.push_back(json{{"j", index_to_json(e->j())},
                           {"exactness_error", exactness},
                           {"max_integral_drift", drift}});
    }
    report["per_flow"] = flows;
  }
  emit(report.dump(2), c.output);
  return 0;
}

int cmd_order(const Config& c) {
  if (scheme_order(c) == 0) throw UsageError("order needs --method split1 or split2");
  Config cc = c;
  if (cc.T < 0.0) cc.T = 1.0;
  if (cc.h <= 0.0) cc.h = 0.02;
  const Problem p = resolve_problem(cc);
  const SplitScheme scheme = build_scheme(p.field, scheme_order(c));

  std::vector<double> hs, errs;
  for (int k = 0; k < 4; ++k) {
    const double h = p.h / static_cast<double>(1 << k);
    const auto steps = static_cast<std::uint64_t>(std::ceil(p.T / h - 1e-9));
    const double t_end = static_cast<double>(steps) * h;
    const Trajectory traj = run(scheme, p.x0, h, t_end);
    if (!traj.completed()) throw Error("split run aborted during the order study");
    const Trajectory ref = rk45(p.field, p.x0, t_end, RkOptions::tol(1e-12));
    if (!ref.completed()) throw Error("reference run aborted during the order study");
    hs.push_back(h);
    errs.push_back(norm_inf_diff(traj.final_state(), ref.final_state()));
  }
  // Least-squares slope of log(err) vs log(h).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(hs.size());
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const double lx = std::log(hs[i]), ly = std::log(errs[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);

  json report{{"method", c.method}, {"T", p.T}, {"h", hs}, {"errors", errs}, {"slope", slope}};
  emit(report.dump(2), c.output);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"explicit volume-preserving splitting integrators for divergence-free "
               "polynomial vector fields"};
  app.set_help_flag("--help", "print this help message and exit");
  app.require_subcommand(1);
  Config c;
  auto* decompose = app.add_subcommand("decompose", "split a field into exact flows");
  add_common_flags(decompose, c, false);
  auto* integrate = app.add_subcommand("integrate", "fixed-step trajectory to CSV");
  add_common_flags(integrate, c, true);
  auto* poincare_cmd = app.add_subcommand("poincare", "planar section points to CSV");
  add_common_flags(poincare_cmd, c, true);
  poincare_cmd->add_option("--axis", c.axis, "section coordinate (1-based)");
  poincare_cmd->add_option("--level", c.level, "section level");
  poincare_cmd->add_option("--direction", c.direction, "+1|-1|both");
  auto* verify = app.add_subcommand("verify", "volume, exactness, and integral checks");
  add_common_flags(verify, c, true);
  verify->add_option("--samples", c.samples, "number of sample points");
  verify->add_option("--delta", c.delta, "finite-difference perturbation");
  auto* order = app.add_subcommand("order", "Richardson convergence study");
  add_common_flags(order, c, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  try {
    if (decompose->parsed()) return cmd_decompose(c);
    if (integrate->parsed()) return cmd_integrate(c);
    if (poincare_cmd->parsed()) return cmd_poincare(c);
    if (verify->parsed()) return cmd_verify(c);
    if (order->parsed()) return cmd_order(c);
  } catch (const UsageError& e) {
    std::cerr << "vps: " << e.what() << "\n";
    return 3;
  } catch (const NotDivergenceFreeError& e) {
    std::cerr << "vps: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "vps: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "vps: " << e.what() << "\n";
    return 1;
  }
  return 3;
}

}  // namespace vps
