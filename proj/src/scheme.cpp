#include "vps/scheme.hpp"

#include "vps/errors.hpp"

namespace vps {

ShearField::ShearField(const VectorField& offdiag) : field_(offdiag) {
  for (std::size_t i = 0; i < field_.dim(); ++i)
    if (!field_.component(i).independent_of(i))
      throw DomainError("shear component " + std::to_string(i + 1) +
                        " depends on its own variable");
}

std::vector<Shear> ShearField::shears() const {
  std::vector<Shear> out;
  for (std::size_t i = 0; i < field_.dim(); ++i)
    if (!field_.component(i).is_zero()) out.push_back(Shear{i, field_.component(i)});
  return out;
}

std::vector<double> shear_flow(const Shear& s, std::span<const double> x0, double h) {
  std::vector<double> x(x0.begin(), x0.end());
  x[s.axis] += h * s.g.evaluate(x0);
  return x;
}

std::vector<double> apply_flow(const FlowMap& flow, std::span<const double> x0, double h) {
  if (const auto* e = std::get_if<Edfvf>(&flow)) return e->flow(x0, h);
  return shear_flow(std::get<Shear>(flow), x0, h);
}

VectorField flow_generator(const FlowMap& flow) {
  if (const auto* e = std::get_if<Edfvf>(&flow)) return e->as_vector_field();
  const auto& s = std::get<Shear>(flow);
  std::vector<SparsePolynomial> comps(s.g.dim(), SparsePolynomial(s.g.dim()));
  comps[s.axis] = s.g;
  return VectorField(std::move(comps));
}

SplitScheme::SplitScheme(std::vector<FlowMap> flows, int order)
    : flows_(std::move(flows)), order_(order) {
  if (order_ != 1 && order_ != 2) throw DomainError("composition order must be 1 or 2");
}

std::vector<double> SplitScheme::step_once(std::span<const double> x0, double h) const {
  std::vector<double> x(x0.begin(), x0.end());
  if (order_ == 1) {
    for (const auto& flow : flows_) x = apply_flow(flow, x, h);
    return x;
  }
  const double half = 0.5 * h;
  for (const auto& flow : flows_) x = apply_flow(flow, x, half);
  for (auto it = flows_.rbegin(); it != flows_.rend(); ++it) x = apply_flow(*it, x, half);
  return x;
}

std::vector<double> SplitScheme::step(std::span<const double> x0, double h,
                                      const StepOptions& opts) const {
  if (!opts.substep_on_singular) return step_once(x0, h);
  // Recursive halving when the singular guard trips mid-composition.
  struct Recur {
    const SplitScheme& s;
    int max_depth;
    std::vector<double> operator()(std::span<const double> x, double step_h, int depth) const {
      try {
        return s.step_once(x, step_h);
      } catch (const SingularStepError&) {
        if (depth >= max_depth) throw;
        const auto mid = (*this)(x, 0.5 * step_h, depth + 1);
        return (*this)(mid, 0.5 * step_h, depth + 1);
      }
    }
  };
  return Recur{*this, opts.max_substep_depth}(x0, h, 0);
}

SplitScheme build_scheme(const VectorField& f, int order) {
  const auto split = diag_offdiag_split(f);
  std::vector<FlowMap> flows;
  for (auto& e : decompose_diagonal(split.diag)) flows.emplace_back(std::move(e));
  for (auto& s : ShearField(split.offdiag).shears()) flows.emplace_back(std::move(s));
  return SplitScheme(std::move(flows), order);
}

}  // namespace vps
