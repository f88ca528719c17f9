#include "phyloci/ci_builder.hpp"

#include <algorithm>

namespace phyloci {

Vector EquationSystem::coords_of(const Tensor& p) const {
  bool identity = true;
  for (size_t i = 0; i < slot_of_new.size(); ++i)
    if (slot_of_new[i] != static_cast<int>(i) + 1) identity = false;
  const Tensor arranged = identity ? p : permute_slots(p, slot_of_new);
  switch (coord_kind) {
    case ClawCoordKind::Standard:
      return arranged.data;
    case ClawCoordKind::Fourier:
      return fourier_coords(arranged).data;
    case ClawCoordKind::SplitQ:
      return basis->to_q(arranged);
  }
  throw std::logic_error("bad coordinate kind");
}

int EquationSystem::count(const std::string& provenance) const {
  int c = 0;
  for (const auto& eq : equations)
    if (eq.provenance == provenance) ++c;
  return c;
}

long codimension(const ModelSpec& model, const Tree& tree) {
  return ambient_dimension(model, tree) - cone_dimension(model, tree);
}

long cone_dimension(const ModelSpec& model, const Tree& tree) {
  const long m12 = m1_of(model.group, 2);
  const long m11 = m1_of(model.group, 1);
  const long e = static_cast<long>(tree.edges().size());
  return e * (m12 - m11) + m11;
}

long ambient_dimension(const ModelSpec& model, const Tree& tree) {
  return m1_of(model.group, tree.n);
}

MinorEquation extend_equation(const MinorEquation& eq, const Matrix& bridge) {
  return eq.composed_with(bridge);
}

namespace {

Tensor marginalize_first(Tensor t, int times) {
  for (int i = 0; i < times; ++i) t = marginalize(t, 1);
  return t;
}

Tensor marginalize_last(Tensor t, int times) {
  for (int i = 0; i < times; ++i) t = marginalize(t, t.n);
  return t;
}

std::vector<int> identity_slots(int n) {
  std::vector<int> s(n);
  for (int i = 0; i < n; ++i) s[i] = i + 1;
  return s;
}

EquationSystem build_ci_impl(const std::shared_ptr<const ModelSpec>& model, const Tree& tree) {
  EquationSystem sys;
  sys.model = model;
  sys.n = tree.n;

  if (tree.is_claw()) {
    const ClawEquationSet& cs = claw_set(*model, tree.n);
    sys.coord_kind = cs.coords;
    sys.basis = cs.claw_basis;
    sys.coord_dim = cs.coord_dim;
    sys.slot_of_new = identity_slots(tree.n);
    for (const auto& eq : cs.equations) {
      MinorEquation e = eq;
      e.provenance = "clawA";
      sys.equations.push_back(std::move(e));
    }
    sys.counts.push_back({tree.n, static_cast<int>(sys.equations.size()), 0, 0});
    return sys;
  }

  const PeelStep step = peel_schedule(tree).front();
  const int n = tree.n;
  const int a = static_cast<int>(step.split.A.size());
  const int b = static_cast<int>(step.split.B.size());

  auto basis = std::make_shared<SplitBasis>(build_split_basis(*model, n, contiguous_split(n, a)));
  const int dim = basis->dimension();

  sys.coord_kind = ClawCoordKind::SplitQ;
  sys.basis = basis;
  sys.coord_dim = dim;
  sys.slot_of_new.assign(n, 0);
  for (int label = 1; label <= n; ++label) sys.slot_of_new[step.new_label[label] - 1] = label;

  // eq_A: the recursively built system of the reduced tree, bridged through
  // marginalization of B \ {beta} (the trailing b-1 slots).
  const EquationSystem sub = build_ci_impl(model, step.reduced);
  Matrix bridge_a(sub.coord_dim, dim);
  for (int i = 0; i < dim; ++i)
    bridge_a.col(i) = sub.coords_of(marginalize_last(basis->entries[i], b - 1));
  const std::string tag = "n" + std::to_string(n) + ":";
  for (const auto& eq : sub.equations) {
    MinorEquation e = extend_equation(eq, bridge_a);
    sys.equations.push_back(std::move(e));
  }

  // eq_B: the claw set of the cherry, bridged through marginalization of
  // A \ {alpha} (the leading a-1 slots).
  const ClawEquationSet& cb = claw_set(*model, b + 1);
  Matrix bridge_b(cb.coord_dim, dim);
  for (int i = 0; i < dim; ++i)
    bridge_b.col(i) = cb.coords_of(marginalize_first(basis->entries[i], a - 1));
  for (const auto& eq : cb.equations) {
    MinorEquation e = extend_equation(eq, bridge_b);
    e.provenance = "clawB";
    e.id = tag + "clawB:" + eq.id;
    sys.equations.push_back(std::move(e));
  }

  // eq_{A|B}: the distinguished edge-invariant minors of this split.
  for (auto& eq : edge_invariant_set(*basis)) {
    eq.id = tag + eq.id;
    sys.equations.push_back(std::move(eq));
  }

  sys.counts.push_back({n, 0, static_cast<int>(cb.equations.size()),
                        static_cast<int>(edge_invariant_count(*model, a, b))});
  for (const auto& lc : sub.counts) sys.counts.push_back(lc);
  return sys;
}

}  // namespace

EquationSystem build_ci(const ModelSpec& model, const Tree& tree) {
  std::string missing;
  std::vector<int> seen;
  for (int d : interior_degrees(tree)) {
    if (!claw_set_available(model, d) &&
        std::find(seen.begin(), seen.end(), d) == seen.end()) {
      missing += (missing.empty() ? "" : ", ") + ("(" + model.name + ", " + std::to_string(d) + ")");
      seen.push_back(d);
    }
  }
  if (!missing.empty())
    throw std::runtime_error("claw equations unavailable for " + missing);

  auto shared = std::make_shared<ModelSpec>(model);
  EquationSystem sys = build_ci_impl(shared, tree);
  const long expected = codimension(model, tree);
  if (static_cast<long>(sys.equations.size()) != expected)
    throw std::runtime_error("equation count " + std::to_string(sys.equations.size()) +
                             " does not match codimension " + std::to_string(expected));
  return sys;
}

}  // namespace phyloci
