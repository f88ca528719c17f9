#include "phyloci/perm_rep.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace phyloci {

namespace {

constexpr int kA = 0, kC = 1, kG = 2, kT = 3;

Permutation perm_of(std::initializer_list<int> xs) {
  Permutation p;
  p.images.assign(xs);
  return p;
}

bool is_bijection(const std::vector<int>& images, int kappa) {
  if (static_cast<int>(images.size()) != kappa) return false;
  std::vector<bool> seen(kappa, false);
  for (int v : images) {
    if (v < 0 || v >= kappa || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

}  // namespace

Permutation Permutation::identity(int kappa) {
  Permutation p;
  p.images.resize(kappa);
  std::iota(p.images.begin(), p.images.end(), 0);
  return p;
}

Permutation Permutation::compose(const Permutation& other) const {
  Permutation r;
  r.images.resize(images.size());
  for (size_t i = 0; i < images.size(); ++i) r.images[i] = images[other.images[i]];
  return r;
}

Permutation Permutation::inverse() const {
  Permutation r;
  r.images.resize(images.size());
  for (size_t i = 0; i < images.size(); ++i) r.images[images[i]] = static_cast<int>(i);
  return r;
}

int Permutation::fixed_points() const {
  int f = 0;
  for (size_t i = 0; i < images.size(); ++i)
    if (images[i] == static_cast<int>(i)) ++f;
  return f;
}

int Permutation::order() const {
  Permutation cur = *this;
  const Permutation id = identity(degree());
  int ord = 1;
  while (!(cur == id)) {
    cur = cur.compose(*this);
    ++ord;
    if (ord > 1000) throw std::runtime_error("permutation order overflow");
  }
  return ord;
}

std::vector<int> Permutation::cycle_type() const {
  std::vector<bool> seen(images.size(), false);
  std::vector<int> lens;
  for (size_t i = 0; i < images.size(); ++i) {
    if (seen[i]) continue;
    int len = 0;
    size_t j = i;
    while (!seen[j]) {
      seen[j] = true;
      j = images[j];
      ++len;
    }
    lens.push_back(len);
  }
  std::sort(lens.begin(), lens.end());
  return lens;
}

int PermGroup::element_index(const Permutation& p) const {
  auto it = std::lower_bound(elements.begin(), elements.end(), p);
  if (it == elements.end() || !(*it == p)) throw std::runtime_error("element not in group");
  return static_cast<int>(it - elements.begin());
}

Complex PermGroup::character(int k, int elem) const {
  return char_table(k, class_of[elem]);
}

std::vector<int> PermGroup::class_fixed_points() const {
  std::vector<int> fp;
  fp.reserve(classes.size());
  for (const auto& c : classes) fp.push_back(elements[c.front()].fixed_points());
  return fp;
}

std::vector<int> tensor_index_permutation(const Permutation& g, int s) {
  const int kappa = g.degree();
  const int total = ipow(kappa, s);
  std::vector<int> perm(total);
  std::vector<int> digits(s);
  for (int idx = 0; idx < total; ++idx) {
    int rest = idx, out = 0;
    for (int pos = s - 1; pos >= 0; --pos) {
      digits[pos] = rest % kappa;
      rest /= kappa;
    }
    for (int pos = 0; pos < s; ++pos) out = out * kappa + g(digits[pos]);
    perm[idx] = out;
  }
  return perm;
}

// ---------------------------------------------------------------------------
// Group enumeration and built-in registry
// ---------------------------------------------------------------------------

namespace {

std::vector<Permutation> closure(const std::vector<Permutation>& gens, int kappa) {
  std::set<std::vector<int>> seen;
  std::vector<Permutation> frontier{Permutation::identity(kappa)};
  seen.insert(frontier.front().images);
  while (!frontier.empty()) {
    std::vector<Permutation> next;
    for (const auto& p : frontier) {
      for (const auto& g : gens) {
        Permutation q = g.compose(p);
        if (seen.insert(q.images).second) next.push_back(q);
        if (seen.size() > 100000) throw std::runtime_error("group closure too large");
      }
    }
    frontier = std::move(next);
  }
  std::vector<Permutation> out;
  out.reserve(seen.size());
  for (const auto& im : seen) out.push_back(Permutation{im});
  std::sort(out.begin(), out.end());
  return out;
}

void compute_classes(PermGroup& g) {
  const int n = g.order();
  g.class_of.assign(n, -1);
  g.classes.clear();
  for (int i = 0; i < n; ++i) {
    if (g.class_of[i] >= 0) continue;
    std::set<int> cls;
    for (int j = 0; j < n; ++j) {
      Permutation conj = g.elements[j].compose(g.elements[i]).compose(g.elements[j].inverse());
      cls.insert(g.element_index(conj));
    }
    const int ci = static_cast<int>(g.classes.size());
    g.classes.emplace_back(cls.begin(), cls.end());
    for (int e : cls) g.class_of[e] = ci;
  }
  // order classes by least element; identity (element 0) comes first
  std::vector<int> order(g.classes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return g.classes[a].front() < g.classes[b].front(); });
  std::vector<std::vector<int>> sorted;
  for (int ci : order) sorted.push_back(g.classes[ci]);
  g.classes = std::move(sorted);
  for (size_t ci = 0; ci < g.classes.size(); ++ci)
    for (int e : g.classes[ci]) g.class_of[e] = static_cast<int>(ci);
}

struct BuiltinDef {
  const char* name;
  BuiltinModel kind;
  std::vector<Permutation> generators;
};

const std::vector<BuiltinDef>& builtin_defs() {
  static const std::vector<BuiltinDef> defs = {
      {"GMM", BuiltinModel::GMM, {}},
      {"JC", BuiltinModel::JC, {perm_of({kC, kA, kG, kT}), perm_of({kC, kG, kT, kA})}},
      {"K2", BuiltinModel::K2, {perm_of({kC, kG, kT, kA}), perm_of({kG, kC, kA, kT})}},
      {"K3", BuiltinModel::K3, {perm_of({kC, kA, kT, kG}), perm_of({kG, kT, kA, kC})}},
      {"SS", BuiltinModel::SS, {perm_of({kT, kG, kC, kA})}},
  };
  return defs;
}

// Per-element character values for the built-in groups.  Irrep row order is
// fixed so that row 0 is trivial and the irreps appearing in W come first
// where the usual conventions expect them.
std::vector<Complex> builtin_char_values(BuiltinModel kind, const Permutation& g) {
  switch (kind) {
    case BuiltinModel::GMM:
      return {1.0};
    case BuiltinModel::SS:
      return {1.0, g.fixed_points() == 4 ? 1.0 : -1.0};
    case BuiltinModel::K3: {
      // chi rows indexed by the Fourier eigenvectors A,C,G,T-bar
      if (g.fixed_points() == 4) return {1, 1, 1, 1};
      if (g.images == std::vector<int>{kC, kA, kT, kG}) return {1, 1, -1, -1};   // (AC)(GT)
      if (g.images == std::vector<int>{kG, kT, kA, kC}) return {1, -1, 1, -1};   // (AG)(CT)
      return {1, -1, -1, 1};                                                     // (AT)(CG)
    }
    case BuiltinModel::K2: {
      if (g.fixed_points() == 4) return {1, 1, 2, 1, 1};
      if (g.order() == 4) return {1, -1, 0, 1, -1};                      // 4-cycles
      if (g.fixed_points() == 2) return {1, 1, 0, -1, -1};               // (AG),(CT)
      if (g.images == std::vector<int>{kG, kT, kA, kC}) return {1, 1, -2, 1, 1};  // center r^2
      return {1, -1, 0, -1, 1};                                          // (AT)(CG),(AC)(GT)
    }
    case BuiltinModel::JC: {
      const auto ct = g.cycle_type();
      if (ct == std::vector<int>{1, 1, 1, 1}) return {1, 1, 2, 3, 3};
      if (ct == std::vector<int>{1, 1, 2}) return {1, -1, 0, 1, -1};
      if (ct == std::vector<int>{1, 3}) return {1, 1, -1, 0, 0};
      if (ct == std::vector<int>{4}) return {1, -1, 0, -1, 1};
      return {1, 1, 2, -1, -1};  // (2,2)
    }
    default:
      throw std::runtime_error("no built-in characters");
  }
}

void attach_builtin_table(PermGroup& g, BuiltinModel kind) {
  const int t = static_cast<int>(builtin_char_values(kind, g.elements[0]).size());
  const int nc = static_cast<int>(g.classes.size());
  if (t != nc) throw std::runtime_error("class count mismatch for built-in table");
  g.char_table.resize(t, nc);
  for (int c = 0; c < nc; ++c) {
    const auto vals = builtin_char_values(kind, g.elements[g.classes[c].front()]);
    for (int k = 0; k < t; ++k) g.char_table(k, c) = vals[k];
  }
  g.has_char_table = true;
  g.irrep_dims.resize(t);
  for (int k = 0; k < t; ++k)
    g.irrep_dims[k] = static_cast<int>(std::lround(g.char_table(k, 0).real()));
  g.dual_index.assign(t, -1);
  for (int k = 0; k < t; ++k) {
    for (int k2 = 0; k2 < t; ++k2) {
      bool match = true;
      for (int c = 0; c < nc && match; ++c)
        if (std::abs(g.char_table(k2, c) - std::conj(g.char_table(k, c))) > 1e-9) match = false;
      if (match) {
        g.dual_index[k] = k2;
        break;
      }
    }
    if (g.dual_index[k] < 0) throw std::runtime_error("dual character not found");
  }
}

std::optional<BuiltinModel> match_builtin(const PermGroup& g) {
  if (g.order() == 1) return BuiltinModel::GMM;
  if (g.kappa != 4) return std::nullopt;
  for (const auto& def : builtin_defs()) {
    if (def.kind == BuiltinModel::GMM) continue;
    const auto elems = closure(def.generators, 4);
    if (elems == g.elements) return def.kind;
  }
  return std::nullopt;
}

}  // namespace

PermGroup enumerate_group(const std::vector<Permutation>& generators, int kappa) {
  for (const auto& gen : generators) {
    if (!is_bijection(gen.images, kappa))
      throw std::invalid_argument("generator is not a permutation of the state set");
  }
  PermGroup g;
  g.kappa = kappa;
  g.generators = generators;
  g.elements = closure(generators, kappa);
  compute_classes(g);
  if (auto kind = match_builtin(g)) {
    attach_builtin_table(g, *kind);
  } else if (g.order() == 2) {
    // any order-2 group has the canonical table
    g.char_table.resize(2, 2);
    g.char_table << 1, 1, 1, -1;
    g.has_char_table = true;
    g.irrep_dims = {1, 1};
    g.dual_index = {0, 1};
  }
  return g;
}

namespace {
std::vector<std::vector<Matrix>> build_builtin_irreps(const ModelSpec& model);
}

ModelSpec builtin_model(const std::string& name) {
  std::string up;
  for (char ch : name) up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
  for (const auto& def : builtin_defs()) {
    if (up == def.name) {
      ModelSpec m;
      m.name = def.name;
      m.kind = def.kind;
      m.group = enumerate_group(def.generators, 4);
      m.irrep_matrices = build_builtin_irreps(m);
      return m;
    }
  }
  throw std::invalid_argument("unknown model '" + name + "' (expected GMM, JC, K2, K3 or SS)");
}

IntVector multiplicities(const ModelSpec& model, int s) {
  const PermGroup& g = model.group;
  if (!g.has_char_table) throw std::runtime_error("characters unavailable");
  const int t = g.num_irreps();
  const auto fix = g.class_fixed_points();
  IntVector m(t);
  for (int k = 0; k < t; ++k) {
    Complex acc = 0;
    for (size_t c = 0; c < g.classes.size(); ++c) {
      acc += static_cast<double>(g.classes[c].size()) * std::conj(g.char_table(k, c)) *
             std::pow(static_cast<double>(fix[c]), s);
    }
    acc /= static_cast<double>(g.order());
    const double rounded = std::round(acc.real());
    if (std::abs(acc.real() - rounded) > 1e-6 || std::abs(acc.imag()) > 1e-6)
      throw std::runtime_error("non-integer multiplicity: corrupt character table");
    m(k) = static_cast<int>(rounded);
  }
  return m;
}

long m1_of(const PermGroup& group, int s) {
  long double acc = 0;
  for (const auto& e : group.elements) acc += std::pow(static_cast<long double>(e.fixed_points()), s);
  return static_cast<long>(std::llround(acc / group.order()));
}

std::vector<std::vector<int>> state_orbits(const PermGroup& group) {
  std::vector<std::vector<int>> orbits;
  std::vector<bool> seen(group.kappa, false);
  for (int x = 0; x < group.kappa; ++x) {
    if (seen[x]) continue;
    std::set<int> orb;
    for (const auto& g : group.elements) orb.insert(g(x));
    orbits.emplace_back(orb.begin(), orb.end());
    for (int y : orb) seen[y] = true;
  }
  return orbits;
}

std::vector<RealMatrix> equivariant_hom_basis(const ModelSpec& model) {
  const PermGroup& g = model.group;
  const int kappa = g.kappa;
  std::vector<std::vector<std::pair<int, int>>> orbits;
  std::vector<std::vector<bool>> seen(kappa, std::vector<bool>(kappa, false));
  for (int i = 0; i < kappa; ++i) {
    for (int j = 0; j < kappa; ++j) {
      if (seen[i][j]) continue;
      std::set<std::pair<int, int>> orb;
      for (const auto& p : g.elements) orb.insert({p(i), p(j)});
      orbits.emplace_back(orb.begin(), orb.end());
      for (auto [a, b] : orb) seen[a][b] = true;
    }
  }
  // diagonal orbits first, then by least cell
  std::stable_sort(orbits.begin(), orbits.end(), [](const auto& a, const auto& b) {
    const bool da = a.front().first == a.front().second;
    const bool db = b.front().first == b.front().second;
    if (da != db) return da;
    return a.front() < b.front();
  });
  std::vector<RealMatrix> out;
  for (const auto& orb : orbits) {
    RealMatrix m = RealMatrix::Zero(kappa, kappa);
    for (auto [i, j] : orb) m(i, j) = 1.0;
    out.push_back(std::move(m));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Irreducible representation realizations
// ---------------------------------------------------------------------------

namespace {

RealMatrix fourier_matrix() {
  RealMatrix f(4, 4);
  f << 1, 1, 1, 1,
       1, 1, -1, -1,
       1, -1, 1, -1,
       1, -1, -1, 1;
  return f;  // columns A,C,G,T-bar; symmetric; F^2 = 4I
}

Matrix perm_matrix(const Permutation& g) {
  const int kappa = g.degree();
  Matrix p = Matrix::Zero(kappa, kappa);
  for (int i = 0; i < kappa; ++i) p(g(i), i) = 1;
  return p;
}

Matrix tensor_perm_matrix(const Permutation& g, int s) {
  const auto perm = tensor_index_permutation(g, s);
  Matrix p = Matrix::Zero(perm.size(), perm.size());
  for (size_t i = 0; i < perm.size(); ++i) p(perm[i], i) = 1;
  return p;
}

// Orthonormal basis of the image of a projector, chosen deterministically by
// applying it to the standard basis vectors in lexicographic order.
Matrix projector_image_basis(const Matrix& proj, int expected_dim) {
  const int n = static_cast<int>(proj.rows());
  Matrix basis(n, expected_dim);
  int got = 0;
  for (int i = 0; i < n && got < expected_dim; ++i) {
    Vector v = proj.col(i);  // proj * e_i
    for (int j = 0; j < got; ++j) v -= basis.col(j).dot(v) * basis.col(j);
    const double nv = v.norm();
    if (nv > 1e-8) basis.col(got++) = v / nv;
  }
  if (got != expected_dim) throw std::runtime_error("projector image dimension mismatch");
  return basis;
}

std::vector<std::vector<Matrix>> build_builtin_irreps(const ModelSpec& model) {
  const PermGroup& g = model.group;
  const int t = g.num_irreps();
  const int ng = g.order();
  std::vector<std::vector<Matrix>> irr(t);
  const RealMatrix f = fourier_matrix();
  const RealMatrix finv = f / 4.0;

  for (int k = 0; k < t; ++k) {
    irr[k].resize(ng);
    const int nk = g.irrep_dims[k];
    if (nk == 1) {
      for (int e = 0; e < ng; ++e) {
        Matrix m(1, 1);
        m(0, 0) = g.character(k, e);
        irr[k][e] = m;
      }
      continue;
    }
    if (model.kind == BuiltinModel::JC && k == 3) {
      // chi_4 inside W: Fourier complement of the all-ones vector
      for (int e = 0; e < ng; ++e) {
        Matrix m = finv.cast<Complex>() * perm_matrix(g.elements[e]) * f.cast<Complex>();
        irr[k][e] = m.block(1, 1, 3, 3);
      }
    } else if (model.kind == BuiltinModel::K2 && k == 2) {
      // 2-dimensional irrep on <C,T-bar>: Fourier coordinates 1 and 3
      for (int e = 0; e < ng; ++e) {
        Matrix m = finv.cast<Complex>() * perm_matrix(g.elements[e]) * f.cast<Complex>();
        Matrix b(2, 2);
        b << m(1, 1), m(1, 3), m(3, 1), m(3, 3);
        irr[k][e] = b;
      }
    } else if (model.kind == BuiltinModel::JC && (k == 2 || k == 4)) {
      // chi_3, chi_5 appear with multiplicity one in W⊗W; realize inside the
      // isotypic component extracted by the projector (n_k/|G|) sum chi ρ.
      Matrix proj = Matrix::Zero(16, 16);
      for (int e = 0; e < ng; ++e)
        proj += std::conj(g.character(k, e)) * tensor_perm_matrix(g.elements[e], 2);
      proj *= static_cast<double>(nk) / ng;
      const Matrix basis = projector_image_basis(proj, nk);
      for (int e = 0; e < ng; ++e)
        irr[k][e] = basis.adjoint() * tensor_perm_matrix(g.elements[e], 2) * basis;
    } else {
      throw std::runtime_error("no realization rule for this irrep");
    }
  }
  return irr;
}

}  // namespace

const std::vector<Matrix>& irrep_realization(const ModelSpec& model, int k) {
  if (k < 0 || k >= model.group.num_irreps()) throw std::invalid_argument("irrep index out of range");
  if (model.irrep_matrices.empty())
    throw std::runtime_error("realization unavailable: custom model without irrep data");
  return model.irrep_matrices[k];
}

std::vector<Matrix> hom_space(const ModelSpec& model, int k, int s) {
  const PermGroup& g = model.group;
  const int nk = g.irrep_dims[k];
  const int dim = ipow(g.kappa, s);
  const auto& rho_k = irrep_realization(model, k);
  const int unknowns = dim * nk;

  std::vector<Permutation> gens = g.generators;
  if (gens.empty()) gens.push_back(Permutation::identity(g.kappa));

  Matrix constraints(static_cast<int>(gens.size()) * unknowns, unknowns);
  int row0 = 0;
  for (const auto& gen : gens) {
    const Matrix rs = tensor_perm_matrix(gen, s);
    const Matrix rk = rho_k[g.element_index(gen)];
    // vec(rho_s F - F rho_k) = (I ⊗ rho_s - rho_k^T ⊗ I) vec(F), column-major
    Matrix block = Matrix::Zero(unknowns, unknowns);
    for (int j = 0; j < nk; ++j)
      block.block(j * dim, j * dim, dim, dim) = rs;
    for (int j = 0; j < nk; ++j)
      for (int j2 = 0; j2 < nk; ++j2)
        block.block(j * dim, j2 * dim, dim, dim) -= rk(j2, j) * Matrix::Identity(dim, dim);
    constraints.block(row0, 0, unknowns, unknowns) = block;
    row0 += unknowns;
  }

  Eigen::JacobiSVD<Matrix> svd(constraints, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double tol = 1e-10 * (sv.size() ? sv(0) : 1.0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++rank;
  const int null_dim = unknowns - rank;
  if (null_dim == 0) return {};

  const Matrix nullbasis = svd.matrixV().rightCols(null_dim);
  const Matrix proj = nullbasis * nullbasis.adjoint();

  // deterministic basis: project standard basis vectors in lex order
  std::vector<Vector> vecs;
  for (int i = 0; i < unknowns && static_cast<int>(vecs.size()) < null_dim; ++i) {
    Vector v = proj.col(i);
    for (const auto& u : vecs) v -= u.dot(v) * u;
    const double nv = v.norm();
    if (nv > 1e-8) {
      v /= nv;
      // fix phase on the first significant coordinate
      for (int j = 0; j < v.size(); ++j) {
        if (std::abs(v(j)) > 1e-8) {
          v *= std::conj(v(j)) / std::abs(v(j));
          break;
        }
      }
      vecs.push_back(v);
    }
  }
  if (static_cast<int>(vecs.size()) != null_dim)
    throw std::runtime_error("hom_space basis extraction failed");

  std::vector<Matrix> out;
  for (const auto& v : vecs) {
    Matrix f(dim, nk);
    for (int j = 0; j < nk; ++j) f.col(j) = v.segment(j * dim, dim);
    out.push_back(std::move(f));
  }
  return out;
}

int numeric_rank(const Matrix& m, double rel_tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > rel_tol * sv(0)) ++rank;
  return rank;
}

int numeric_rank_equilibrated(const Matrix& m, double rel_tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Matrix scaled = m;
  for (int r = 0; r < scaled.rows(); ++r) {
    const double nr = scaled.row(r).norm();
    if (nr > 0) scaled.row(r) /= nr;
  }
  return numeric_rank(scaled, rel_tol);
}

}  // namespace phyloci
