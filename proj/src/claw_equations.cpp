#include "phyloci/claw_equations.hpp"

#include <algorithm>
#include <map>

namespace phyloci {

namespace {

const char* kLetters = "ACGT";

int fourier_parity(int x, int y, int z) {
  // number of C,G-bar letters mod 2
  auto odd = [](int v) { return v == 1 || v == 2; };
  return (odd(x) + odd(y) + odd(z)) % 2;
}

}  // namespace

StrassenLayout::RowId StrassenLayout::row(int idx) const {
  const int pairs = kappa * (kappa - 1) / 2;
  const int s = idx / pairs;
  int p = idx % pairs;
  for (int r = 0; r < kappa; ++r)
    for (int t = r + 1; t < kappa; ++t)
      if (p-- == 0) return {s, r, t};
  throw std::invalid_argument("row index out of range");
}

StrassenLayout::ColId StrassenLayout::col(int idx) const { return {idx / kappa, idx % kappa}; }

int StrassenLayout::row_index(int s, int r, int t) const {
  if (r > t) std::swap(r, t);
  const int pairs = kappa * (kappa - 1) / 2;
  int p = 0;
  for (int rr = 0; rr < kappa; ++rr)
    for (int tt = rr + 1; tt < kappa; ++tt) {
      if (rr == r && tt == t) return s * pairs + p;
      ++p;
    }
  throw std::invalid_argument("bad row pair");
}

bool StrassenLayout::row_distinguished(int idx) const {
  const RowId rid = row(idx);
  return rid.s == rid.r || rid.s == rid.t;
}

bool StrassenLayout::col_distinguished(int idx) const {
  const ColId cid = col(idx);
  return cid.i != cid.j;
}

LinearForm StrassenLayout::entry(int row_idx, int col_idx) const {
  const RowId rid = row(row_idx);
  const ColId cid = col(col_idx);
  LinearForm f;
  if (cid.j == rid.r) {
    f.terms.push_back({(cid.i * kappa + rid.s) * kappa + rid.t, Complex(-1.0, 0.0)});
  } else if (cid.j == rid.t) {
    f.terms.push_back({(cid.i * kappa + rid.s) * kappa + rid.r, Complex(1.0, 0.0)});
  }
  return f;
}

StrassenLayout strassen_matrix_layout(int kappa) {
  StrassenLayout l;
  l.kappa = kappa;
  return l;
}

Vector ClawEquationSet::coords_of(const Tensor& p) const {
  switch (coords) {
    case ClawCoordKind::Standard:
      return p.data;
    case ClawCoordKind::Fourier:
      return fourier_coords(p).data;
    case ClawCoordKind::SplitQ:
      return claw_basis->to_q(p);
  }
  throw std::logic_error("bad coordinate kind");
}

namespace {

// Builds an order-13 minor of the Strassen layout from explicit row/column
// selections.  With the parity filter on, cells whose coordinate has an odd
// number of C,G-bar letters are structural zeros (the SSM form).
MinorEquation strassen_minor_from(const StrassenLayout& layout, std::vector<int> rows,
                                  std::vector<int> cols, bool parity_filter,
                                  const std::string& id) {
  MinorEquation eq;
  eq.id = id;
  eq.provenance = "claw";
  eq.matrix_ref = parity_filter ? "ssm" : "strassen";
  eq.rows = std::move(rows);
  eq.cols = std::move(cols);
  eq.size = static_cast<int>(eq.rows.size());
  eq.entries.assign(eq.size, std::vector<LinearForm>(eq.size));
  for (int r = 0; r < eq.size; ++r) {
    for (int c = 0; c < eq.size; ++c) {
      LinearForm f = layout.entry(eq.rows[r], eq.cols[c]);
      if (parity_filter && !f.terms.empty()) {
        const int idx = f.terms[0].first;
        const int x = idx / 16, y = (idx / 4) % 4, z = idx % 4;
        if (fourier_parity(x, y, z) != 0) f = LinearForm{};
      }
      eq.entries[r][c] = std::move(f);
    }
  }
  return eq;
}

// All distinguished rows/columns plus one extra row and column.
MinorEquation strassen_minor(const StrassenLayout& layout, int extra_row, int extra_col,
                             bool parity_filter, const std::string& id) {
  std::vector<int> rows, cols;
  for (int r = 0; r < layout.num_rows(); ++r)
    if (layout.row_distinguished(r) || r == extra_row) rows.push_back(r);
  for (int c = 0; c < layout.num_cols(); ++c)
    if (layout.col_distinguished(c) || c == extra_col) cols.push_back(c);
  return strassen_minor_from(layout, std::move(rows), std::move(cols), parity_filter, id);
}

}  // namespace

ClawEquationSet gmm_tripod_equations() {
  const StrassenLayout layout = strassen_matrix_layout(4);
  ClawEquationSet set;
  set.model_name = "GMM";
  set.degree = 3;
  set.coords = ClawCoordKind::Standard;
  set.coord_dim = 64;
  set.codim = 24;
  for (int r = 0; r < 4; ++r) {
    for (int s = 0; s < 4; ++s) {
      if (s == r) continue;
      for (int t = 0; t < 4; ++t) {
        if (t == r || t == s) continue;
        const std::string id = std::string("gmm:eq_") + kLetters[r] + kLetters[s] + kLetters[t];
        set.equations.push_back(strassen_minor(layout, layout.row_index(s, r, t),
                                               layout.col_index(r, r), false, id));
      }
    }
  }
  return set;
}

// The SSM is block-diagonal under the parity grading that counts C,G-bar
// letters: entries connect rows and columns of equal parity only.  An
// order-13 minor is therefore a nonzero polynomial only when it selects
// seven rows and seven columns of one parity and six of the other; a minor
// holding all twelve distinguished rows and columns splits 7|5 and is
// identically zero.  The twelve selections below combine a varying
// seven-by-seven block of one parity with a fixed nonsingular companion
// block of the other; their reduced Jacobian attains rank 12 = codim at
// generic points of no evolution (exercised by the acceptance suite).
ClawEquationSet ss_tripod_equations() {
  const StrassenLayout layout = strassen_matrix_layout(4);
  ClawEquationSet set;
  set.model_name = "SS";
  set.degree = 3;
  set.coords = ClawCoordKind::Fourier;
  set.coord_dim = 64;
  set.codim = 12;
  static const int kSelections[12][2][13] = {
      {{0, 1, 2, 3, 4, 5, 6, 7, 8, 10, 11, 12, 14}, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12}},
      {{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 11, 13, 14}, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 13}},
      {{0, 1, 2, 3, 4, 5, 6, 7, 8, 10, 11, 12, 14}, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 15}},
      {{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 11, 13, 14}, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 14}},
      {{0, 1, 2, 3, 4, 5, 6, 7, 8, 10, 11, 12, 14}, {0, 1, 2, 3, 4, 5, 7, 8, 9, 10, 11, 12, 15}},
      {{0, 1, 2, 3, 4, 5, 6, 7, 8, 10, 11, 12, 14}, {0, 1, 2, 3, 4, 6, 7, 8, 9, 10, 11, 12, 15}},
      {{0, 1, 2, 3, 4, 5, 6, 7, 8, 10, 11, 12, 14}, {0, 1, 2, 4, 5, 6, 7, 8, 9, 10, 11, 12, 15}},
      {{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 11, 13, 18}, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 13}},
      {{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 11, 13, 18}, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 14}},
      {{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 11, 13, 18}, {0, 1, 2, 3, 4, 5, 6, 8, 9, 10, 11, 13, 14}},
      {{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 11, 13, 18}, {0, 1, 2, 3, 5, 6, 7, 8, 9, 10, 11, 13, 14}},
      {{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 11, 13, 18}, {0, 1, 3, 4, 5, 6, 7, 8, 9, 10, 11, 13, 14}},
  };
  for (int m = 0; m < 12; ++m) {
    std::vector<int> rows(kSelections[m][0], kSelections[m][0] + 13);
    std::vector<int> cols(kSelections[m][1], kSelections[m][1] + 13);
    set.equations.push_back(strassen_minor_from(layout, std::move(rows), std::move(cols), true,
                                                "ssm:minor" + std::to_string(m + 1)));
  }
  return set;
}

/// The six nondistinguished rows of the SSM carrying nonzero entries in the
/// nondistinguished (diagonal) columns: exactly those whose letter triple
/// contains an even number of C,G-bar.
std::vector<int> ssm_qualifying_rows() {
  const StrassenLayout layout = strassen_matrix_layout(4);
  std::vector<int> out;
  for (int idx = 0; idx < layout.num_rows(); ++idx) {
    if (layout.row_distinguished(idx)) continue;
    const auto rid = layout.row(idx);
    if (fourier_parity(rid.s, rid.r, rid.t) == 0) out.push_back(idx);
  }
  return out;
}

ClawEquationSet jc_tripod_equation() {
  const ModelSpec jc = builtin_model("JC");
  ClawEquationSet set;
  set.model_name = "JC";
  set.degree = 3;
  set.coords = ClawCoordKind::SplitQ;
  set.claw_basis =
      std::make_shared<SplitBasis>(build_split_basis(jc, 3, contiguous_split(3, 1)));
  set.coord_dim = set.claw_basis->dimension();
  set.codim = 1;

  // q-coordinate order: (k=1: (1,1),(1,2)), (k=4: (1,1),(1,2),(1,3))
  const int q1_11 = set.claw_basis->index_of(0, 1, 1);
  const int q1_12 = set.claw_basis->index_of(0, 1, 2);
  const int q4_11 = set.claw_basis->index_of(3, 1, 1);
  const int q4_12 = set.claw_basis->index_of(3, 1, 2);
  const int q4_13 = set.claw_basis->index_of(3, 1, 3);

  // det [[q4_11, 0, q1_11], [0, q4_13, q4_12], [q4_13, -q1_12, 0]]
  //   = q4_11 q4_12 q1_12 - q1_11 (q4_13)^2
  MinorEquation eq;
  eq.id = "jc:tripod_cubic";
  eq.provenance = "claw";
  eq.matrix_ref = "jc_tripod";
  eq.rows = {0, 1, 2};
  eq.cols = {0, 1, 2};
  eq.size = 3;
  eq.entries.assign(3, std::vector<LinearForm>(3));
  eq.entries[0][0] = LinearForm::coordinate(q4_11);
  eq.entries[0][2] = LinearForm::coordinate(q1_11);
  eq.entries[1][1] = LinearForm::coordinate(q4_13);
  eq.entries[1][2] = LinearForm::coordinate(q4_12);
  eq.entries[2][0] = LinearForm::coordinate(q4_13);
  eq.entries[2][1] = LinearForm::coordinate(q1_12, Complex(-1.0, 0.0));
  set.equations.push_back(std::move(eq));
  return set;
}

bool claw_set_available(const ModelSpec& model, int d) {
  if (d != 3) return false;
  return model.kind == BuiltinModel::GMM || model.kind == BuiltinModel::SS ||
         model.kind == BuiltinModel::JC;
}

const ClawEquationSet& claw_set(const ModelSpec& model, int d) {
  static std::map<std::string, ClawEquationSet> registry = [] {
    std::map<std::string, ClawEquationSet> r;
    r["GMM:3"] = gmm_tripod_equations();
    r["SS:3"] = ss_tripod_equations();
    r["JC:3"] = jc_tripod_equation();
    return r;
  }();
  const std::string key = model.name + ":" + std::to_string(d);
  auto it = registry.find(key);
  if (it == registry.end() || !claw_set_available(model, d))
    throw std::runtime_error("claw equations unavailable for (" + model.name + ", " +
                             std::to_string(d) + ")");
  return it->second;
}

}  // namespace phyloci
