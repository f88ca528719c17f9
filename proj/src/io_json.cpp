#include "phyloci/io_json.hpp"

#include <fstream>

namespace phyloci {

namespace {

Json complex_to_json(const Complex& c) { return Json::array({c.real(), c.imag()}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  return Complex(j.at(0).get<double>(), j.at(1).get<double>());
}

}  // namespace

Json tensor_to_json(const Tensor& t, const std::string& basis) {
  Json data = Json::array();
  for (long i = 0; i < t.size(); ++i) data.push_back(complex_to_json(t.data(i)));
  return Json{{"kappa", t.kappa}, {"n", t.n}, {"basis", basis}, {"data", data}};
}

Tensor tensor_from_json(const Json& j) {
  Tensor t = Tensor::zeros(j.at("kappa").get<int>(), j.at("n").get<int>());
  const Json& data = j.at("data");
  if (static_cast<long>(data.size()) != t.size())
    throw std::runtime_error("tensor data length mismatch");
  for (long i = 0; i < t.size(); ++i) t.data(i) = complex_from_json(data.at(i));
  if (j.value("basis", "standard") == "fourier") t = from_fourier(t);
  return t;
}

Json parameters_to_json(const Parameters& p, const Tree& tree) {
  Json pi = Json::array();
  for (int i = 0; i < p.pi_coeffs.size(); ++i) pi.push_back(complex_to_json(p.pi_coeffs(i)));
  Json edges = Json::array();
  const auto canon = canonical_edges(tree);
  for (size_t e = 0; e < p.edge_coeffs.size(); ++e) {
    Json coeffs = Json::array();
    for (int i = 0; i < p.edge_coeffs[e].size(); ++i)
      coeffs.push_back(complex_to_json(p.edge_coeffs[e](i)));
    edges.push_back(Json{{"edge", Json::array({canon[e].first, canon[e].second})},
                         {"coeffs", coeffs}});
  }
  return Json{{"pi", pi}, {"edges", edges}, {"stochastic", p.stochastic}};
}

Parameters parameters_from_json(const Json& j) {
  Parameters p;
  const Json& pi = j.at("pi");
  p.pi_coeffs.resize(static_cast<int>(pi.size()));
  for (size_t i = 0; i < pi.size(); ++i) p.pi_coeffs(static_cast<int>(i)) = complex_from_json(pi.at(i));
  for (const auto& edge : j.at("edges")) {
    const Json& coeffs = edge.at("coeffs");
    Vector c(static_cast<int>(coeffs.size()));
    for (size_t i = 0; i < coeffs.size(); ++i) c(static_cast<int>(i)) = complex_from_json(coeffs.at(i));
    p.edge_coeffs.push_back(c);
  }
  p.stochastic = j.value("stochastic", false);
  return p;
}

Json equations_to_json(const std::vector<MinorEquation>& eqs) {
  Json out = Json::array();
  for (const auto& eq : eqs) {
    Json coeff_map = Json::array();
    for (int r = 0; r < eq.size; ++r) {
      for (int c = 0; c < eq.size; ++c) {
        for (const auto& [idx, coeff] : eq.entries[r][c].terms) {
          if (std::abs(coeff.imag()) > 1e-12)
            throw std::runtime_error("unexpected complex equation coefficient");
          coeff_map.push_back(Json{{"row", r}, {"col", c}, {"coord_index", idx},
                                   {"sign", coeff.real()}});
        }
      }
    }
    out.push_back(Json{{"id", eq.id},
                       {"provenance", eq.provenance},
                       {"matrix", eq.matrix_ref},
                       {"rows", eq.rows},
                       {"cols", eq.cols},
                       {"coeff_map", coeff_map}});
  }
  return out;
}

Json system_to_json(const EquationSystem& sys) {
  Json counts = Json::array();
  for (const auto& lc : sys.counts)
    counts.push_back(Json{{"n_leaves", lc.n_leaves},
                          {"clawA", lc.claw_a},
                          {"clawB", lc.claw_b},
                          {"edge", lc.edge}});
  const char* kind = sys.coord_kind == ClawCoordKind::Standard  ? "standard"
                     : sys.coord_kind == ClawCoordKind::Fourier ? "fourier"
                                                                 : "splitq";
  return Json{{"model", sys.model->name},
              {"n", sys.n},
              {"coordinate_space", kind},
              {"coord_dim", sys.coord_dim},
              {"leaf_order", sys.slot_of_new},
              {"counts", counts},
              {"equations", equations_to_json(sys.equations)}};
}

Json basis_dump_to_json(const SplitBasis& basis) {
  Json out = Json::array();
  for (const auto& blk : basis.blocks) {
    for (int i = 1; i <= blk.rows; ++i) {
      for (int j = 1; j <= blk.cols; ++j) {
        const Tensor& t = basis.entries[basis.index_of(blk.k, i, j)];
        Json data = Json::array();
        for (long x = 0; x < t.size(); ++x) data.push_back(complex_to_json(t.data(x)));
        out.push_back(Json{{"k", blk.k + 1}, {"i", i}, {"j", j}, {"tensor", data}});
      }
    }
  }
  return out;
}

Json report_to_json(const VerifyReport& r) {
  // runtime_ms stays in-memory only: serialized output is byte-reproducible
  return Json{{"check", r.check}, {"expected", r.expected}, {"observed", r.observed},
              {"tol", r.tol},     {"pass", r.pass},         {"seeds", r.seeds}};
}

ModelSpec model_from_json(const Json& j) {
  const int kappa = j.at("kappa").get<int>();
  std::vector<Permutation> gens;
  for (const auto& g : j.at("generators")) {
    Permutation p;
    for (const auto& v : g) p.images.push_back(v.get<int>());
    gens.push_back(p);
  }
  ModelSpec m;
  m.name = j.value("name", "custom");
  m.kind = BuiltinModel::Custom;
  m.group = enumerate_group(gens, kappa);
  if (!m.group.has_char_table && j.contains("char_table")) {
    const Json& table = j.at("char_table");
    const int t = static_cast<int>(table.size());
    const int nc = static_cast<int>(m.group.classes.size());
    m.group.char_table.resize(t, nc);
    for (int k = 0; k < t; ++k) {
      if (static_cast<int>(table.at(k).size()) != nc)
        throw std::runtime_error("char_table column count must match class count");
      for (int c = 0; c < nc; ++c) m.group.char_table(k, c) = complex_from_json(table.at(k).at(c));
    }
    m.group.has_char_table = true;
    m.group.irrep_dims.resize(t);
    for (int k = 0; k < t; ++k)
      m.group.irrep_dims[k] = static_cast<int>(std::lround(m.group.char_table(k, 0).real()));
    m.group.dual_index.assign(t, -1);
    for (int k = 0; k < t; ++k)
      for (int k2 = 0; k2 < t; ++k2) {
        bool match = true;
        for (int c = 0; c < nc && match; ++c)
          if (std::abs(m.group.char_table(k2, c) - std::conj(m.group.char_table(k, c))) > 1e-9)
            match = false;
        if (match) {
          m.group.dual_index[k] = k2;
          break;
        }
      }
  }
  if (j.contains("irrep_matrices")) {
    for (const auto& irrep : j.at("irrep_matrices")) {
      std::vector<Matrix> mats;
      for (const auto& mat : irrep) {
        const int nk = static_cast<int>(mat.size());
        Matrix m2(nk, nk);
        for (int r = 0; r < nk; ++r)
          for (int c = 0; c < nk; ++c) m2(r, c) = complex_from_json(mat.at(r).at(c));
        mats.push_back(m2);
      }
      m.irrep_matrices.push_back(mats);
    }
  }
  return m;
}

ModelSpec model_from_arg(const std::string& arg) {
  if (arg.empty()) throw std::invalid_argument("empty model argument");
  if (arg[0] == '{') return model_from_json(Json::parse(arg));
  if (arg[0] == '@') {
    std::ifstream in(arg.substr(1));
    if (!in) throw std::runtime_error("cannot open model file " + arg.substr(1));
    Json j;
    in >> j;
    return model_from_json(j);
  }
  return builtin_model(arg);
}

}  // namespace phyloci
