// Command-line frontend: constructs, evaluates and numerically verifies the
// local complete-intersection equation systems for equivariant phylogenetic
// models. All randomized subcommands take an explicit seed; identical
// invocations produce identical output bytes.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "phyloci/io_json.hpp"

using namespace phyloci;

namespace {

struct GlobalOpts {
  bool json = false;
  int threads = 1;
};

EdgeSplit parse_split(const std::string& text, int n) {
  EdgeSplit s;
  const auto bar = text.find('|');
  if (bar == std::string::npos) throw std::invalid_argument("split must look like \"1,2|3,4\"");
  auto parse_side = [](const std::string& part, std::vector<int>& out) {
    size_t pos = 0;
    while (pos < part.size()) {
      size_t next = part.find(',', pos);
      if (next == std::string::npos) next = part.size();
      out.push_back(std::stoi(part.substr(pos, next - pos)));
      pos = next + 1;
    }
    std::sort(out.begin(), out.end());
  };
  parse_side(text.substr(0, bar), s.A);
  parse_side(text.substr(bar + 1), s.B);
  if (static_cast<int>(s.A.size() + s.B.size()) != n)
    throw std::invalid_argument("split does not cover all leaves");
  s.alpha = s.A.back();
  s.beta = s.B.front();
  return s;
}

void write_or_print(const Json& j, const std::string& path, const GlobalOpts& g) {
  if (!path.empty()) {
    std::ofstream out(path);
    out << j.dump(2) << "\n";
  } else if (g.json) {
    std::cout << j.dump(2) << "\n";
  }
}

Tensor load_tensor(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open tensor file " + path);
  Json j;
  in >> j;
  return tensor_from_json(j);
}

int finish_reports(const std::vector<VerifyReport>& reports, const GlobalOpts& g) {
  bool all_pass = true;
  Json arr = Json::array();
  for (const auto& r : reports) {
    arr.push_back(report_to_json(r));
    all_pass = all_pass && r.pass;
    if (!g.json)
      std::cout << (r.pass ? "PASS " : "FAIL ") << r.check << ": expected " << r.expected
                << ", observed " << r.observed << " (tol " << r.tol << ")\n";
  }
  if (g.json) std::cout << arr.dump(2) << "\n";
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"local complete intersections for equivariant phylogenetic models"};
  app.require_subcommand(1);
  GlobalOpts g;
  app.add_flag("--json", g.json, "emit JSON only");
  app.add_option("--threads", g.threads, "internal parallelism cap (evaluation is sequential; 1 is the reference)")
      ->check(CLI::PositiveNumber);

  std::string model_name, tree_text, split_text, tensor_path, out_path, params_out, dump_basis;
  std::uint64_t seed = 0;
  int trials = 3, points = 20, max_power = 4, degree = 3;
  double tol = 1e-8, rank_tol = 1e-9;
  bool stochastic = false, numeric = false;
  std::vector<std::string> near_identity;

  auto* dims = app.add_subcommand("dims", "dimension/codimension table and numeric check");
  dims->add_option("--model", model_name)->required();
  dims->add_option("--tree", tree_text)->required();
  dims->add_flag("--numeric", numeric, "also compute the numeric Jacobian rank");
  dims->add_option("--trials", trials);
  dims->add_option("--seed", seed);
  dims->add_option("--tol", tol)->default_val(1e-8);

  auto* mult = app.add_subcommand("multiplicities", "isotypic multiplicities m_k(s)");
  mult->add_option("--model", model_name)->required();
  mult->add_option("--max-power", max_power)->default_val(4);

  auto* basis_cmd = app.add_subcommand("basis", "dump the split basis for an edge split");
  basis_cmd->add_option("--model", model_name)->required();
  basis_cmd->add_option("--tree", tree_text)->required();
  basis_cmd->add_option("--split", split_text)->required();
  basis_cmd->add_option("--out", out_path);

  auto* eqs = app.add_subcommand("equations", "build the complete-intersection equation system");
  eqs->add_option("--model", model_name)->required();
  eqs->add_option("--tree", tree_text)->required();
  eqs->add_option("--out", out_path);
  eqs->add_option("--dump-basis", dump_basis);

  auto* sim = app.add_subcommand("simulate", "draw parameters and write the joint tensor");
  sim->add_option("--model", model_name)->required();
  sim->add_option("--tree", tree_text)->required();
  sim->add_option("--seed", seed)->required();
  sim->add_flag("--stochastic", stochastic);
  auto* near_opt = sim->add_option("--near-identity", near_identity,
                                   "blend toward identity matrices (default 0.2)")
                       ->expected(0, 1);
  sim->add_option("--out", out_path);
  sim->add_option("--params-out", params_out);

  auto* eval = app.add_subcommand("eval", "evaluate the equation system on a tensor");
  eval->add_option("--model", model_name)->required();
  eval->add_option("--tree", tree_text)->required();
  eval->add_option("--tensor", tensor_path)->required();
  eval->add_option("--tol", tol)->default_val(1e-8);

  auto* flat = app.add_subcommand("flatten", "thin-flattening ranks for a split");
  flat->add_option("--model", model_name)->required();
  flat->add_option("--tree", tree_text)->required();
  flat->add_option("--split", split_text)->required();
  flat->add_option("--tensor", tensor_path)->required();
  flat->add_option("--tol", rank_tol)->default_val(1e-9);

  auto* verify = app.add_subcommand("verify", "numerical verification checks");
  verify->require_subcommand(1);
  auto* vdims = verify->add_subcommand("dims", "numeric dimension equals the formula");
  auto* vclaw = verify->add_subcommand("claw", "claw d-tree hypothesis");
  auto* vci = verify->add_subcommand("ci", "complete intersection: count, vanishing, Jacobian rank");
  auto* vvan = verify->add_subcommand("vanish", "equation vanishing on simulated tensors");
  auto* vflat = verify->add_subcommand("flatten", "split discrimination by flattening ranks");
  for (CLI::App* sub : {vdims, vclaw, vci, vvan, vflat}) {
    sub->add_option("--model", model_name)->required();
    sub->add_option("--seed", seed)->required();
    sub->add_option("--trials", trials);
    sub->add_option("--tol", tol);
  }
  for (CLI::App* sub : {vdims, vci, vvan, vflat}) sub->add_option("--tree", tree_text)->required();
  vclaw->add_option("--degree", degree)->default_val(3);
  vci->add_option("--points", points)->default_val(20);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (dims->parsed()) {
      const ModelSpec model = model_from_arg(model_name);
      const Tree tree = parse_newick(tree_text);
      const long ambient = ambient_dimension(model, tree);
      const long dim_cv = cone_dimension(model, tree);
      const long codim = codimension(model, tree);
      Json j{{"model", model.name}, {"tree", tree_text},   {"ambient", ambient},
             {"dim_V", dim_cv - 1}, {"dim_CV", dim_cv},    {"codim", codim}};
      if (numeric) {
        const int rank = numeric_dimension(model, tree, trials, seed, tol);
        j["numeric_dim_CV"] = rank;
        j["numeric_matches"] = (rank == dim_cv);
      }
      if (g.json)
        std::cout << j.dump(2) << "\n";
      else {
        std::cout << "model=" << model.name << " dim V=" << dim_cv - 1 << " dim CV=" << dim_cv
                  << " ambient=" << ambient << " codim=" << codim;
        if (numeric) std::cout << " numeric=" << j["numeric_dim_CV"].get<int>()
                               << (j["numeric_matches"].get<bool>() ? " MATCH" : " MISMATCH");
        std::cout << "\n";
      }
      if (numeric && !j["numeric_matches"].get<bool>()) return 1;
      return 0;
    }

    if (mult->parsed()) {
      const ModelSpec model = model_from_arg(model_name);
      Json rows = Json::array();
      for (int s = 1; s <= max_power; ++s) {
        const IntVector m = multiplicities(model, s);
        Json row = Json::array();
        for (int k = 0; k < m.size(); ++k) row.push_back(m(k));
        rows.push_back(Json{{"s", s}, {"m", row}});
        if (!g.json) {
          std::cout << "m(" << s << ") =";
          for (int k = 0; k < m.size(); ++k) std::cout << " " << m(k);
          std::cout << "\n";
        }
      }
      if (g.json) std::cout << Json{{"model", model.name}, {"multiplicities", rows}}.dump(2) << "\n";
      return 0;
    }

    if (basis_cmd->parsed()) {
      const ModelSpec model = model_from_arg(model_name);
      const Tree tree = parse_newick(tree_text);
      const EdgeSplit split = parse_split(split_text, tree.n);
      const SplitBasis basis = build_split_basis(model, tree.n, split);
      const Json j = basis_dump_to_json(basis);
      write_or_print(j, out_path, g);
      if (!g.json)
        std::cout << "split " << split.display() << ": " << basis.dimension()
                  << " basis vectors, condition number " << basis.condition_number << "\n";
      return 0;
    }

    if (eqs->parsed()) {
      const ModelSpec model = model_from_arg(model_name);
      const Tree tree = parse_newick(tree_text);
      const EquationSystem sys = build_ci(model, tree);
      const Json j = system_to_json(sys);
      write_or_print(j, out_path, g);
      const long codim = codimension(model, tree);
      if (!g.json) {
        std::cout << "model=" << model.name << " n=" << tree.n << " equations="
                  << sys.equations.size() << " (clawA=" << sys.count("clawA")
                  << " clawB=" << sys.count("clawB") << " edge=" << sys.count("edge") << ")\n";
        for (const auto& lc : sys.counts)
          std::cout << "  level n=" << lc.n_leaves << ": clawA=" << lc.claw_a
                    << " clawB=" << lc.claw_b << " edge=" << lc.edge << "\n";
        std::cout << "codim check: " << codim
                  << (static_cast<long>(sys.equations.size()) == codim ? " PASS" : " FAIL") << "\n";
      }
      if (!dump_basis.empty() && sys.basis) {
        std::ofstream out(dump_basis);
        out << basis_dump_to_json(*sys.basis).dump(2) << "\n";
      }
      return static_cast<long>(sys.equations.size()) == codim ? 0 : 1;
    }

    if (sim->parsed()) {
      const ModelSpec model = model_from_arg(model_name);
      const Tree tree = parse_newick(tree_text);
      SampleOptions opts;
      opts.stochastic = stochastic;
      if (near_opt->count()) {
        opts.near_identity = (near_identity.empty() || near_identity[0].empty())
                                 ? kDefaultNearIdentity
                                 : std::stod(near_identity[0]);
      }
      const Parameters params = random_parameters(model, tree, seed, opts);
      const Tensor t = evaluate_psi(model, tree, params);
      const Json jt = tensor_to_json(t);
      if (!out_path.empty() || g.json) write_or_print(jt, out_path, g);
      if (!params_out.empty()) {
        std::ofstream out(params_out);
        out << parameters_to_json(params, tree).dump(2) << "\n";
      }
      if (!g.json)
        std::cout << "simulated tensor: n=" << t.n << " sum=" << t.data.sum().real()
                  << (is_invariant(t, model, 1e-10) ? " invariant" : " NOT-invariant") << "\n";
      return 0;
    }

    if (eval->parsed()) {
      const ModelSpec model = model_from_arg(model_name);
      const Tree tree = parse_newick(tree_text);
      const EquationSystem sys = build_ci(model, tree);
      const Tensor t = load_tensor(tensor_path);
      const VerifyReport r = check_vanishing(sys, t, tol);
      return finish_reports({r}, g);
    }

    if (flat->parsed()) {
      const ModelSpec model = model_from_arg(model_name);
      const Tree tree = parse_newick(tree_text);
      const EdgeSplit split = parse_split(split_text, tree.n);
      const SplitBasis basis = build_split_basis(model, tree.n, split);
      const Tensor t = load_tensor(tensor_path);
      const FlatteningRankReport report = flattening_ranks(t, basis, rank_tol);
      Json per = Json::array();
      for (const auto& pi : report.per_irrep) {
        Json sv = Json::array();
        for (int i = 0; i < pi.singular_values.size(); ++i) sv.push_back(pi.singular_values(i));
        per.push_back(Json{{"k", pi.k + 1}, {"m_k", pi.mk}, {"rank", pi.rank},
                           {"singular_values", sv}});
        if (!g.json)
          std::cout << "k=" << pi.k + 1 << ": rank " << pi.rank << " (m_k=" << pi.mk << ")"
                    << (pi.rank <= pi.mk ? "" : " EXCEEDS") << "\n";
      }
      const Json j{{"split", split.display()}, {"per_irrep", per},
                   {"split_compatible", report.split_compatible}};
      if (g.json)
        std::cout << j.dump(2) << "\n";
      else
        std::cout << "verdict: " << (report.split_compatible ? "split-compatible" : "incompatible")
                  << "\n";
      return report.split_compatible ? 0 : 1;
    }

    if (vdims->parsed()) {
      const ModelSpec model = model_from_arg(model_name);
      const Tree tree = parse_newick(tree_text);
      const long expected = cone_dimension(model, tree);
      const int rank = numeric_dimension(model, tree, trials, seed, tol);
      VerifyReport r;
      r.check = "numeric_dimension(" + model.name + ")";
      r.expected = std::to_string(expected);
      r.observed = std::to_string(rank);
      r.tol = tol;
      r.pass = rank == expected;
      r.seeds = {seed};
      return finish_reports({r}, g);
    }

    if (vclaw->parsed()) {
      const ModelSpec model = model_from_arg(model_name);
      return finish_reports({claw_hypothesis_check(model, degree, trials, seed, tol)}, g);
    }

    if (vci->parsed()) {
      const ModelSpec model = model_from_arg(model_name);
      const Tree tree = parse_newick(tree_text);
      const EquationSystem sys = build_ci(model, tree);
      std::vector<VerifyReport> reports;
      VerifyReport count;
      count.check = "equation_count";
      count.expected = std::to_string(codimension(model, tree));
      count.observed = std::to_string(sys.equations.size());
      count.pass = static_cast<long>(sys.equations.size()) == codimension(model, tree);
      reports.push_back(count);
      double worst = 0;
      for (int t = 0; t < trials; ++t) {
        const Parameters p = random_parameters(model, tree, seed + t);
        const VerifyReport r = check_vanishing(sys, evaluate_psi(model, tree, p), tol);
        worst = std::max(worst, std::stod(r.observed));
      }
      VerifyReport van;
      van.check = "vanishing_on_simulations(" + std::to_string(trials) + ")";
      van.expected = "<= " + std::to_string(tol);
      van.observed = std::to_string(worst);
      van.tol = tol;
      van.pass = worst <= tol;
      van.seeds = {seed};
      reports.push_back(van);
      int worst_rank = -1;
      for (int t = 0; t < points; ++t) {
        const Tensor pt = no_evolution_tensor(model, random_no_evolution(model, seed + 1000 + t), tree.n);
        const int rank = jacobian_rank_at(sys, pt);
        if (worst_rank < 0 || rank < worst_rank) worst_rank = rank;
      }
      VerifyReport jr;
      jr.check = "jacobian_rank_at_no_evolution(" + std::to_string(points) + ")";
      jr.expected = std::to_string(codimension(model, tree));
      jr.observed = std::to_string(worst_rank);
      jr.pass = worst_rank == codimension(model, tree);
      jr.seeds = {seed + 1000};
      reports.push_back(jr);
      return finish_reports(reports, g);
    }

    if (vvan->parsed()) {
      const ModelSpec model = model_from_arg(model_name);
      const Tree tree = parse_newick(tree_text);
      const EquationSystem sys = build_ci(model, tree);
      std::vector<VerifyReport> reports;
      for (int t = 0; t < trials; ++t) {
        const Parameters p = random_parameters(model, tree, seed + t);
        VerifyReport r = check_vanishing(sys, evaluate_psi(model, tree, p), tol);
        r.check = "vanish(seed " + std::to_string(seed + t) + ")";
        r.seeds = {seed + t};
        reports.push_back(r);
      }
      return finish_reports(reports, g);
    }

    if (vflat->parsed()) {
      const ModelSpec model = model_from_arg(model_name);
      const Tree tree = parse_newick(tree_text);
      if (tree.n != 4) throw std::invalid_argument("verify flatten expects a quartet tree");
      const auto splits = edge_splits(tree);
      if (splits.empty()) throw std::invalid_argument("tree has no interior edge");
      const EdgeSplit true_split = splits.front();
      EdgeSplit wrong;
      wrong.A = {1, true_split.A[1] == 2 ? 3 : 2};
      for (int l = 2; l <= 4; ++l)
        if (std::find(wrong.A.begin(), wrong.A.end(), l) == wrong.A.end()) wrong.B.push_back(l);
      wrong.alpha = wrong.A.back();
      wrong.beta = wrong.B.front();
      const SplitBasis true_basis = build_split_basis(model, 4, true_split);
      const SplitBasis wrong_basis = build_split_basis(model, 4, wrong);
      int ok = 0;
      for (int t = 0; t < trials; ++t) {
        const Parameters p = random_parameters(model, tree, seed + t);
        const Tensor tensor = evaluate_psi(model, tree, p);
        const bool good = flattening_ranks(tensor, true_basis).split_compatible &&
                          !flattening_ranks(tensor, wrong_basis).split_compatible;
        if (good) ++ok;
      }
      VerifyReport r;
      r.check = "split_discrimination(" + model.name + ")";
      r.expected = ">= " + std::to_string(trials - trials / 100) + "/" + std::to_string(trials);
      r.observed = std::to_string(ok) + "/" + std::to_string(trials);
      r.pass = ok * 100 >= trials * 99;
      r.seeds = {seed};
      return finish_reports({r}, g);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
