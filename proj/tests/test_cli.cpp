// Exercises the installed command-line interface end to end.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace {

#ifndef PHYLOCI_CLI
#error "PHYLOCI_CLI must point at the CLI binary"
#endif

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run(const std::string& args) {
  const std::string out_file = "cli_test_out.tmp";
  const std::string cmd = std::string(PHYLOCI_CLI) + " " + args + " > " + out_file + " 2>&1";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(status);
  std::ifstream in(out_file);
  std::stringstream ss;
  ss << in.rdbuf();
  r.output = ss.str();
  std::remove(out_file.c_str());
  return r;
}

}  // namespace

TEST_CASE("cli: dims") {
  const RunResult r = run("dims --model JC --tree \"((1,2),(3,4));\"");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("dim V=5 dim CV=6 ambient=15 codim=9") != std::string::npos);
  const RunResult j = run("--json dims --model gmm --tree \"(1,2,3);\"");
  CHECK(j.exit_code == 0);
  const auto parsed = nlohmann::json::parse(j.output);
  CHECK(parsed.at("codim").get<int>() == 24);
  CHECK(parsed.at("dim_CV").get<int>() == 40);
}

TEST_CASE("cli: multiplicities") {
  const RunResult r = run("multiplicities --model JC --max-power 2");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("m(2) = 2 0 1 3 1") != std::string::npos);
}

TEST_CASE("cli: equations and dump-basis") {
  const RunResult r = run("equations --model GMM --tree \"(1,2,3);\" --out eqs_gmm.json");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("codim check: 24 PASS") != std::string::npos);
  std::ifstream in("eqs_gmm.json");
  REQUIRE(in.good());
  nlohmann::json j;
  in >> j;
  CHECK(j.at("equations").size() == 24);
  CHECK(j.at("coordinate_space") == "standard");
  // every coeff_map entry is a signed coordinate
  for (const auto& eq : j.at("equations")) {
    CHECK(eq.at("rows").size() == 13);
    CHECK(eq.at("cols").size() == 13);
    for (const auto& term : eq.at("coeff_map")) {
      const double s = term.at("sign").get<double>();
      CHECK(std::abs(std::abs(s) - 1.0) < 1e-12);
    }
  }
  std::remove("eqs_gmm.json");

  const RunResult rb =
      run("equations --model JC --tree \"((1,2),(3,4));\" --dump-basis basis_jc.json");
  CHECK(rb.exit_code == 0);
  std::ifstream bin("basis_jc.json");
  REQUIRE(bin.good());
  nlohmann::json jb;
  bin >> jb;
  CHECK(jb.size() == 15);
  CHECK(jb.at(0).at("k") == 1);
  CHECK(jb.at(0).at("tensor").size() == 256);
  std::remove("basis_jc.json");
}

TEST_CASE("cli: simulate / eval / flatten round trip") {
  CHECK(run("simulate --model JC --tree \"((1,2),(3,4));\" --seed 3 --out sim_jc.json "
            "--params-out par_jc.json")
            .exit_code == 0);
  const RunResult ok = run("eval --model JC --tree \"((1,2),(3,4));\" --tensor sim_jc.json");
  CHECK(ok.exit_code == 0);
  CHECK(ok.output.find("PASS") != std::string::npos);

  // a tensor from the wrong topology fails the system
  CHECK(run("simulate --model JC --tree \"((1,3),(2,4));\" --seed 3 --out sim_wrong.json")
            .exit_code == 0);
  const RunResult bad = run("eval --model JC --tree \"((1,2),(3,4));\" --tensor sim_wrong.json");
  CHECK(bad.exit_code == 1);

  const RunResult flat_good =
      run("flatten --model JC --tree \"((1,2),(3,4));\" --split \"1,2|3,4\" --tensor sim_jc.json");
  CHECK(flat_good.exit_code == 0);
  CHECK(flat_good.output.find("split-compatible") != std::string::npos);
  const RunResult flat_bad =
      run("flatten --model JC --tree \"((1,2),(3,4));\" --split \"1,3|2,4\" --tensor sim_jc.json");
  CHECK(flat_bad.exit_code == 1);

  // parameters file carries the orbit coefficients
  std::ifstream pin("par_jc.json");
  REQUIRE(pin.good());
  nlohmann::json pj;
  pin >> pj;
  CHECK(pj.at("pi").size() == 1);
  CHECK(pj.at("edges").size() == 5);
  std::remove("sim_jc.json");
  std::remove("sim_wrong.json");
  std::remove("par_jc.json");
}

TEST_CASE("cli: identical runs produce identical bytes") {
  const RunResult a = run("--json simulate --model SS --tree \"(1,2,3);\" --seed 11");
  const RunResult b = run("--json simulate --model SS --tree \"(1,2,3);\" --seed 11");
  CHECK(a.exit_code == 0);
  CHECK(a.output == b.output);
  const RunResult c = run("--json simulate --model SS --tree \"(1,2,3);\" --seed 12");
  CHECK(a.output != c.output);
  const RunResult t2 = run("--threads 2 --json simulate --model SS --tree \"(1,2,3);\" --seed 11");
  CHECK(t2.output == a.output);
}

TEST_CASE("cli: basis dump") {
  const RunResult r =
      run("--json basis --model SS --tree \"((1,2),(3,4));\" --split \"1,2|3,4\"");
  CHECK(r.exit_code == 0);
  const auto parsed = nlohmann::json::parse(r.output);
  CHECK(parsed.size() == 128);
  CHECK(parsed.at(0).at("tensor").size() == 256);
}

TEST_CASE("cli: verify subcommands") {
  CHECK(run("verify dims --model K3 --tree \"((1,2),(3,4));\" --seed 5").exit_code == 0);
  CHECK(run("verify claw --model SS --degree 3 --seed 5 --trials 3").exit_code == 0);
  CHECK(run("verify vanish --model JC --tree \"((1,2),(3,4));\" --seed 5 --trials 3").exit_code ==
        0);
  const RunResult ci = run("--json verify ci --model JC --tree \"((1,2),(3,4));\" --seed 7 "
                           "--trials 3 --points 3");
  CHECK(ci.exit_code == 0);
  const auto parsed = nlohmann::json::parse(ci.output);
  REQUIRE(parsed.size() == 3);
  for (const auto& report : parsed) CHECK(report.at("pass").get<bool>());
  CHECK(run("verify flatten --model SS --tree \"((1,2),(3,4));\" --seed 1 --trials 10")
            .exit_code == 0);
}

TEST_CASE("cli: usage and error exits") {
  CHECK(run("dims --model JC").exit_code == 2);              // missing --tree
  CHECK(run("equations --model K3 --tree \"(1,2,3);\"").exit_code == 2);  // no claw set
  CHECK(run("nonsense").exit_code == 2);
  CHECK(run("dims --model ZZ --tree \"(1,2,3);\"").exit_code == 2);
}

TEST_CASE("cli: custom group JSON (dimension-only mode)") {
  // cyclic group of order 3: no character table, but dimensions still work
  const RunResult r =
      run("dims --model \"{\\\"kappa\\\":4,\\\"generators\\\":[[1,2,0,3]]}\" --tree \"(1,2,3);\"");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("ambient=22") != std::string::npos);  // m_1(3) = (64+1+1)/3
}
