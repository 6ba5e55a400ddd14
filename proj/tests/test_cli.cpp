// Drives the installed binary end to end through a shell: exit codes,
// report artifacts, stdin piping, batch mode.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "sunqsde/json_io.hpp"
#include "sunqsde/qsde_model.hpp"

using json = nlohmann::ordered_json;

namespace {

std::string cli_path() {
  const char* p = std::getenv("SUNQSDE_CLI");
  REQUIRE_MESSAGE(p != nullptr, "SUNQSDE_CLI must point at the binary");
  return p;
}

std::string tmp_dir() {
  const char* p = std::getenv("SUNQSDE_TEST_TMPDIR");
  return p ? p : "/tmp";
}

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run_raw(const std::string& cmd) {
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

RunResult run(const std::string& args, const std::string& redirect = " 2>/dev/null") {
  return run_raw(cli_path() + " " + args + redirect);
}

std::string write_file(const std::string& name, const std::string& text) {
  const std::string path = tmp_dir() + "/" + name;
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << text;
  return path;
}

}  // namespace

TEST_CASE("basis command exports the tensors") {
  const RunResult r = run("basis --n 2");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["n"] == 2);
  CHECK(j["s"] == 3);
  CHECK(j["f"][0][1][2] == 1.0);
  CHECK(j["order"][2] == "w_1");
}

TEST_CASE("identity suite is green for n = 3") {
  const RunResult r = run("check-identities --n 3 --tol 1e-9");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["pass"] == true);
  CHECK(j["suites"]["structure"]["pass"] == true);
  CHECK(j["suites"]["theta"]["pass"] == true);
  CHECK(j["suites"]["kron"]["pass"] == true);
}

TEST_CASE("synth output pipes straight into the checkers") {
  const std::string slh = write_file("pipe_slh.json",
                                     R"({"alpha":[0.3,-0.1,0.7],
                                         "Lambda":[[[0.5,0.2],[0.0,-0.4],[0.1,0.0]]]})");
  const RunResult r =
      run("synth --slh " + slh + " | " + cli_path() + " check-realizable --tol 1e-9");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["type"] == "realizability_report");
  CHECK(j["pass"] == true);

  const RunResult p =
      run("synth --slh " + slh + " | " + cli_path() + " check-preservation");
  REQUIRE(p.code == 0);
  CHECK(json::parse(p.out)["pass"] == true);

  const RunResult o = run("synth --slh " + slh + " | " + cli_path() + " oracle");
  REQUIRE(o.code == 0);
  CHECK(json::parse(o.out)["pass"] == true);
}

TEST_CASE("the all-zero model is accepted") {
  const std::string path =
      write_file("zero_model.json", sunq::model_to_json(sunq::zero_model(2, 1)));
  const RunResult r = run("check-realizable --model " + path);
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["pass"] == true);
}

TEST_CASE("failed checks still write the report and exit 1") {
  const RunResult gen = run("random-model --n 2 --nw 1 --seed 7 --kind generic");
  REQUIRE(gen.code == 0);
  const std::string path = write_file("generic_model.json", gen.out);
  const RunResult r = run("check-preservation --model " + path);
  CHECK(r.code == 1);
  const json j = json::parse(r.out);
  CHECK(j["pass"] == false);
  CHECK(j["conditions"].size() == 4);
}

TEST_CASE("schema violations exit 2 and name the field") {
  json j = json::parse(sunq::model_to_json(sunq::zero_model(2, 1)));
  j["A"] = json::array({{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}});
  const std::string path = write_file("bad_model.json", j.dump());
  const RunResult r = run("check-realizable --model " + path, " 2>&1");
  CHECK(r.code == 2);
  CHECK(r.out.find("A") != std::string::npos);
  CHECK(r.out.find("3x3") != std::string::npos);

  const RunResult missing = run("check-realizable --model /nonexistent/x.json", " 2>&1");
  CHECK(missing.code == 2);
}

TEST_CASE("random models are reproducible under the seed") {
  const RunResult a = run("random-model --n 3 --nw 2 --seed 42 --kind realizable");
  const RunResult b = run("random-model --n 3 --nw 2 --seed 42 --kind realizable");
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const RunResult c = run("random-model --n 3 --nw 2 --seed 43 --kind realizable");
  CHECK(a.out != c.out);
}

TEST_CASE("extraction round-trips through synth") {
  const std::string slh = write_file("roundtrip_slh.json",
                                     R"({"alpha":[1.0,0.0,-0.5],
                                         "Lambda":[[[0.2,0.0],[0.3,0.1],[0.0,0.0]]]})");
  const RunResult r =
      run("synth --slh " + slh + " | " + cli_path() + " extract-slh");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["alpha"][0].get<double>() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(j["alpha"][2].get<double>() == doctest::Approx(-0.5).epsilon(1e-10));
  CHECK(j["Lambda"][0][1][0].get<double>() == doctest::Approx(0.3).epsilon(1e-10));
  CHECK(j["Lambda"][0][1][1].get<double>() == doctest::Approx(0.1).epsilon(1e-10));
}

TEST_CASE("simulate writes the CSV trajectory") {
  const RunResult gen = run("random-model --n 2 --nw 1 --seed 3 --kind realizable");
  REQUIRE(gen.code == 0);
  const std::string path = write_file("sim_model.json", gen.out);
  const RunResult r = run("simulate --model " + path + " --t-end 0.05 --step 1e-3");
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("t,r_ccr,r_accr\n", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 52);

  const RunResult js =
      run("simulate --model " + path + " --t-end 0.05 --step 1e-3 --format json");
  REQUIRE(js.code == 0);
  const json j = json::parse(js.out);
  CHECK(j["steps"] == 50);
  CHECK(j["max_r_ccr"].get<double>() < 1e-8);
}

TEST_CASE("batch mode preserves input order and aggregates the verdict") {
  const RunResult good = run("random-model --n 2 --nw 1 --seed 5 --kind realizable");
  const RunResult bad = run("random-model --n 2 --nw 1 --seed 6 --kind generic");
  const std::string p1 = write_file("batch_good.json", good.out);
  const std::string p2 = write_file("batch_bad.json", bad.out);
  const RunResult r = run("check-preservation --model " + p1 + " --model " + p2 +
                          " --jobs 2");
  CHECK(r.code == 1);
  const json j = json::parse(r.out);
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 2);
  CHECK(j[0]["file"] == p1);
  CHECK(j[0]["report"]["pass"] == true);
  CHECK(j[1]["file"] == p2);
  CHECK(j[1]["report"]["pass"] == false);
}

TEST_CASE("tolerance can come from the environment") {
  const RunResult gen = run("random-model --n 2 --nw 1 --seed 8 --kind realizable");
  const std::string path = write_file("tol_model.json", gen.out);
  // An absurdly tight tolerance fails even a synthesized model.
  const RunResult strict = run_raw("env SUNQSDE_TOL=1e-18 " + cli_path() +
                                   " check-realizable --model " + path + " 2>/dev/null");
  CHECK(strict.code == 1);
  // An explicit flag overrides the environment.
  const RunResult flag = run_raw("env SUNQSDE_TOL=1e-18 " + cli_path() +
                                 " check-realizable --tol 1e-9 --model " + path +
                                 " 2>/dev/null");
  CHECK(flag.code == 0);
}

TEST_CASE("usage errors exit 2") {
  const RunResult r = run("synth --slh /nonexistent/slh.json", " 2>&1");
  CHECK(r.code == 2);
  const RunResult unknown = run("not-a-command", " 2>&1");
  CHECK(unknown.code == 2);
}

TEST_CASE("a diverging simulation exits 1 with a diagnostic") {
  json j = json::parse(sunq::model_to_json(sunq::zero_model(2, 1)));
  for (int i = 0; i < 3; ++i) j["A"][i][i] = 200.0;
  const std::string path = write_file("diverging_model.json", j.dump());
  const std::string rho = write_file("ground_state.json",
                                     "[[[1,0],[0,0]],[[0,0],[0,0]]]");
  const RunResult r = run("simulate --model " + path + " --rho " + rho +
                              " --t-end 50 --step 0.01",
                          " 2>&1");
  CHECK(r.code == 1);
  CHECK(r.out.find("non-finite") != std::string::npos);
}
