#include "doctest.h"
#include "json.hpp"
#include "sunqsde/json_io.hpp"

using namespace sunq;
using nlohmann::json;

namespace {

struct Fixture {
  GellMannBasis basis;
  StructureTensors tensors;
  ThetaContext ctx;

  explicit Fixture(int n)
      : basis(build_generators(n)),
        tensors(structure_constants(basis)),
        ctx(tensors) {}
};

}  // namespace

TEST_CASE("model JSON round trip is lossless and byte-stable") {
  const Fixture fx(3);
  const StateSpaceModel m = random_model(fx.ctx, 3, 2, 42, ModelKind::Realizable);
  const std::string text = model_to_json(m);
  const StateSpaceModel back = model_from_json(text);
  CHECK(back.n == m.n);
  CHECK(back.nw == m.nw);
  CHECK((back.A - m.A).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.A0 - m.A0).cwiseAbs().maxCoeff() == 0.0);
  for (int k = 0; k < m.nw; ++k) {
    CHECK((back.B1[k] - m.B1[k]).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.B2[k] - m.B2[k]).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK((back.C1 - m.C1).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.C2 - m.C2).cwiseAbs().maxCoeff() == 0.0);
  CHECK(model_to_json(back) == text);
}

TEST_CASE("model schema errors name the field path") {
  const Fixture fx(2);
  const StateSpaceModel m = zero_model(2, 1);
  json j = json::parse(model_to_json(m));

  {
    json bad = j;
    bad["A"] = json::array({{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}});
    try {
      model_from_json(bad.dump());
      FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
      CHECK(std::string(e.what()).find("A") != std::string::npos);
      CHECK(std::string(e.what()).find("3x3") != std::string::npos);
    }
  }
  {
    json bad = j;
    bad["A"][0][1] = json::array({1.0, 2.0});  // complex entry where a real belongs
    try {
      model_from_json(bad.dump());
      FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("A[0][1]") != std::string::npos);
      CHECK(msg.find("real") != std::string::npos);
    }
  }
  {
    json bad = j;
    bad.erase("C2");
    CHECK_THROWS_AS(model_from_json(bad.dump()), SchemaError);
  }
  CHECK_THROWS_AS(model_from_json("not json at all"), SchemaError);
}

TEST_CASE("slh JSON uses [re, im] pairs and round-trips") {
  const Fixture fx(2);
  SlhParams p;
  p.alpha.resize(3);
  p.alpha << 0.5, -1.25, 2.0;
  p.Lambda.resize(1, 3);
  p.Lambda << std::complex<double>(1.0, -2.0), std::complex<double>(0.0, 0.25),
      std::complex<double>(-3.5, 0.0);
  const std::string text = slh_to_json(p);
  const json j = json::parse(text);
  CHECK(j["Lambda"][0][0][0] == 1.0);
  CHECK(j["Lambda"][0][0][1] == -2.0);
  const SlhParams back = slh_from_json(text);
  CHECK((back.alpha - p.alpha).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.Lambda - p.Lambda).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("tensor export carries the labels and both tensors") {
  const Fixture fx(2);
  const json j = json::parse(tensors_to_json(fx.basis, fx.tensors));
  CHECK(j["n"] == 2);
  CHECK(j["s"] == 3);
  REQUIRE(j["order"].size() == 3);
  CHECK(j["order"][0] == "u_1_2");
  CHECK(j["order"][1] == "v_1_2");
  CHECK(j["order"][2] == "w_1");
  CHECK(j["f"][0][1][2] == 1.0);
  CHECK(j["d"][0][1][2] == 0.0);
}

TEST_CASE("density matrices parse from [re, im] grids") {
  const std::string text = "[[[0.5, 0], [0, -0.25]], [[0, 0.25], [0.5, 0]]]";
  const Eigen::MatrixXcd rho = density_from_json(text);
  CHECK(rho(0, 0) == std::complex<double>(0.5, 0.0));
  CHECK(rho(0, 1) == std::complex<double>(0.0, -0.25));
  CHECK(rho(1, 0) == std::complex<double>(0.0, 0.25));
  CHECK_THROWS_AS(density_from_json("[[1, 2], [3, 4]]"), SchemaError);
  const std::string back = density_to_json(rho);
  CHECK((density_from_json(back) - rho).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("report serializers keep ids and determinism") {
  const Fixture fx(2);
  const IdentityReport ir = verify_structure_identities(fx.tensors, 1e-9);
  const std::string itext = identity_report_to_json(ir);
  CHECK(itext == identity_report_to_json(ir));
  const json ij = json::parse(itext);
  CHECK(ij["type"] == "identity_report");
  CHECK(ij["pass"] == true);
  CHECK(ij["checks"].size() == ir.checks.size());

  const StateSpaceModel m = random_model(fx.ctx, 2, 1, 3, ModelKind::Realizable);
  const RealizabilityReport rr = check_physical_realizability(fx.ctx, m, 1e-9);
  const json rj = json::parse(realizability_report_to_json(rr));
  CHECK(rj["pass"] == true);
  CHECK(rj["conditions"].size() == 5);
  CHECK(rj["recovered"].contains("Lambda"));

  const PreservationReport pr = check_preservation(fx.ctx, m, 1e-9);
  const json pj = json::parse(preservation_report_to_json(pr));
  CHECK(pj["pass"] == true);
  CHECK(pj["conditions"].size() == 4);
  CHECK(pj.contains("implied_A0"));

  const ItoIntegrands g = ito_integrands(fx.ctx, m);
  const json oj = json::parse(oracle_report_to_json(g, 1e-9));
  CHECK(oj["pass"] == true);
  CHECK(oj["integrands"].size() == 2 + 4 * m.nw);
}

TEST_CASE("trajectory CSV has the documented columns") {
  const Fixture fx(2);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Identity(2, 2) / 2.0;
  const MomentState s0 = init_moments(fx.ctx, rho);
  const MomentTrajectory traj =
      integrate_moments(fx.ctx, zero_model(2, 1), s0, 0.01, 1e-3);
  const std::string csv = trajectory_to_csv(traj);
  CHECK(csv.rfind("t,r_ccr,r_accr\n", 0) == 0);
  // header + 11 states
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 12);

  const std::string with_m = trajectory_to_csv(traj, true);
  CHECK(with_m.find("m_re_0") != std::string::npos);
  CHECK(with_m.find("m_im_2") != std::string::npos);
}
