// Acceptance suite: one line per criterion, every tolerance pinned in
// code. Exit status is the number of failed criteria.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <string>
#include <vector>

#include "sunqsde/json_io.hpp"
#include "sunqsde/oracle_sim.hpp"
#include "sunqsde/qsde_model.hpp"

using namespace sunq;
using cd = std::complex<double>;

namespace {

struct Outcome {
  bool pass = true;
  double worst = 0.0;
  std::string note;

  void fold(bool ok, double value) {
    pass = pass && ok;
    worst = std::max(worst, value);
  }
};

struct Fixture {
  GellMannBasis basis;
  StructureTensors tensors;
  ThetaContext ctx;

  explicit Fixture(int n)
      : basis(build_generators(n)),
        tensors(structure_constants(basis)),
        ctx(tensors) {}
};

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

SlhParams random_slh(GaussianRng& rng, int s, int nw) {
  SlhParams p;
  p.alpha.resize(s);
  for (int i = 0; i < s; ++i) p.alpha[i] = rng.normal();
  p.Lambda.resize(nw, s);
  for (int k = 0; k < nw; ++k)
    for (int c = 0; c < s; ++c)
      p.Lambda(k, c) = cd(rng.normal(), rng.normal()) / std::sqrt(2.0);
  return p;
}

// 1. Exhaustive algebra identity suite for n = 2..6: orthonormality, the
//    generator product reconstruction, all tensor and adjoint-matrix
//    identities, and the stacked contraction, each below 1e-9.
Outcome criterion_algebra() {
  Outcome out;
  for (int n = 2; n <= 6; ++n) {
    const Fixture fx(n);
    const int s = fx.ctx.s();

    double worst = 0.0;
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j) {
        const cd tr = (fx.basis.generators[i] * fx.basis.generators[j]).trace();
        worst = std::max(worst, std::abs(tr - (i == j ? 2.0 : 0.0)));
      }
    out.fold(worst < 1e-9, worst);

    worst = 0.0;
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j) {
        Eigen::MatrixXcd rhs = (i == j) ? Eigen::MatrixXcd((2.0 / n) * id)
                                        : Eigen::MatrixXcd(Eigen::MatrixXcd::Zero(n, n));
        for (int k = 0; k < s; ++k)
          rhs += cd(fx.tensors.d_at(i, j, k), fx.tensors.f_at(i, j, k)) *
                 fx.basis.generators[k];
        worst = std::max(
            worst, max_abs(fx.basis.generators[i] * fx.basis.generators[j] - rhs));
      }
    out.fold(worst < 1e-9, worst);

    const IdentityReport r = verify_structure_identities(fx.tensors, 1e-9);
    out.fold(r.pass, 0.0);
    for (const auto& c : r.checks) out.fold(c.pass, c.max_residual);
  }
  return out;
}

// 2. Theta-calculus suite: the seven product identities and the four
//    permutation identities on 100 seeded probes per n in {2,3,4}, with
//    residuals below 1e-9 after input-norm scaling.
Outcome criterion_theta() {
  Outcome out;
  for (int n : {2, 3, 4}) {
    const Fixture fx(n);
    const IdentityReport t = verify_theta_identities(fx.ctx, 100, 1e-9, 2024);
    const IdentityReport k = verify_kron_identities(fx.ctx, 100, 1e-9, 2024);
    out.fold(t.pass, 0.0);
    out.fold(k.pass, 0.0);
    for (const auto& c : t.checks) out.fold(c.pass, c.max_residual);
    for (const auto& c : k.checks) out.fold(c.pass, c.max_residual);
  }
  return out;
}

// 3. Generator reconstruction round trip: 100 random vectors per n in
//    {2,3,4} recovered below 1e-10, and 100 random symmetric matrices
//    rejected with a residual at least half their symmetry norm.
Outcome criterion_reconstruction() {
  Outcome out;
  for (int n : {2, 3, 4}) {
    const Fixture fx(n);
    const int s = fx.ctx.s();
    GaussianRng rng(300 + n);
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::VectorXd g0(s);
      for (int i = 0; i < s; ++i) g0[i] = rng.normal();
      const ThetaReconstruction rec = reconstruct_theta_minus_generator(
          fx.ctx, fx.ctx.theta_minus(g0).cast<cd>(), 1e-10);
      const double dev = (rec.g.real() - g0).cwiseAbs().maxCoeff();
      out.fold(rec.residual < 1e-10 && dev < 1e-10, std::max(rec.residual, dev));
    }
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::MatrixXcd g(s, s);
      for (int r = 0; r < s; ++r)
        for (int c = r; c < s; ++c) g(r, c) = g(c, r) = cd(rng.normal(), rng.normal());
      const ThetaReconstruction rec = reconstruct_theta_minus_generator(fx.ctx, g, 1e-10);
      const double bar = max_abs(g + g.transpose()) / 2.0;
      out.fold(rec.residual >= bar, 0.0);
    }
  }
  return out;
}

// 4. Synthesis / realizability round trip: 100 seeded parameter draws per
//    (n, nw) in {2,3,4} x {1,2}; every synthesized model passes all four
//    conditions below 1e-9 and gives back (alpha, Lambda) below 1e-9.
Outcome criterion_roundtrip(std::vector<StateSpaceModel>* corpus,
                            std::vector<Fixture*>* corpus_fx,
                            std::vector<Fixture>& fixtures) {
  Outcome out;
  int fi = 0;
  for (int n : {2, 3, 4}) {
    Fixture& fx = fixtures[fi++];
    for (int nw : {1, 2}) {
      GaussianRng rng(4000 + 10 * n + nw);
      for (int trial = 0; trial < 100; ++trial) {
        const SlhParams p = random_slh(rng, fx.ctx.s(), nw);
        const StateSpaceModel m = synthesize_state_space(fx.ctx, p, n);
        const RealizabilityReport r = check_physical_realizability(fx.ctx, m, 1e-9);
        out.fold(r.pass, 0.0);
        for (const auto& c : r.conditions) out.fold(c.pass, c.residual);
        const double da =
            (r.recovered.params.alpha - p.alpha).cwiseAbs().maxCoeff();
        const double dl = max_abs(r.recovered.params.Lambda - p.Lambda);
        out.fold(da < 1e-9 && dl < 1e-9, std::max(da, dl));
        corpus->push_back(m);
        corpus_fx->push_back(&fx);
      }
    }
  }
  return out;
}

// 5. Realizability implies preservation on the same 600-model corpus,
//    with the recovered coupling vectors equal to the output rows below
//    1e-9.
Outcome criterion_implication(const std::vector<StateSpaceModel>& corpus,
                              const std::vector<Fixture*>& corpus_fx) {
  Outcome out;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const StateSpaceModel& m = corpus[i];
    const ThetaContext& ctx = corpus_fx[i]->ctx;
    const PreservationReport r = check_preservation(ctx, m, 1e-9);
    out.fold(r.pass, 0.0);
    for (int k = 0; k < m.nw; ++k) {
      const double d1 = (r.b1[k] - m.C2.row(k).transpose()).cwiseAbs().maxCoeff();
      const double d2 = (r.b2[k] - m.C1.row(k).transpose()).cwiseAbs().maxCoeff();
      out.fold(d1 < 1e-9 && d2 < 1e-9, std::max(d1, d2));
    }
  }
  return out;
}

// 6. Separation witness: the preservation-only family passes the
//    preservation checker and breaks a coupling-image realizability
//    condition by more than 1e-2 in at least 99 of 100 seeds.
Outcome criterion_separation(Fixture& fx3) {
  Outcome out;
  int separated = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const StateSpaceModel m =
        random_model(fx3.ctx, 3, 1, seed, ModelKind::PreservationOnly);
    const PreservationReport pr = check_preservation(fx3.ctx, m, 1e-9);
    out.fold(pr.pass, 0.0);
    const RealizabilityReport rr = check_physical_realizability(fx3.ctx, m, 1e-9);
    const double worst = std::max(rr.find("B1_from_C2")->residual,
                                  rr.find("B2_from_C1")->residual);
    if (worst > 1e-2) ++separated;
  }
  out.note = " (" + std::to_string(separated) + "/100 separated)";
  out.fold(separated >= 99, 0.0);
  return out;
}

// 7. Brute-force oracle equivalence: on 50 models per family at n in
//    {2,3}, the preservation verdict agrees with "all Ito integrands
//    below 1e-9 operator norm" in every case.
Outcome criterion_oracle(std::vector<Fixture>& fixtures) {
  Outcome out;
  int agree = 0, total = 0;
  for (int idx : {0, 1}) {  // fixtures[0] is n=2, fixtures[1] is n=3
    Fixture& fx = fixtures[idx];
    const int n = fx.ctx.n();
    for (ModelKind kind :
         {ModelKind::Realizable, ModelKind::PreservationOnly, ModelKind::Generic}) {
      for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const StateSpaceModel m = random_model(fx.ctx, n, 1, seed, kind);
        const bool checker = check_preservation(fx.ctx, m, 1e-9).pass;
        const bool oracle = ito_integrands(fx.ctx, m).max_norm() < 1e-9;
        ++total;
        if (checker == oracle) ++agree;
      }
    }
  }
  out.note = " (" + std::to_string(agree) + "/" + std::to_string(total) + " agree)";
  out.fold(agree == total, 0.0);
  return out;
}

// 8. Moment flow: realizable models at n in {2,3} from both reference
//    initial states keep max(r_ccr, r_accr) below 1e-6 over [0,1] at
//    h = 1e-3, and a single 0.1 drift perturbation pushes the residual
//    past 1e-3 before t = 1.
Outcome criterion_moment_flow(std::vector<Fixture>& fixtures) {
  Outcome out;
  for (int idx : {0, 1}) {
    Fixture& fx = fixtures[idx];
    const int n = fx.ctx.n();
    const StateSpaceModel m = random_model(fx.ctx, n, 1, 808 + n, ModelKind::Realizable);

    std::vector<Eigen::MatrixXcd> states;
    states.push_back(Eigen::MatrixXcd::Identity(n, n) / double(n));
    Eigen::MatrixXcd ground = Eigen::MatrixXcd::Zero(n, n);
    ground(0, 0) = 1.0;
    states.push_back(ground);

    for (const auto& rho : states) {
      const MomentState s0 = init_moments(fx.ctx, rho);
      const MomentTrajectory traj = integrate_moments(fx.ctx, m, s0, 1.0, 1e-3);
      const double r = std::max(traj.max_r_ccr, traj.max_r_accr);
      out.fold(r < 1e-6, r);
    }

    StateSpaceModel perturbed = m;
    perturbed.A(0, 0) += 0.1;
    const MomentState s0 = init_moments(fx.ctx, states[1]);
    const MomentTrajectory traj = integrate_moments(fx.ctx, perturbed, s0, 1.0, 1e-3);
    out.fold(std::max(traj.max_r_ccr, traj.max_r_accr) > 1e-3, 0.0);
  }
  return out;
}

// 9. Sensitivity monotonicity: single-entry perturbations of B1 at
//    magnitude 1e-6, 1e-4, 1e-2 produce coupling-image residuals within
//    a factor of 10 of the perturbation.
Outcome criterion_sensitivity(std::vector<Fixture>& fixtures) {
  Outcome out;
  for (int idx : {0, 1}) {
    Fixture& fx = fixtures[idx];
    const int n = fx.ctx.n();
    const StateSpaceModel base = random_model(fx.ctx, n, 1, 99, ModelKind::Realizable);
    for (double eps : {1e-6, 1e-4, 1e-2}) {
      StateSpaceModel m = base;
      m.B1[0](0, 1) += eps;
      const RealizabilityReport r = check_physical_realizability(fx.ctx, m, 1e-9);
      const double res = r.find("B1_from_C2")->residual;
      out.fold(res >= eps / 10.0 && res <= eps * 10.0, res);
    }
  }
  return out;
}

int report(int id, const std::string& label, const Outcome& out) {
  std::printf("%s  %d. %s (worst residual %.3g)%s\n", out.pass ? "PASS" : "FAIL", id,
              label.c_str(), out.worst, out.note.c_str());
  std::fflush(stdout);
  return out.pass ? 0 : 1;
}

}  // namespace

int main() {
  std::vector<Fixture> fixtures;
  fixtures.reserve(3);
  fixtures.emplace_back(2);
  fixtures.emplace_back(3);
  fixtures.emplace_back(4);

  int failures = 0;
  failures += report(1, "algebra identity suite, exhaustive for n = 2..6",
                     criterion_algebra());
  failures += report(2, "theta-calculus identities, 100 probes for n = 2..4",
                     criterion_theta());
  failures += report(3, "generator reconstruction round trip and rejection",
                     criterion_reconstruction());

  std::vector<StateSpaceModel> corpus;
  std::vector<Fixture*> corpus_fx;
  corpus.reserve(600);
  failures += report(4, "synthesis/realizability round trip, 600 seeded models",
                     criterion_roundtrip(&corpus, &corpus_fx, fixtures));
  failures += report(5, "realizability implies preservation on the same corpus",
                     criterion_implication(corpus, corpus_fx));
  failures += report(6, "preservation-only family separates the two properties",
                     criterion_separation(fixtures[1]));
  failures += report(7, "brute-force oracle agrees with the condition checker",
                     criterion_oracle(fixtures));
  failures += report(8, "moment flow keeps the relations and flags perturbations",
                     criterion_moment_flow(fixtures));
  failures += report(9, "condition residuals track injected perturbation size",
                     criterion_sensitivity(fixtures));

  if (failures == 0)
    std::printf("all acceptance criteria passed\n");
  else
    std::printf("%d acceptance criteria FAILED\n", failures);
  return failures;
}
