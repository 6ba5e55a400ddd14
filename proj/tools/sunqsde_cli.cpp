// Command line front end: construction, checking, extraction, brute-force
// oracle, and moment simulation with machine-readable reports.
//
// Exit codes: 0 all checks pass, 1 a check failed (report still written),
// 2 input or usage error.

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sunqsde/json_io.hpp"
#include "sunqsde/oracle_sim.hpp"
#include "sunqsde/qsde_model.hpp"

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw sunq::SchemaError("cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw sunq::SchemaError("cannot open output file: " + path);
  out << text;
  if (text.empty() || text.back() != '\n') out << "\n";
}

double default_tol() {
  if (const char* env = std::getenv("SUNQSDE_TOL")) {
    try {
      const double v = std::stod(env);
      if (v > 0.0) return v;
    } catch (...) {
    }
    std::cerr << "warning: ignoring unparsable SUNQSDE_TOL\n";
  }
  return sunq::kDefaultTol;
}

struct TensorCache {
  sunq::GellMannBasis basis;
  sunq::StructureTensors tensors;

  explicit TensorCache(int n)
      : basis(sunq::build_generators(n)), tensors(sunq::structure_constants(basis)) {}
};

sunq::StateSpaceModel load_model(const std::string& text) {
  sunq::StateSpaceModel m = sunq::model_from_json(text);
  sunq::validate_dimensions(m);
  return m;
}

// Runs `work` over every input path (stdin when none), reporting in input
// order even when jobs > 1. Returns true when every per-file verdict
// passed.
bool run_batch(std::vector<std::string> inputs, int jobs, const std::string& out_path,
               const std::function<std::pair<bool, std::string>(const std::string&)>& work) {
  if (inputs.empty()) inputs.push_back("-");

  std::vector<std::string> texts(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) texts[i] = read_input(inputs[i]);

  std::vector<std::pair<bool, std::string>> results(inputs.size());
  if (jobs <= 1 || inputs.size() == 1) {
    for (std::size_t i = 0; i < texts.size(); ++i) results[i] = work(texts[i]);
  } else {
    std::atomic<std::size_t> next{0};
    const int workers = std::min<int>(jobs, static_cast<int>(inputs.size()));
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(inputs.size());
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < texts.size(); i = next.fetch_add(1)) {
          try {
            results[i] = work(texts[i]);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  bool all_pass = true;
  for (const auto& r : results) all_pass = all_pass && r.first;

  if (results.size() == 1) {
    write_output(out_path, results.front().second);
  } else {
    json combined = json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
      json entry;
      entry["file"] = inputs[i];
      entry["report"] = json::parse(results[i].second);
      combined.push_back(std::move(entry));
    }
    write_output(out_path, combined.dump(2));
  }
  return all_pass;
}

int infer_n_from_s(int s) {
  int n = 2;
  while (n * n - 1 < s) ++n;
  if (n * n - 1 != s)
    throw sunq::SchemaError("alpha length " + std::to_string(s) +
                            " is not n^2 - 1 for any integer n");
  return n;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SU(n) generator algebra and bilinear QSDE verification toolkit"};
  app.require_subcommand(1);

  const double tol_default = default_tol();

  auto* cmd_basis = app.add_subcommand(
      "basis", "Construct the generator basis and export the f, d tensors as JSON");
  int basis_n = 2;
  std::string basis_out;
  cmd_basis->add_option("--n", basis_n, "Level count (>= 2)")->required();
  cmd_basis->add_option("--out,-o", basis_out, "Output path (default stdout)");

  auto* cmd_ident = app.add_subcommand(
      "check-identities", "Verify the tensor, theta map, and permutation identities");
  int ident_n = 2;
  double ident_tol = tol_default;
  int ident_trials = 100;
  std::uint64_t ident_seed = 1;
  std::string ident_out;
  cmd_ident->add_option("--n", ident_n, "Level count")->required();
  cmd_ident->add_option("--tol", ident_tol, "Residual tolerance");
  cmd_ident->add_option("--trials", ident_trials, "Randomized probes per identity");
  cmd_ident->add_option("--seed", ident_seed, "Probe seed");
  cmd_ident->add_option("--out,-o", ident_out, "Output path (default stdout)");

  auto* cmd_synth = app.add_subcommand(
      "synth", "Synthesize the state-space model of a coupling/Hamiltonian file");
  std::string synth_slh = "-";
  int synth_n = 0;
  std::string synth_out;
  cmd_synth->add_option("--slh", synth_slh, "SLH JSON path, or - for stdin");
  cmd_synth->add_option("--n", synth_n, "Level count (inferred from alpha when omitted)");
  cmd_synth->add_option("--out,-o", synth_out, "Output path (default stdout)");

  auto* cmd_real = app.add_subcommand(
      "check-realizable", "Check the physical realizability conditions of model files");
  std::vector<std::string> real_models;
  double real_tol = tol_default;
  int real_jobs = 1;
  std::string real_out;
  cmd_real->add_option("--model", real_models, "Model JSON path(s); stdin when omitted");
  cmd_real->add_option("--tol", real_tol, "Residual tolerance");
  cmd_real->add_option("--jobs", real_jobs, "Parallel workers for batch input");
  cmd_real->add_option("--out,-o", real_out, "Output path (default stdout)");

  auto* cmd_extract = app.add_subcommand(
      "extract-slh", "Recover the coupling matrix and Hamiltonian vector from a model");
  std::string extract_model = "-";
  std::string extract_out;
  cmd_extract->add_option("--model", extract_model, "Model JSON path, or - for stdin");
  cmd_extract->add_option("--out,-o", extract_out, "Output path (default stdout)");

  auto* cmd_pres = app.add_subcommand(
      "check-preservation", "Check the commutation/anticommutation preservation conditions");
  std::vector<std::string> pres_models;
  double pres_tol = tol_default;
  int pres_jobs = 1;
  std::string pres_out;
  cmd_pres->add_option("--model", pres_models, "Model JSON path(s); stdin when omitted");
  cmd_pres->add_option("--tol", pres_tol, "Residual tolerance");
  cmd_pres->add_option("--jobs", pres_jobs, "Parallel workers for batch input");
  cmd_pres->add_option("--out,-o", pres_out, "Output path (default stdout)");

  auto* cmd_oracle = app.add_subcommand(
      "oracle", "Brute-force operator expansion of the preservation integrands");
  std::vector<std::string> oracle_models;
  double oracle_tol = tol_default;
  int oracle_jobs = 1;
  std::string oracle_out;
  cmd_oracle->add_option("--model", oracle_models, "Model JSON path(s); stdin when omitted");
  cmd_oracle->add_option("--tol", oracle_tol, "Operator norm tolerance");
  cmd_oracle->add_option("--jobs", oracle_jobs, "Parallel workers for batch input");
  cmd_oracle->add_option("--out,-o", oracle_out, "Output path (default stdout)");

  auto* cmd_sim = app.add_subcommand(
      "simulate", "Integrate the vacuum moment flow and track relation residuals");
  std::string sim_model = "-";
  std::string sim_rho;
  double sim_tend = 1.0;
  double sim_h = 1e-3;
  std::string sim_format = "csv";
  bool sim_with_moments = false;
  std::string sim_out;
  cmd_sim->add_option("--model", sim_model, "Model JSON path, or - for stdin");
  cmd_sim->add_option("--rho", sim_rho,
                      "Initial density matrix JSON ([re,im] grid); maximally mixed when omitted");
  cmd_sim->add_option("--t-end", sim_tend, "Final time");
  cmd_sim->add_option("--step", sim_h, "Fixed integrator step");
  cmd_sim->add_option("--format", sim_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd_sim->add_flag("--with-moments", sim_with_moments,
                    "Include the flattened first moment in CSV output");
  cmd_sim->add_option("--out,-o", sim_out, "Output path (default stdout)");

  auto* cmd_rand = app.add_subcommand("random-model", "Draw a seeded model fixture");
  int rand_n = 2, rand_nw = 1;
  std::uint64_t rand_seed = 1;
  std::string rand_kind = "realizable";
  std::string rand_out;
  cmd_rand->add_option("--n", rand_n, "Level count")->required();
  cmd_rand->add_option("--nw", rand_nw, "Field channel count");
  cmd_rand->add_option("--seed", rand_seed, "Draw seed");
  cmd_rand->add_option("--kind", rand_kind, "realizable | preservation-only | generic")
      ->check(CLI::IsMember({"realizable", "preservation-only", "generic"}));
  cmd_rand->add_option("--out,-o", rand_out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (cmd_basis->parsed()) {
      const TensorCache tc(basis_n);
      write_output(basis_out, sunq::tensors_to_json(tc.basis, tc.tensors));
      return kExitPass;
    }

    if (cmd_ident->parsed()) {
      const TensorCache tc(ident_n);
      const sunq::ThetaContext ctx(tc.tensors);
      const sunq::IdentityReport structure =
          sunq::verify_structure_identities(tc.tensors, ident_tol);
      const sunq::IdentityReport theta =
          sunq::verify_theta_identities(ctx, ident_trials, ident_tol, ident_seed);
      const sunq::IdentityReport kron =
          sunq::verify_kron_identities(ctx, ident_trials, ident_tol, ident_seed);
      const bool pass = structure.pass && theta.pass && kron.pass;

      json combined;
      combined["type"] = "identity_report";
      combined["n"] = ident_n;
      combined["tol"] = ident_tol;
      combined["trials"] = ident_trials;
      combined["seed"] = ident_seed;
      combined["pass"] = pass;
      combined["suites"]["structure"] = json::parse(sunq::identity_report_to_json(structure));
      combined["suites"]["theta"] = json::parse(sunq::identity_report_to_json(theta));
      combined["suites"]["kron"] = json::parse(sunq::identity_report_to_json(kron));
      write_output(ident_out, combined.dump(2));
      return pass ? kExitPass : kExitCheckFailed;
    }

    if (cmd_synth->parsed()) {
      const sunq::SlhParams p = sunq::slh_from_json(read_input(synth_slh));
      const int n = synth_n > 0 ? synth_n : infer_n_from_s(static_cast<int>(p.alpha.size()));
      const TensorCache tc(n);
      const sunq::ThetaContext ctx(tc.tensors);
      const sunq::StateSpaceModel m = sunq::synthesize_state_space(ctx, p, n);
      write_output(synth_out, sunq::model_to_json(m));
      return kExitPass;
    }

    if (cmd_real->parsed()) {
      const bool pass =
          run_batch(real_models, real_jobs, real_out, [&](const std::string& text) {
            const sunq::StateSpaceModel m = load_model(text);
            const TensorCache tc(m.n);
            const sunq::ThetaContext ctx(tc.tensors);
            const sunq::RealizabilityReport r =
                sunq::check_physical_realizability(ctx, m, real_tol);
            return std::make_pair(r.pass, sunq::realizability_report_to_json(r));
          });
      return pass ? kExitPass : kExitCheckFailed;
    }

    if (cmd_extract->parsed()) {
      const sunq::StateSpaceModel m = load_model(read_input(extract_model));
      const TensorCache tc(m.n);
      const sunq::ThetaContext ctx(tc.tensors);
      const sunq::SlhExtraction e = sunq::extract_slh(ctx, m);
      std::cerr << "alpha recovery residual: " << e.alpha_residual << "\n";
      write_output(extract_out, sunq::slh_to_json(e.params));
      return kExitPass;
    }

    if (cmd_pres->parsed()) {
      const bool pass =
          run_batch(pres_models, pres_jobs, pres_out, [&](const std::string& text) {
            const sunq::StateSpaceModel m = load_model(text);
            const TensorCache tc(m.n);
            const sunq::ThetaContext ctx(tc.tensors);
            const sunq::PreservationReport r = sunq::check_preservation(ctx, m, pres_tol);
            return std::make_pair(r.pass, sunq::preservation_report_to_json(r));
          });
      return pass ? kExitPass : kExitCheckFailed;
    }

    if (cmd_oracle->parsed()) {
      const bool pass =
          run_batch(oracle_models, oracle_jobs, oracle_out, [&](const std::string& text) {
            const sunq::StateSpaceModel m = load_model(text);
            const TensorCache tc(m.n);
            const sunq::ThetaContext ctx(tc.tensors);
            const sunq::ItoIntegrands g = sunq::ito_integrands(ctx, m);
            return std::make_pair(g.max_norm() < oracle_tol,
                                  sunq::oracle_report_to_json(g, oracle_tol));
          });
      return pass ? kExitPass : kExitCheckFailed;
    }

    if (cmd_sim->parsed()) {
      const sunq::StateSpaceModel m = load_model(read_input(sim_model));
      const TensorCache tc(m.n);
      const sunq::ThetaContext ctx(tc.tensors);
      const Eigen::MatrixXcd rho =
          sim_rho.empty()
              ? Eigen::MatrixXcd(Eigen::MatrixXcd::Identity(m.n, m.n) / double(m.n))
              : sunq::density_from_json(read_input(sim_rho));
      const sunq::MomentState s0 = sunq::init_moments(ctx, rho);
      try {
        const sunq::MomentTrajectory traj =
            sunq::integrate_moments(ctx, m, s0, sim_tend, sim_h);
        if (sim_format == "csv") {
          write_output(sim_out, sunq::trajectory_to_csv(traj, sim_with_moments));
        } else {
          json j;
          j["type"] = "trajectory_summary";
          j["t_end"] = sim_tend;
          j["h"] = sim_h;
          j["steps"] = traj.points.size() - 1;
          j["max_r_ccr"] = traj.max_r_ccr;
          j["max_r_accr"] = traj.max_r_accr;
          write_output(sim_out, j.dump(2));
        }
      } catch (const sunq::IntegrationDivergedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
      }
      return kExitPass;
    }

    if (cmd_rand->parsed()) {
      const sunq::ModelKind kind =
          rand_kind == "realizable"
              ? sunq::ModelKind::Realizable
              : (rand_kind == "preservation-only" ? sunq::ModelKind::PreservationOnly
                                                  : sunq::ModelKind::Generic);
      const TensorCache tc(rand_n);
      const sunq::ThetaContext ctx(tc.tensors);
      const sunq::StateSpaceModel m =
          sunq::random_model(ctx, rand_n, rand_nw, rand_seed, kind);
      write_output(rand_out, sunq::model_to_json(m));
      return kExitPass;
    }
  } catch (const sunq::IntegrationDivergedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  return kExitUsage;
}
