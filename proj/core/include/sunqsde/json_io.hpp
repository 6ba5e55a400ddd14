#pragma once

#include <string>

#include "sunqsde/oracle_sim.hpp"
#include "sunqsde/qsde_model.hpp"
#include "sunqsde/report.hpp"
#include "sunqsde/sun_algebra.hpp"

namespace sunq {

/// Canonical serialization of the file formats. All writers emit keys in
/// a fixed order and numbers in their shortest round-trip form, so the
/// same value always produces the same bytes. All parsers throw
/// SchemaError naming the offending field path.

/// {"n", "nw", "A0":[s], "A":[s][s], "B1":[nw][s][s], "B2":[nw][s][s],
///  "C1":[nw][s], "C2":[nw][s]}; every entry a real number.
std::string model_to_json(const StateSpaceModel& m, int indent = 2);
StateSpaceModel model_from_json(const std::string& text);

/// {"alpha":[s], "Lambda":[nw][s] of [re, im]}
std::string slh_to_json(const SlhParams& p, int indent = 2);
SlhParams slh_from_json(const std::string& text);

/// {"n", "s", "order":[labels], "f":[s][s][s], "d":[s][s][s]}
std::string tensors_to_json(const GellMannBasis& basis, const StructureTensors& t,
                            int indent = 2);

/// Density matrix as an n x n grid of [re, im] pairs.
Eigen::MatrixXcd density_from_json(const std::string& text);
std::string density_to_json(const Eigen::MatrixXcd& rho, int indent = 2);

std::string identity_report_to_json(const IdentityReport& r, int indent = 2);
std::string realizability_report_to_json(const RealizabilityReport& r, int indent = 2);
std::string preservation_report_to_json(const PreservationReport& r, int indent = 2);

/// Per-integrand operator norms of the brute-force oracle.
std::string oracle_report_to_json(const ItoIntegrands& g, double tol, int indent = 2);

/// Columns t, r_ccr, r_accr, then optionally the flattened first moment
/// as m_re_i / m_im_i pairs.
std::string trajectory_to_csv(const MomentTrajectory& traj, bool with_moments = false);

}  // namespace sunq
