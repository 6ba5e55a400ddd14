#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "sunqsde/common.hpp"
#include "sunqsde/report.hpp"
#include "sunqsde/theta_calculus.hpp"

namespace sunq {

/// Bilinear quadrature state-space model of an n-level open system driven
/// by nw field channels:
///
///   dx = A0 dt + A x dt + sum_k (B1k x dW1k + B2k x dW2k)
///   dY1 = C1 x dt + dW1,  dY2 = C2 x dt + dW2
///
/// with x the s = n^2 - 1 generator coordinates. All matrices are real
/// (quadrature form); realness is structural here, parsers must enforce
/// it at the boundary.
///
/// The model is canonical in (B1k, B2k). Coefficients written against the
/// raw annihilation/creation increments convert as B1 = B1' + B2' and
/// B2 = i (B2' - B1') and are not stored.
struct StateSpaceModel {
  int n = 0;
  int nw = 0;
  Eigen::VectorXd A0;               // s
  Eigen::MatrixXd A;                // s x s
  std::vector<Eigen::MatrixXd> B1;  // nw matrices, s x s
  std::vector<Eigen::MatrixXd> B2;  // nw matrices, s x s
  Eigen::MatrixXd C1;               // nw x s
  Eigen::MatrixXd C2;               // nw x s

  int s() const { return n * n - 1; }
};

/// Throws DimensionError naming the first field whose shape disagrees
/// with (n, nw).
void validate_dimensions(const StateSpaceModel& m);

/// Returns the all-zero model for (n, nw).
StateSpaceModel zero_model(int n, int nw);

/// Coupling-and-Hamiltonian parametrization: H = alpha . x, L = Lambda x.
/// The scattering matrix is fixed to the identity and not stored.
struct SlhParams {
  Eigen::VectorXd alpha;    // s, real
  Eigen::MatrixXcd Lambda;  // nw x s
};

/// Builds the state-space model generated by (alpha, Lambda):
///
///   C1 = Lambda + Lambda^#          C2 = i (Lambda^# - Lambda)
///   B1k = ThetaMinus((C2)_k)        B2k = ThetaMinus((C1)_k)
///   A0 = (4i/n) sum_k ThetaMinus(Lambda_k) Lambda_k^dagger
///   A  = -2 ThetaMinus(alpha) + sum_k (R_k + i Q_k)
///     R_k = Tm(Lambda_k) Tm(Lambda_k^#) + Tm(Lambda_k^#) Tm(Lambda_k)
///     Q_k = Tm(Lambda_k) Tp(Lambda_k^#) - Tm(Lambda_k^#) Tp(Lambda_k)
///
/// The imaginary parts of A0 and A cancel algebraically; the result is
/// stored exactly real after stripping residue below 1e-12 (scaled).
/// Residue above that throws InternalConsistencyError, which indicates
/// corrupted tensors rather than bad input.
StateSpaceModel synthesize_state_space(const ThetaContext& ctx, const SlhParams& p, int n);

/// Model recovered from a realizable system, plus a reliability residual:
/// the disagreement between the direct recovery formula for alpha and the
/// independent route through the drift decomposition. Both agree exactly
/// on realizable models; on arbitrary input the recovery is best-effort
/// and the residual says how much to trust it.
struct SlhExtraction {
  SlhParams params;
  double alpha_residual = 0.0;
};

/// Recovers Lambda = (C1 + i C2)/2 and the Hamiltonian coefficients
///
///   alpha = (1/4n) vec(A^T - A
///           + 1/2 sum_k ([B2k, ThetaPlus((C2)_k)] - [B1k, ThetaPlus((C1)_k)]))^T F
///
/// The caller is responsible for having checked realizability; this never
/// re-verifies.
SlhExtraction extract_slh(const ThetaContext& ctx, const StateSpaceModel& m);

/// Realizability verdict. Condition ids:
///   "A0_from_BC"       A0 = (1/n) sum_k (i B1k + B2k) ((C2)_k + i (C1)_k)^T
///   "A0_from_BC_imag"  imaginary part of that right side (must vanish)
///   "B1_from_C2"       B1k = ThetaMinus((C2)_k), worst channel
///   "B2_from_C1"       B2k = ThetaMinus((C1)_k), worst channel
///   "symmetric_part"   A + A^T + sum B_ik B_ik^T = (n/2) ThetaPlus(A0)
struct RealizabilityReport {
  double tol = 0.0;
  bool pass = false;
  std::vector<ConditionResidual> conditions;
  SlhExtraction recovered;

  const ConditionResidual* find(const std::string& id) const {
    for (const auto& c : conditions)
      if (c.id == id) return &c;
    return nullptr;
  }
};

RealizabilityReport check_physical_realizability(const ThetaContext& ctx,
                                                 const StateSpaceModel& m,
                                                 double tol = kDefaultTol);

/// Relation-preservation verdict, decided standalone (no realizability
/// assumed). Condition ids:
///   "B1_image"         every B1k is a ThetaMinus image (vector b1k recovered)
///   "B2_image"         every B2k is a ThetaMinus image (vector b2k recovered)
///   "A0_balance"       sum_k (B1k B2k^T - B2k B1k^T) = (n/2) ThetaMinus(A0)
///   "A_decomposition"  A - corrections is a ThetaMinus image (vector a)
/// The implied drift constant (2/n) sum_k ThetaMinus(b2k) b1k and its
/// deviation from the stored A0 are reported but do not gate `pass`.
struct PreservationReport {
  double tol = 0.0;
  bool pass = false;
  std::vector<ConditionResidual> conditions;
  std::vector<Eigen::VectorXd> b1, b2;  // one per channel
  Eigen::VectorXd a;
  Eigen::VectorXd implied_A0;
  double implied_A0_deviation = 0.0;

  const ConditionResidual* find(const std::string& id) const {
    for (const auto& c : conditions)
      if (c.id == id) return &c;
    return nullptr;
  }
};

PreservationReport check_preservation(const ThetaContext& ctx, const StateSpaceModel& m,
                                      double tol = kDefaultTol);

/// Seeded model fixtures.
///   Realizable:       random (alpha, Lambda) run through the synthesizer.
///   PreservationOnly: built directly from random a, b1k, b2k so the
///                     preservation conditions hold, with C1, C2 drawn
///                     independently (realizable only by accident).
///   Generic:          unconstrained gaussian matrices.
enum class ModelKind { Realizable, PreservationOnly, Generic };

StateSpaceModel random_model(const ThetaContext& ctx, int n, int nw, std::uint64_t seed,
                             ModelKind kind);

}  // namespace sunq
