#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

#include "sunqsde/common.hpp"
#include "sunqsde/qsde_model.hpp"
#include "sunqsde/sun_algebra.hpp"
#include "sunqsde/theta_calculus.hpp"

namespace sunq {

/// A rows x cols array whose entries are operators on C^dim, stored as
/// dense dim x dim complex matrices. Products keep operator order: entry
/// (i,j) of A*B is sum_k A(i,k) B(k,j) with A's factor on the left.
/// transpose() swaps array indices only; entries are not adjointed.
class OperatorMatrix {
 public:
  OperatorMatrix() = default;
  OperatorMatrix(int rows, int cols, int dim);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int dim() const { return dim_; }

  Eigen::MatrixXcd& at(int i, int j) { return entries_[i * cols_ + j]; }
  const Eigen::MatrixXcd& at(int i, int j) const { return entries_[i * cols_ + j]; }

  OperatorMatrix transpose() const;

  OperatorMatrix operator+(const OperatorMatrix& other) const;
  OperatorMatrix operator-(const OperatorMatrix& other) const;
  OperatorMatrix operator*(const OperatorMatrix& other) const;

  /// Largest spectral norm over all entries; this is the "operator equals
  /// zero" metric used by every oracle residual.
  double max_op_norm() const;

 private:
  int rows_ = 0, cols_ = 0, dim_ = 0;
  std::vector<Eigen::MatrixXcd> entries_;
};

OperatorMatrix operator*(const std::complex<double>& c, const OperatorMatrix& x);

/// Constant (scalar) matrices act entrywise as multiples of the identity
/// operator; these products mix them with operator arrays.
OperatorMatrix operator*(const Eigen::MatrixXcd& scalars, const OperatorMatrix& x);
OperatorMatrix operator*(const OperatorMatrix& x, const Eigen::MatrixXcd& scalars);

/// The generators as an s x 1 operator column: the initial value of the
/// system variables.
OperatorMatrix generator_column(const GellMannBasis& basis);

/// Embeds a complex vector as an operator column (each entry times the
/// identity operator).
OperatorMatrix embed_vector(const Eigen::VectorXcd& v, int dim);

/// [x, y^T] = x y^T - (y x^T)^T for operator columns; entry (i,j) is the
/// scalar commutator [x_i, y_j]. Throws DimensionError on mismatched
/// entry dimensions or non-column input.
OperatorMatrix opmat_bracket(const OperatorMatrix& x, const OperatorMatrix& y);

/// {x, y^T} = x y^T + (y x^T)^T: entry (i,j) is {x_i, y_j}.
OperatorMatrix opmat_antibracket(const OperatorMatrix& x, const OperatorMatrix& y);

/// ThetaMinus / ThetaPlus applied to an operator column: entry (i,j) is
/// sum_k f_ijk v_k (resp. d_ijk v_k).
OperatorMatrix theta_minus_op(const ThetaContext& ctx, const OperatorMatrix& v);
OperatorMatrix theta_plus_op(const ThetaContext& ctx, const OperatorMatrix& v);

/// The integrands of d[x,x^T] - 2i ThetaMinus(dx) and of
/// d{x,x^T} - 2 ThetaPlus(dx) after substituting the model QSDE and the
/// quadrature Ito table (dW1 dW1 = dW2 dW2 = dt, dW1 dW2 = i dt,
/// dW2 dW1 = -i dt per channel, cross-channel products zero). The model
/// preserves the generator commutation and anticommutation relations
/// exactly when every integrand vanishes.
struct ItoIntegrands {
  OperatorMatrix ccr_dt;
  OperatorMatrix accr_dt;
  std::vector<OperatorMatrix> ccr_dw1, ccr_dw2;
  std::vector<OperatorMatrix> accr_dw1, accr_dw2;

  double max_norm() const;
};

ItoIntegrands ito_integrands(const ThetaContext& ctx, const StateSpaceModel& m);

/// Smallest singular value of the Gram matrix (trace inner product) of
/// {identity, generators}: positive iff the premise that the system
/// variables are linearly independent holds.
double generator_independence_margin(const GellMannBasis& basis);

/// First and second moments of the system variables under the (vacuum)
/// field state, with the residuals of the commutation (r_ccr) and
/// anticommutation (r_accr) relations tracked per state.
struct MomentState {
  double t = 0.0;
  Eigen::VectorXcd m;   // <x>
  Eigen::MatrixXcd M;   // <x x^T>
  double r_ccr = 0.0;   // max-abs of (M - M^T) - 2i ThetaMinus(m)
  double r_accr = 0.0;  // max-abs of (M + M^T) - (4/n) I - 2 ThetaPlus(m)
};

/// Moments of the initial state rho0: m_i = Tr(rho0 g_i), M from the
/// generator product rule, so both residuals start at numerical zero.
/// Throws DimensionError if rho0 is not a density matrix within `tol`
/// (Hermitian, unit trace, positive semidefinite).
MomentState init_moments(const ThetaContext& ctx, const Eigen::MatrixXcd& rho0,
                         double tol = 1e-9);

struct MomentTrajectory {
  std::vector<MomentState> points;
  double max_r_ccr = 0.0;
  double max_r_accr = 0.0;
};

/// Thrown when the moment flow leaves the finite range; carries the last
/// valid state.
class IntegrationDivergedError : public std::runtime_error {
 public:
  IntegrationDivergedError(std::string msg, MomentState last)
      : std::runtime_error(std::move(msg)), last_valid(std::move(last)) {}
  MomentState last_valid;
};

/// Classical fixed-step RK4 integration of the vacuum moment flow
///   dm/dt = A0 + A m
///   dM/dt = A0 m^T + m A0^T + A M + M A^T
///           + sum_k (B1k M B1k^T + B2k M B2k^T + i B1k M B2k^T - i B2k M B1k^T)
/// from s0 to t_end. Residuals are recorded at every accepted step. The
/// step is fixed for reproducible residual traces.
MomentTrajectory integrate_moments(const ThetaContext& ctx, const StateSpaceModel& m,
                                   const MomentState& s0, double t_end, double h);

}  // namespace sunq
