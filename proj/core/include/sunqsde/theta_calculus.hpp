#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "sunqsde/common.hpp"
#include "sunqsde/report.hpp"
#include "sunqsde/sun_algebra.hpp"

namespace sunq {

/// Column-stacking of a matrix.
Eigen::VectorXd vec(const Eigen::MatrixXd& m);
Eigen::VectorXcd vec(const Eigen::MatrixXcd& m);

/// The ThetaMinus / ThetaPlus maps over a fixed set of structure tensors.
///
/// ThetaMinus(beta) is the s x s matrix with entry (i,j) = sum_k f_ijk beta_k
/// (always antisymmetric); ThetaPlus uses d and is symmetric. Both accept
/// complex input; callers holding row data (a channel row of a coupling
/// matrix, say) transpose it first, which is the convention everywhere in
/// this library. The symmetry of the result is enforced structurally:
/// each entry is computed once and mirrored, so transposition identities
/// hold at storage precision.
///
/// The context also exposes the tensor permutation matrix (the map
/// vec(M) -> vec(M^T)) as an O(s^2) index permutation; a dense
/// materialization is available for tests.
///
/// The context borrows the tensors; keep them alive while it is used.
class ThetaContext {
 public:
  explicit ThetaContext(const StructureTensors& tensors) : t_(&tensors) {}

  int n() const { return t_->n; }
  int s() const { return t_->s; }
  const StructureTensors& tensors() const { return *t_; }

  Eigen::MatrixXd theta_minus(const Eigen::VectorXd& beta) const;
  Eigen::MatrixXd theta_plus(const Eigen::VectorXd& beta) const;
  Eigen::MatrixXcd theta_minus(const Eigen::VectorXcd& beta) const;
  Eigen::MatrixXcd theta_plus(const Eigen::VectorXcd& beta) const;

  /// Applies the tensor permutation to a stacked s^2 vector:
  /// out[vec index of (i,j)] = in[vec index of (j,i)].
  Eigen::VectorXd apply_tensor_perm(const Eigen::VectorXd& v) const;
  Eigen::VectorXcd apply_tensor_perm(const Eigen::VectorXcd& v) const;

  /// Dense s^2 x s^2 permutation matrix, for tests.
  Eigen::MatrixXd tensor_perm_dense() const;

 private:
  const StructureTensors* t_;
};

/// Randomized check of the seven ThetaMinus/ThetaPlus product identities
/// on `trials` seeded complex vector pairs. Residuals are normalized by
/// (1 + |beta| |gamma|). Check ids "theta_1" .. "theta_7"; the worst index
/// is {trial, row, col}.
IdentityReport verify_theta_identities(const ThetaContext& ctx, int trials,
                                       double tol = kDefaultTol,
                                       std::uint64_t seed = 1);

/// Checks the stacked matrices against the tensor permutation:
/// (i) F = -P F and (ii) D = P D hold at storage precision;
/// (iii) F^T (A kron B) F and (iv) D^T (A kron B) D are invariant under
/// swapping A and B, on `trials` random real matrix pairs with residual
/// normalized by (1 + |A| |B|). Ids "kron_F_odd", "kron_D_even",
/// "kron_F_sandwich", "kron_D_sandwich".
IdentityReport verify_kron_identities(const ThetaContext& ctx, int trials,
                                      double tol = kDefaultTol,
                                      std::uint64_t seed = 1);

/// Result of inverting G = ThetaMinus(g).
struct ThetaReconstruction {
  Eigen::VectorXcd g;      // -(1/n) (Tr(F_1 G), ..., Tr(F_s G))^T
  double residual = 0.0;   // max(|G + G^T|, |ThetaMinus(g) - G|), max-abs entry
  bool is_image = false;   // residual < tol
};

/// Recovers the unique g with ThetaMinus(g) = G, when G is such an image.
/// Never throws on non-images: the residual reports how far G is from the
/// image set, so callers can report which condition failed and by how
/// much. Throws DimensionError for a non-square or wrongly sized G.
ThetaReconstruction reconstruct_theta_minus_generator(const ThetaContext& ctx,
                                                      const Eigen::MatrixXcd& G,
                                                      double tol = kDefaultTol);

/// Residual of the matrix-level membership condition
/// (I kron G) F + (G kron I) F - F G = 0, which vanishes exactly when G is
/// a ThetaMinus image. Used by tests to cross-check the reconstruction
/// residual.
double theta_minus_membership_residual(const ThetaContext& ctx,
                                       const Eigen::MatrixXcd& G);

}  // namespace sunq
