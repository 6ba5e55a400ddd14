#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "sunqsde/common.hpp"
#include "sunqsde/report.hpp"

namespace sunq {

/// Tag of one generator: u_{jk} (symmetric off-diagonal pair),
/// v_{jk} (antisymmetric pair), or w_l (diagonal).
struct GeneratorLabel {
  enum class Kind { U, V, W };
  Kind kind = Kind::U;
  int j = 0;  // for W this is l
  int k = 0;  // unused for W

  std::string str() const;
};

/// The generalized Gell-Mann generators of SU(n): s = n^2 - 1 Hermitian
/// traceless n x n matrices with Tr(g_i g_j) = 2 delta_ij.
///
/// Construction, with P_{k,l} = e_k e_l^T:
///   u_{jk} = P_{j,k} + P_{k,j}                      1 <= j < k <= n
///   v_{jk} = i (P_{j,k} - P_{k,j})                  1 <= j < k <= n
///   w_l    = -sqrt(2/(l(l+1))) (sum_{m<=l} P_{m,m} - l P_{l+1,l+1})
///
/// Order is fixed for reproducible tensors: all u by lexicographic (j,k),
/// then all v by lexicographic (j,k), then w_1..w_{n-1}. Note the leading
/// minus sign on w_l; sign conventions for the diagonal family differ
/// across the literature, and every identity checked here is insensitive
/// to it.
struct GellMannBasis {
  int n = 0;
  int s = 0;
  std::vector<Eigen::MatrixXcd> generators;
  std::vector<GeneratorLabel> labels;
};

/// Builds the basis for a given level count. Throws DimensionError for n < 2.
GellMannBasis build_generators(int n);

/// The structure constants of SU(n) and their derived matrices.
///
/// f and d are stored as dense rank-3 tensors of extent s. Each entry is
/// computed once for a canonical index ordering and propagated to the
/// other permutations by sign (f) or verbatim (d), so antisymmetry and
/// symmetry hold exactly as stored, not just within tolerance.
struct StructureTensors {
  int n = 0;
  int s = 0;
  std::vector<double> f;  // f[(i*s + j)*s + k] = f_ijk, completely antisymmetric
  std::vector<double> d;  // d[(i*s + j)*s + k] = d_ijk, completely symmetric

  std::vector<Eigen::MatrixXd> F_list;  // (F_i)_{jk} = f_ijk, antisymmetric
  std::vector<Eigen::MatrixXd> D_list;  // (D_i)_{jk} = d_ijk, symmetric
  Eigen::MatrixXd F_stacked;            // (F_1, ..., F_s)^T, s^2 x s
  Eigen::MatrixXd D_stacked;            // (D_1, ..., D_s)^T, s^2 x s

  double f_at(int i, int j, int k) const { return f[(i * s + j) * s + k]; }
  double d_at(int i, int j, int k) const { return d[(i * s + j) * s + k]; }
};

/// Extracts f_ijk = Tr([g_i, g_j] g_k) / (4i) and
/// d_ijk = Tr({g_i, g_j} g_k) / 4 from the basis. These divisors are the
/// ones consistent with the Tr(g_i g_j) = 2 delta_ij normalization.
///
/// Throws InconsistentBasisError if the basis fails orthonormality, and
/// InternalConsistencyError if an extracted entry keeps an imaginary
/// residue above `tol`.
StructureTensors structure_constants(const GellMannBasis& basis,
                                     double tol = kDefaultTol);

/// Exhaustively checks the tensor identities (Jacobi, mixed f/d, the
/// ff-expansion with its 2/n delta terms, the f-contraction), the five
/// adjoint-matrix identities, and F^T F = n I. Failures are reported,
/// never thrown.
///
/// Check ids: "ff_jacobi", "fd_mixed", "ff_expansion", "ff_contraction",
/// "FF_commutator", "FD_commutator", "FD_symmetrized", "DF_symmetrized",
/// "DD_expansion", "FtF_scaled_identity".
IdentityReport verify_structure_identities(const StructureTensors& t,
                                           double tol = kDefaultTol);

}  // namespace sunq
