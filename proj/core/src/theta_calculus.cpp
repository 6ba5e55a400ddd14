#include "sunqsde/theta_calculus.hpp"

#include <cmath>
#include <complex>

namespace sunq {

using cd = std::complex<double>;

Eigen::VectorXd vec(const Eigen::MatrixXd& m) {
  return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

Eigen::VectorXcd vec(const Eigen::MatrixXcd& m) {
  return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

namespace {

// Entry (i,j) of the map is sum_k c_ijk beta_k, computed once per
// unordered pair and mirrored, so the (anti)symmetry of the result is
// bit-exact rather than a rounding accident.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> contract(
    const std::vector<double>& c, int s, bool antisymmetric,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& beta) {
  if (beta.size() != s)
    throw DimensionError("theta map: vector has length " + std::to_string(beta.size()) +
                         ", expected " + std::to_string(s));
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(s, s);
  out.setZero();
  for (int i = 0; i < s; ++i) {
    if (!antisymmetric) {
      Scalar acc{};
      for (int k = 0; k < s; ++k) acc += c[(i * s + i) * s + k] * beta[k];
      out(i, i) = acc;
    }
    for (int j = i + 1; j < s; ++j) {
      Scalar acc{};
      for (int k = 0; k < s; ++k) acc += c[(i * s + j) * s + k] * beta[k];
      out(i, j) = acc;
      out(j, i) = antisymmetric ? -acc : acc;
    }
  }
  return out;
}

}  // namespace

Eigen::MatrixXd ThetaContext::theta_minus(const Eigen::VectorXd& beta) const {
  return contract<double>(t_->f, s(), true, beta);
}

Eigen::MatrixXd ThetaContext::theta_plus(const Eigen::VectorXd& beta) const {
  return contract<double>(t_->d, s(), false, beta);
}

Eigen::MatrixXcd ThetaContext::theta_minus(const Eigen::VectorXcd& beta) const {
  return contract<cd>(t_->f, s(), true, beta);
}

Eigen::MatrixXcd ThetaContext::theta_plus(const Eigen::VectorXcd& beta) const {
  return contract<cd>(t_->d, s(), false, beta);
}

namespace {

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> perm_apply(
    int s, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& v) {
  if (v.size() != static_cast<Eigen::Index>(s) * s)
    throw DimensionError("tensor perm: vector has length " + std::to_string(v.size()) +
                         ", expected " + std::to_string(s * s));
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(v.size());
  for (int j = 0; j < s; ++j)
    for (int i = 0; i < s; ++i) out[j * s + i] = v[i * s + j];
  return out;
}

}  // namespace

Eigen::VectorXd ThetaContext::apply_tensor_perm(const Eigen::VectorXd& v) const {
  return perm_apply<double>(s(), v);
}

Eigen::VectorXcd ThetaContext::apply_tensor_perm(const Eigen::VectorXcd& v) const {
  return perm_apply<cd>(s(), v);
}

Eigen::MatrixXd ThetaContext::tensor_perm_dense() const {
  const int sz = s() * s();
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(sz, sz);
  for (int j = 0; j < s(); ++j)
    for (int i = 0; i < s(); ++i) p(j * s() + i, i * s() + j) = 1.0;
  return p;
}

namespace {

double max_abs(const Eigen::MatrixXcd& m) {
  return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

Eigen::VectorXcd random_cvector(GaussianRng& rng, int s) {
  Eigen::VectorXcd v(s);
  for (int i = 0; i < s; ++i) v[i] = cd(rng.normal(), rng.normal()) / std::sqrt(2.0);
  return v;
}

struct IdentityAccumulator {
  IdentityCheck check;

  explicit IdentityAccumulator(std::string id) { check.id = std::move(id); }

  void feed(int trial, const Eigen::MatrixXcd& defect, double scale) {
    for (int r = 0; r < defect.rows(); ++r)
      for (int c = 0; c < defect.cols(); ++c) {
        const double res = std::abs(defect(r, c)) / scale;
        if (res > check.max_residual) {
          check.max_residual = res;
          check.worst_index = {trial, r, c};
        }
      }
  }

  void finish(IdentityReport& report, double tol) {
    check.pass = check.max_residual < tol;
    report.checks.push_back(std::move(check));
  }
};

}  // namespace

IdentityReport verify_theta_identities(const ThetaContext& ctx, int trials, double tol,
                                       std::uint64_t seed) {
  if (trials < 1) throw DimensionError("verify_theta_identities: trials must be >= 1");
  const int s = ctx.s();
  const double two_over_n = 2.0 / ctx.n();
  GaussianRng rng(seed);

  IdentityAccumulator a1("theta_1"), a2("theta_2"), a3("theta_3"), a4("theta_4"),
      a5("theta_5"), a6("theta_6"), a7("theta_7");

  for (int trial = 0; trial < trials; ++trial) {
    const Eigen::VectorXcd beta = random_cvector(rng, s);
    const Eigen::VectorXcd gamma = random_cvector(rng, s);
    const double scale = 1.0 + beta.norm() * gamma.norm();

    const Eigen::MatrixXcd tm_b = ctx.theta_minus(beta);
    const Eigen::MatrixXcd tm_g = ctx.theta_minus(gamma);
    const Eigen::MatrixXcd tp_b = ctx.theta_plus(beta);
    const Eigen::MatrixXcd tp_g = ctx.theta_plus(gamma);

    // ThetaMinus(beta) gamma = -ThetaMinus(gamma) beta
    a1.feed(trial, tm_b * gamma + tm_g * beta, scale);
    // ThetaPlus(beta) gamma = ThetaPlus(gamma) beta
    a2.feed(trial, tp_b * gamma - tp_g * beta, scale);
    // ThetaMinus(beta) beta = 0
    a3.feed(trial, tm_b * beta, 1.0 + beta.norm() * beta.norm());
    // ThetaMinus(ThetaMinus(beta) gamma) = [ThetaMinus(beta), ThetaMinus(gamma)]
    a4.feed(trial, ctx.theta_minus(Eigen::VectorXcd(tm_b * gamma)) - (tm_b * tm_g - tm_g * tm_b),
            scale);
    // ThetaMinus(ThetaPlus(beta) gamma) = Tm(beta) Tp(gamma) + Tm(gamma) Tp(beta)
    a5.feed(trial,
            ctx.theta_minus(Eigen::VectorXcd(tp_b * gamma)) - (tm_b * tp_g + tm_g * tp_b),
            scale);
    // ThetaPlus(ThetaMinus(beta) gamma) = [Tp(beta), Tm(gamma)] = [Tm(beta), Tp(gamma)]
    {
      const Eigen::MatrixXcd lhs = ctx.theta_plus(Eigen::VectorXcd(tm_b * gamma));
      a6.feed(trial, lhs - (tp_b * tm_g - tm_g * tp_b), scale);
      a6.feed(trial, lhs - (tm_b * tp_g - tp_g * tm_b), scale);
    }
    // ThetaPlus(ThetaPlus(beta) gamma) = Tp(beta) Tp(gamma) - Tm(gamma) Tm(beta)
    //                                    - (2/n)(beta^T gamma I - beta gamma^T)
    {
      const cd dot = beta.cwiseProduct(gamma).sum();  // bilinear, no conjugation
      const Eigen::MatrixXcd rhs =
          tp_b * tp_g - tm_g * tm_b -
          two_over_n * (dot * Eigen::MatrixXcd::Identity(s, s) - beta * gamma.transpose());
      a7.feed(trial, ctx.theta_plus(Eigen::VectorXcd(tp_b * gamma)) - rhs, scale);
    }
  }

  IdentityReport report;
  report.tol = tol;
  a1.finish(report, tol);
  a2.finish(report, tol);
  a3.finish(report, tol);
  a4.finish(report, tol);
  a5.finish(report, tol);
  a6.finish(report, tol);
  a7.finish(report, tol);
  report.pass = true;
  for (const auto& c : report.checks) report.pass = report.pass && c.pass;
  return report;
}

IdentityReport verify_kron_identities(const ThetaContext& ctx, int trials, double tol,
                                      std::uint64_t seed) {
  if (trials < 1) throw DimensionError("verify_kron_identities: trials must be >= 1");
  const int s = ctx.s();
  const StructureTensors& t = ctx.tensors();
  GaussianRng rng(seed);

  IdentityReport report;
  report.tol = tol;

  // Stacked forms against the permutation, column by column.
  {
    double worst_f = 0.0, worst_d = 0.0;
    std::vector<int> widx_f = {0, 0}, widx_d = {0, 0};
    for (int k = 0; k < s; ++k) {
      const Eigen::VectorXd pf = ctx.apply_tensor_perm(Eigen::VectorXd(t.F_stacked.col(k)));
      const Eigen::VectorXd pd = ctx.apply_tensor_perm(Eigen::VectorXd(t.D_stacked.col(k)));
      for (int r = 0; r < s * s; ++r) {
        const double rf = std::abs(t.F_stacked(r, k) + pf[r]);
        const double rd = std::abs(t.D_stacked(r, k) - pd[r]);
        if (rf > worst_f) {
          worst_f = rf;
          widx_f = {r, k};
        }
        if (rd > worst_d) {
          worst_d = rd;
          widx_d = {r, k};
        }
      }
    }
    report.checks.push_back({"kron_F_odd", worst_f, widx_f, worst_f < tol});
    report.checks.push_back({"kron_D_even", worst_d, widx_d, worst_d < tol});
  }

  // F^T (A kron B) F invariant under swapping A and B, via
  // (A kron B) vec(M) = vec(B M A^T) applied to each stacked column.
  auto sandwich = [&](const std::vector<Eigen::MatrixXd>& mats, const Eigen::MatrixXd& a,
                      const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out(s, s);
    std::vector<Eigen::MatrixXd> cols(s);
    for (int k = 0; k < s; ++k) cols[k] = b * mats[k] * a.transpose();
    for (int j = 0; j < s; ++j)
      for (int k = 0; k < s; ++k) out(j, k) = (mats[j].array() * cols[k].array()).sum();
    return out;
  };

  // Stacked column k of F is vec(F_k) and likewise for D (cyclic symmetry
  // of the tensors), so the sandwiches reduce to trace contractions of
  // the adjoint matrices.
  IdentityAccumulator af("kron_F_sandwich"), ad("kron_D_sandwich");
  for (int trial = 0; trial < trials; ++trial) {
    Eigen::MatrixXd a(s, s), b(s, s);
    for (int r = 0; r < s; ++r)
      for (int c = 0; c < s; ++c) {
        a(r, c) = rng.normal();
        b(r, c) = rng.normal();
      }
    const double scale = 1.0 + a.norm() * b.norm();
    af.feed(trial, (sandwich(t.F_list, a, b) - sandwich(t.F_list, b, a)).cast<cd>(), scale);
    ad.feed(trial, (sandwich(t.D_list, a, b) - sandwich(t.D_list, b, a)).cast<cd>(), scale);
  }
  af.finish(report, tol);
  ad.finish(report, tol);

  report.pass = true;
  for (const auto& c : report.checks) report.pass = report.pass && c.pass;
  return report;
}

ThetaReconstruction reconstruct_theta_minus_generator(const ThetaContext& ctx,
                                                      const Eigen::MatrixXcd& G, double tol) {
  const int s = ctx.s();
  if (G.rows() != G.cols() || G.rows() != s)
    throw DimensionError("reconstruct: G must be square of size s = " + std::to_string(s));

  ThetaReconstruction out;
  out.g.resize(s);
  const double inv_n = 1.0 / ctx.n();
  for (int k = 0; k < s; ++k) {
    // Tr(F_k G) without forming the product.
    cd tr = 0.0;
    const Eigen::MatrixXd& fk = ctx.tensors().F_list[k];
    for (int r = 0; r < s; ++r)
      for (int c = 0; c < s; ++c) tr += fk(r, c) * G(c, r);
    out.g[k] = -inv_n * tr;
  }
  const double asym = max_abs(Eigen::MatrixXcd(G + G.transpose()));
  const double recon = max_abs(Eigen::MatrixXcd(ctx.theta_minus(out.g) - G));
  out.residual = std::max(asym, recon);
  out.is_image = out.residual < tol;
  return out;
}

double theta_minus_membership_residual(const ThetaContext& ctx, const Eigen::MatrixXcd& G) {
  const int s = ctx.s();
  if (G.rows() != G.cols() || G.rows() != s)
    throw DimensionError("membership residual: G must be square of size s");
  const StructureTensors& t = ctx.tensors();

  // Column k of the defect (I kron G) F + (G kron I) F - F G, using
  // (A kron B) vec(M) = vec(B M A^T) on the stacked columns vec(F_k).
  double worst = 0.0;
  const Eigen::MatrixXcd fg = t.F_stacked.cast<cd>() * G;
  for (int k = 0; k < s; ++k) {
    const Eigen::MatrixXcd fk = t.F_list[k].cast<cd>();
    const Eigen::MatrixXcd m = G * fk + fk * G.transpose();
    const Eigen::VectorXcd col = vec(m) - fg.col(k);
    worst = std::max(worst, col.cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace sunq
