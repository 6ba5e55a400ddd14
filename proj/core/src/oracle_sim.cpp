#include "sunqsde/oracle_sim.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace sunq {

using cd = std::complex<double>;

OperatorMatrix::OperatorMatrix(int rows, int cols, int dim)
    : rows_(rows), cols_(cols), dim_(dim) {
  entries_.assign(static_cast<std::size_t>(rows) * cols, Eigen::MatrixXcd::Zero(dim, dim));
}

OperatorMatrix OperatorMatrix::transpose() const {
  OperatorMatrix out(cols_, rows_, dim_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
  return out;
}

OperatorMatrix OperatorMatrix::operator+(const OperatorMatrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_ || dim_ != other.dim_)
    throw DimensionError("OperatorMatrix: shape mismatch in +");
  OperatorMatrix out = *this;
  for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] += other.entries_[i];
  return out;
}

OperatorMatrix OperatorMatrix::operator-(const OperatorMatrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_ || dim_ != other.dim_)
    throw DimensionError("OperatorMatrix: shape mismatch in -");
  OperatorMatrix out = *this;
  for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] -= other.entries_[i];
  return out;
}

OperatorMatrix OperatorMatrix::operator*(const OperatorMatrix& other) const {
  if (cols_ != other.rows_ || dim_ != other.dim_)
    throw DimensionError("OperatorMatrix: shape mismatch in *");
  OperatorMatrix out(rows_, other.cols_, dim_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < other.cols_; ++j) {
      Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim_, dim_);
      for (int k = 0; k < cols_; ++k) acc += at(i, k) * other.at(k, j);
      out.at(i, j) = std::move(acc);
    }
  return out;
}

double OperatorMatrix::max_op_norm() const {
  double worst = 0.0;
  for (const auto& e : entries_) {
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(e);
    if (svd.singularValues().size())
      worst = std::max(worst, svd.singularValues()(0));
  }
  return worst;
}

OperatorMatrix operator*(const cd& c, const OperatorMatrix& x) {
  OperatorMatrix out = x;
  for (int i = 0; i < out.rows(); ++i)
    for (int j = 0; j < out.cols(); ++j) out.at(i, j) *= c;
  return out;
}

OperatorMatrix operator*(const Eigen::MatrixXcd& scalars, const OperatorMatrix& x) {
  if (scalars.cols() != x.rows())
    throw DimensionError("OperatorMatrix: scalar matrix shape mismatch in *");
  OperatorMatrix out(static_cast<int>(scalars.rows()), x.cols(), x.dim());
  for (int i = 0; i < out.rows(); ++i)
    for (int j = 0; j < out.cols(); ++j) {
      Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(x.dim(), x.dim());
      for (int k = 0; k < x.rows(); ++k) acc += scalars(i, k) * x.at(k, j);
      out.at(i, j) = std::move(acc);
    }
  return out;
}

OperatorMatrix operator*(const OperatorMatrix& x, const Eigen::MatrixXcd& scalars) {
  if (x.cols() != scalars.rows())
    throw DimensionError("OperatorMatrix: scalar matrix shape mismatch in *");
  OperatorMatrix out(x.rows(), static_cast<int>(scalars.cols()), x.dim());
  for (int i = 0; i < out.rows(); ++i)
    for (int j = 0; j < out.cols(); ++j) {
      Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(x.dim(), x.dim());
      for (int k = 0; k < x.cols(); ++k) acc += x.at(i, k) * scalars(k, j);
      out.at(i, j) = std::move(acc);
    }
  return out;
}

OperatorMatrix generator_column(const GellMannBasis& basis) {
  OperatorMatrix x(basis.s, 1, basis.n);
  for (int i = 0; i < basis.s; ++i) x.at(i, 0) = basis.generators[i];
  return x;
}

OperatorMatrix embed_vector(const Eigen::VectorXcd& v, int dim) {
  OperatorMatrix out(static_cast<int>(v.size()), 1, dim);
  for (int i = 0; i < v.size(); ++i)
    out.at(i, 0) = v[i] * Eigen::MatrixXcd::Identity(dim, dim);
  return out;
}

namespace {

void require_column_pair(const OperatorMatrix& x, const OperatorMatrix& y) {
  if (x.cols() != 1 || y.cols() != 1)
    throw DimensionError("opmat bracket: inputs must be operator columns");
  if (x.dim() != y.dim())
    throw DimensionError("opmat bracket: entry dimensions differ");
}

}  // namespace

OperatorMatrix opmat_bracket(const OperatorMatrix& x, const OperatorMatrix& y) {
  require_column_pair(x, y);
  return x * y.transpose() - (y * x.transpose()).transpose();
}

OperatorMatrix opmat_antibracket(const OperatorMatrix& x, const OperatorMatrix& y) {
  require_column_pair(x, y);
  return x * y.transpose() + (y * x.transpose()).transpose();
}

namespace {

OperatorMatrix theta_contract_op(const std::vector<double>& c, int s,
                                 const OperatorMatrix& v) {
  if (v.cols() != 1 || v.rows() != s)
    throw DimensionError("theta map: operator column has wrong shape");
  OperatorMatrix out(s, s, v.dim());
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) {
      Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(v.dim(), v.dim());
      for (int k = 0; k < s; ++k) {
        const double w = c[(i * s + j) * s + k];
        if (w != 0.0) acc += w * v.at(k, 0);
      }
      out.at(i, j) = std::move(acc);
    }
  return out;
}

}  // namespace

OperatorMatrix theta_minus_op(const ThetaContext& ctx, const OperatorMatrix& v) {
  return theta_contract_op(ctx.tensors().f, ctx.s(), v);
}

OperatorMatrix theta_plus_op(const ThetaContext& ctx, const OperatorMatrix& v) {
  return theta_contract_op(ctx.tensors().d, ctx.s(), v);
}

double ItoIntegrands::max_norm() const {
  double worst = std::max(ccr_dt.max_op_norm(), accr_dt.max_op_norm());
  for (const auto& g : ccr_dw1) worst = std::max(worst, g.max_op_norm());
  for (const auto& g : ccr_dw2) worst = std::max(worst, g.max_op_norm());
  for (const auto& g : accr_dw1) worst = std::max(worst, g.max_op_norm());
  for (const auto& g : accr_dw2) worst = std::max(worst, g.max_op_norm());
  return worst;
}

ItoIntegrands ito_integrands(const ThetaContext& ctx, const StateSpaceModel& m) {
  validate_dimensions(m);
  if (m.n != ctx.n())
    throw DimensionError("ito_integrands: model does not match tensor context");
  const cd im(0.0, 1.0);

  const GellMannBasis basis = build_generators(m.n);
  const OperatorMatrix x = generator_column(basis);
  const OperatorMatrix xt = x.transpose();
  const OperatorMatrix xxt = x * xt;

  // dt piece of dx, and the per-channel noise pieces.
  const OperatorMatrix dx_dt =
      embed_vector(m.A0.cast<cd>(), m.n) + m.A.cast<cd>() * x;
  std::vector<OperatorMatrix> v1(m.nw), v2(m.nw);
  for (int k = 0; k < m.nw; ++k) {
    v1[k] = m.B1[k].cast<cd>() * x;
    v2[k] = m.B2[k].cast<cd>() * x;
  }

  // d(xx^T) = (dx)x^T + x(dx)^T + (dx)(dx)^T with the Ito products
  // collapsed into the dt integrand.
  OperatorMatrix g_dt = dx_dt * xt + x * dx_dt.transpose();
  for (int k = 0; k < m.nw; ++k) {
    g_dt = g_dt + v1[k] * v1[k].transpose() + v2[k] * v2[k].transpose() +
           im * (v1[k] * v2[k].transpose()) - im * (v2[k] * v1[k].transpose());
  }

  ItoIntegrands out;
  out.ccr_dt = (g_dt - g_dt.transpose()) - (2.0 * im) * theta_minus_op(ctx, dx_dt);
  out.accr_dt = (g_dt + g_dt.transpose()) - cd(2.0) * theta_plus_op(ctx, dx_dt);
  out.ccr_dw1.reserve(m.nw);
  for (int k = 0; k < m.nw; ++k) {
    const OperatorMatrix w1 = v1[k] * xt + x * v1[k].transpose();
    const OperatorMatrix w2 = v2[k] * xt + x * v2[k].transpose();
    out.ccr_dw1.push_back((w1 - w1.transpose()) - (2.0 * im) * theta_minus_op(ctx, v1[k]));
    out.ccr_dw2.push_back((w2 - w2.transpose()) - (2.0 * im) * theta_minus_op(ctx, v2[k]));
    out.accr_dw1.push_back((w1 + w1.transpose()) - cd(2.0) * theta_plus_op(ctx, v1[k]));
    out.accr_dw2.push_back((w2 + w2.transpose()) - cd(2.0) * theta_plus_op(ctx, v2[k]));
  }
  return out;
}

double generator_independence_margin(const GellMannBasis& basis) {
  const int count = basis.s + 1;
  Eigen::MatrixXcd gram(count, count);
  std::vector<Eigen::MatrixXcd> all;
  all.reserve(count);
  all.push_back(Eigen::MatrixXcd::Identity(basis.n, basis.n));
  for (const auto& g : basis.generators) all.push_back(g);
  for (int i = 0; i < count; ++i)
    for (int j = 0; j < count; ++j) gram(i, j) = (all[i].adjoint() * all[j]).trace();
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(gram);
  return svd.singularValues()(count - 1);
}

namespace {

void compute_residuals(const ThetaContext& ctx, MomentState& st) {
  const int s = ctx.s();
  const Eigen::MatrixXcd ccr =
      (st.M - st.M.transpose()) - cd(0.0, 2.0) * ctx.theta_minus(st.m);
  const Eigen::MatrixXcd accr =
      (st.M + st.M.transpose()) -
      (4.0 / ctx.n()) * Eigen::MatrixXcd::Identity(s, s) - 2.0 * ctx.theta_plus(st.m);
  st.r_ccr = ccr.cwiseAbs().maxCoeff();
  st.r_accr = accr.cwiseAbs().maxCoeff();
}

}  // namespace

MomentState init_moments(const ThetaContext& ctx, const Eigen::MatrixXcd& rho0, double tol) {
  const int n = ctx.n();
  if (rho0.rows() != n || rho0.cols() != n)
    throw DimensionError("init_moments: rho0 must be " + std::to_string(n) + "x" +
                         std::to_string(n));
  if ((rho0 - rho0.adjoint()).cwiseAbs().maxCoeff() > tol)
    throw DimensionError("init_moments: rho0 is not Hermitian");
  if (std::abs(rho0.trace() - cd(1.0)) > tol)
    throw DimensionError("init_moments: rho0 does not have unit trace");
  {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rho0);
    if (eig.eigenvalues().minCoeff() < -tol)
      throw DimensionError("init_moments: rho0 is not positive semidefinite");
  }

  const GellMannBasis basis = build_generators(n);
  const int s = ctx.s();
  MomentState st;
  st.t = 0.0;
  st.m.resize(s);
  for (int i = 0; i < s; ++i) st.m[i] = (rho0 * basis.generators[i]).trace();
  // Second moments through the product rule, so the relations hold by
  // construction at t = 0.
  st.M = (2.0 / n) * Eigen::MatrixXcd::Identity(s, s) +
         cd(0.0, 1.0) * ctx.theta_minus(st.m) + ctx.theta_plus(st.m);
  compute_residuals(ctx, st);
  return st;
}

MomentTrajectory integrate_moments(const ThetaContext& ctx, const StateSpaceModel& model,
                                   const MomentState& s0, double t_end, double h) {
  validate_dimensions(model);
  if (model.n != ctx.n())
    throw DimensionError("integrate_moments: model does not match tensor context");
  if (h <= 0.0) throw DimensionError("integrate_moments: step size must be positive");
  if (t_end < s0.t) throw DimensionError("integrate_moments: t_end is before the initial time");

  const Eigen::MatrixXcd a = model.A.cast<cd>();
  const Eigen::VectorXcd a0 = model.A0.cast<cd>();
  std::vector<Eigen::MatrixXcd> b1(model.nw), b2(model.nw);
  for (int k = 0; k < model.nw; ++k) {
    b1[k] = model.B1[k].cast<cd>();
    b2[k] = model.B2[k].cast<cd>();
  }
  const cd im(0.0, 1.0);

  auto deriv_m = [&](const Eigen::VectorXcd& m) -> Eigen::VectorXcd { return a0 + a * m; };
  auto deriv_M = [&](const Eigen::VectorXcd& m, const Eigen::MatrixXcd& M) -> Eigen::MatrixXcd {
    Eigen::MatrixXcd dM =
        a0 * m.transpose() + m * a0.transpose() + a * M + M * a.transpose();
    for (int k = 0; k < model.nw; ++k) {
      dM += b1[k] * M * b1[k].transpose() + b2[k] * M * b2[k].transpose() +
            im * (b1[k] * M * b2[k].transpose()) - im * (b2[k] * M * b1[k].transpose());
    }
    return dM;
  };

  MomentTrajectory traj;
  MomentState st = s0;
  compute_residuals(ctx, st);
  traj.points.push_back(st);
  traj.max_r_ccr = st.r_ccr;
  traj.max_r_accr = st.r_accr;

  while (st.t < t_end - 1e-12) {
    const double step = std::min(h, t_end - st.t);

    const Eigen::VectorXcd k1m = deriv_m(st.m);
    const Eigen::MatrixXcd k1M = deriv_M(st.m, st.M);
    const Eigen::VectorXcd k2m = deriv_m(st.m + 0.5 * step * k1m);
    const Eigen::MatrixXcd k2M = deriv_M(st.m + 0.5 * step * k1m, st.M + 0.5 * step * k1M);
    const Eigen::VectorXcd k3m = deriv_m(st.m + 0.5 * step * k2m);
    const Eigen::MatrixXcd k3M = deriv_M(st.m + 0.5 * step * k2m, st.M + 0.5 * step * k2M);
    const Eigen::VectorXcd k4m = deriv_m(st.m + step * k3m);
    const Eigen::MatrixXcd k4M = deriv_M(st.m + step * k3m, st.M + step * k3M);

    MomentState next;
    next.t = st.t + step;
    next.m = st.m + (step / 6.0) * (k1m + 2.0 * k2m + 2.0 * k3m + k4m);
    next.M = st.M + (step / 6.0) * (k1M + 2.0 * k2M + 2.0 * k3M + k4M);

    if (!next.m.allFinite() || !next.M.allFinite())
      throw IntegrationDivergedError(
          "integrate_moments: state became non-finite at t = " + std::to_string(next.t), st);

    compute_residuals(ctx, next);
    traj.max_r_ccr = std::max(traj.max_r_ccr, next.r_ccr);
    traj.max_r_accr = std::max(traj.max_r_accr, next.r_accr);
    traj.points.push_back(next);
    st = std::move(next);
  }
  return traj;
}

}  // namespace sunq
