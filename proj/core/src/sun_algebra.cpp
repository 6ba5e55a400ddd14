#include "sunqsde/sun_algebra.hpp"

#include <cmath>
#include <complex>
#include <functional>

namespace sunq {

using cd = std::complex<double>;

std::string GeneratorLabel::str() const {
  switch (kind) {
    case Kind::U:
      return "u_" + std::to_string(j) + "_" + std::to_string(k);
    case Kind::V:
      return "v_" + std::to_string(j) + "_" + std::to_string(k);
    case Kind::W:
    default:
      return "w_" + std::to_string(j);
  }
}

GellMannBasis build_generators(int n) {
  if (n < 2) throw DimensionError("build_generators: n must be >= 2, got " + std::to_string(n));

  GellMannBasis basis;
  basis.n = n;
  basis.s = n * n - 1;
  basis.generators.reserve(basis.s);
  basis.labels.reserve(basis.s);

  // u_{jk} = P_{j,k} + P_{k,j}
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(n, n);
      g(j, k) = 1.0;
      g(k, j) = 1.0;
      basis.generators.push_back(std::move(g));
      basis.labels.push_back({GeneratorLabel::Kind::U, j + 1, k + 1});
    }
  }
  // v_{jk} = i (P_{j,k} - P_{k,j})
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(n, n);
      g(j, k) = cd(0.0, 1.0);
      g(k, j) = cd(0.0, -1.0);
      basis.generators.push_back(std::move(g));
      basis.labels.push_back({GeneratorLabel::Kind::V, j + 1, k + 1});
    }
  }
  // w_l = -sqrt(2/(l(l+1))) (sum_{m=1..l} P_{m,m} - l P_{l+1,l+1})
  for (int l = 1; l <= n - 1; ++l) {
    const double c = -std::sqrt(2.0 / (static_cast<double>(l) * (l + 1)));
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(n, n);
    for (int m = 0; m < l; ++m) g(m, m) = c;
    g(l, l) = -c * static_cast<double>(l);
    basis.generators.push_back(std::move(g));
    basis.labels.push_back({GeneratorLabel::Kind::W, l, 0});
  }

  return basis;
}

namespace {

// Tr(A B) without forming the product.
cd trace_prod(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a.array() * b.transpose().array()).sum();
}

}  // namespace

StructureTensors structure_constants(const GellMannBasis& basis, double tol) {
  const int n = basis.n;
  const int s = basis.s;
  if (n < 2 || static_cast<int>(basis.generators.size()) != s)
    throw DimensionError("structure_constants: basis has wrong size");

  // Orthonormality gate: Tr(g_i g_j) = 2 delta_ij.
  for (int i = 0; i < s; ++i) {
    for (int j = i; j < s; ++j) {
      const cd t = trace_prod(basis.generators[i], basis.generators[j]);
      const double expected = (i == j) ? 2.0 : 0.0;
      if (std::abs(t - expected) > tol)
        throw InconsistentBasisError(
            "structure_constants: Tr(g_" + std::to_string(i) + " g_" + std::to_string(j) +
            ") = " + std::to_string(t.real()) + " violates orthonormality");
    }
  }

  StructureTensors t;
  t.n = n;
  t.s = s;
  t.f.assign(static_cast<std::size_t>(s) * s * s, 0.0);
  t.d.assign(static_cast<std::size_t>(s) * s * s, 0.0);

  // Cache all pair products once; every trace below reuses them.
  std::vector<Eigen::MatrixXcd> prod(static_cast<std::size_t>(s) * s);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j)
      prod[i * s + j] = basis.generators[i] * basis.generators[j];

  auto fset = [&](int i, int j, int k, double v) { t.f[(i * s + j) * s + k] = v; };
  auto dset = [&](int i, int j, int k, double v) { t.d[(i * s + j) * s + k] = v; };

  double worst_imag = 0.0;

  // f: only strictly increasing triples can be nonzero; propagate by sign.
  for (int i = 0; i < s; ++i) {
    for (int j = i + 1; j < s; ++j) {
      const Eigen::MatrixXcd comm = prod[i * s + j] - prod[j * s + i];
      for (int k = j + 1; k < s; ++k) {
        const cd raw = trace_prod(comm, basis.generators[k]) / cd(0.0, 4.0);
        worst_imag = std::max(worst_imag, std::abs(raw.imag()));
        const double v = raw.real();
        fset(i, j, k, v);
        fset(j, k, i, v);
        fset(k, i, j, v);
        fset(j, i, k, -v);
        fset(i, k, j, -v);
        fset(k, j, i, -v);
      }
    }
  }

  // d: canonical i <= j <= k, propagated verbatim to all permutations.
  for (int i = 0; i < s; ++i) {
    for (int j = i; j < s; ++j) {
      const Eigen::MatrixXcd anti = prod[i * s + j] + prod[j * s + i];
      for (int k = j; k < s; ++k) {
        const cd raw = trace_prod(anti, basis.generators[k]) / 4.0;
        worst_imag = std::max(worst_imag, std::abs(raw.imag()));
        const double v = raw.real();
        dset(i, j, k, v);
        dset(i, k, j, v);
        dset(j, i, k, v);
        dset(j, k, i, v);
        dset(k, i, j, v);
        dset(k, j, i, v);
      }
    }
  }

  if (worst_imag > tol)
    throw InternalConsistencyError(
        "structure_constants: extracted entry has imaginary residue " + std::to_string(worst_imag));

  // Adjoint matrices and their stacked forms. Block i of the stacked
  // matrix is F_i^T, so that stacking the columns of ThetaMinus(beta)
  // equals F_stacked * beta.
  t.F_list.resize(s);
  t.D_list.resize(s);
  for (int i = 0; i < s; ++i) {
    t.F_list[i].resize(s, s);
    t.D_list[i].resize(s, s);
    for (int j = 0; j < s; ++j)
      for (int k = 0; k < s; ++k) {
        t.F_list[i](j, k) = t.f_at(i, j, k);
        t.D_list[i](j, k) = t.d_at(i, j, k);
      }
  }
  t.F_stacked.resize(s * s, s);
  t.D_stacked.resize(s * s, s);
  for (int i = 0; i < s; ++i) {
    t.F_stacked.block(i * s, 0, s, s) = t.F_list[i].transpose();
    t.D_stacked.block(i * s, 0, s, s) = t.D_list[i].transpose();
  }

  return t;
}

namespace {

// Running maximum with deterministic ties: the first (lexicographically
// smallest, given loop order) index tuple wins.
struct WorstTracker {
  double max_res = 0.0;
  std::vector<int> worst;

  void update(double r, std::initializer_list<int> idx) {
    if (r > max_res) {
      max_res = r;
      worst.assign(idx);
    }
  }
};

}  // namespace

IdentityReport verify_structure_identities(const StructureTensors& t, double tol) {
  const int s = t.s;
  const int n = t.n;
  const double* f = t.f.data();
  const double* d = t.d.data();
  const auto at = [s](const double* p, int i, int j, int k) { return p[(i * s + j) * s + k]; };

  IdentityReport report;
  report.tol = tol;

  // sum_m f_ilm f_mjk + f_jlm f_imk + f_klm f_ijm = 0
  {
    WorstTracker w;
    for (int i = 0; i < s; ++i)
      for (int l = 0; l < s; ++l)
        for (int j = 0; j < s; ++j)
          for (int k = 0; k < s; ++k) {
            double acc = 0.0;
            for (int m = 0; m < s; ++m)
              acc += at(f, i, l, m) * at(f, m, j, k) + at(f, j, l, m) * at(f, i, m, k) +
                     at(f, k, l, m) * at(f, i, j, m);
            w.update(std::abs(acc), {i, l, j, k});
          }
    report.checks.push_back({"ff_jacobi", w.max_res, w.worst, w.max_res < tol});
  }

  // sum_m f_ilm d_mjk + f_jlm d_imk + f_klm d_ijm = 0
  {
    WorstTracker w;
    for (int i = 0; i < s; ++i)
      for (int l = 0; l < s; ++l)
        for (int j = 0; j < s; ++j)
          for (int k = 0; k < s; ++k) {
            double acc = 0.0;
            for (int m = 0; m < s; ++m)
              acc += at(f, i, l, m) * at(d, m, j, k) + at(f, j, l, m) * at(d, i, m, k) +
                     at(f, k, l, m) * at(d, i, j, m);
            w.update(std::abs(acc), {i, l, j, k});
          }
    report.checks.push_back({"fd_mixed", w.max_res, w.worst, w.max_res < tol});
  }

  // sum_k f_ilk f_mjk = (2/n)(d_im d_lj - d_ij d_lm) + sum_k (d_imk d_ljk - d_ijk d_lmk)
  {
    WorstTracker w;
    const double two_over_n = 2.0 / n;
    for (int i = 0; i < s; ++i)
      for (int l = 0; l < s; ++l)
        for (int m = 0; m < s; ++m)
          for (int j = 0; j < s; ++j) {
            double lhs = 0.0, rhs = 0.0;
            for (int k = 0; k < s; ++k) {
              lhs += at(f, i, l, k) * at(f, m, j, k);
              rhs += at(d, i, m, k) * at(d, l, j, k) - at(d, i, j, k) * at(d, l, m, k);
            }
            rhs += two_over_n * ((i == m && l == j ? 1.0 : 0.0) - (i == j && l == m ? 1.0 : 0.0));
            w.update(std::abs(lhs - rhs), {i, l, m, j});
          }
    report.checks.push_back({"ff_expansion", w.max_res, w.worst, w.max_res < tol});
  }

  // sum_{m,k} f_imk f_jmk = n delta_ij
  {
    WorstTracker w;
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j) {
        double acc = 0.0;
        for (int m = 0; m < s; ++m)
          for (int k = 0; k < s; ++k) acc += at(f, i, m, k) * at(f, j, m, k);
        const double expected = (i == j) ? static_cast<double>(n) : 0.0;
        w.update(std::abs(acc - expected), {i, j});
      }
    report.checks.push_back({"ff_contraction", w.max_res, w.worst, w.max_res < tol});
  }

  // Matrix-level identities on the adjoint family.
  auto span_f = [&](int i, int j) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(s, s);
    for (int k = 0; k < s; ++k) acc += at(f, i, j, k) * t.F_list[k];
    return acc;
  };
  auto span_fd = [&](int i, int j) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(s, s);
    for (int k = 0; k < s; ++k) acc += at(f, i, j, k) * t.D_list[k];
    return acc;
  };
  auto span_df = [&](int i, int j) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(s, s);
    for (int k = 0; k < s; ++k) acc += at(d, i, j, k) * t.F_list[k];
    return acc;
  };
  auto span_dd = [&](int i, int j) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(s, s);
    for (int k = 0; k < s; ++k) acc += at(d, i, j, k) * t.D_list[k];
    return acc;
  };

  auto check_matrix_family =
      [&](const std::string& id,
          const std::function<Eigen::MatrixXd(int, int)>& defect) {
        WorstTracker w;
        for (int i = 0; i < s; ++i)
          for (int j = 0; j < s; ++j) {
            const Eigen::MatrixXd m = defect(i, j);
            for (int r = 0; r < s; ++r)
              for (int c = 0; c < s; ++c) w.update(std::abs(m(r, c)), {i, j, r, c});
          }
        report.checks.push_back({id, w.max_res, w.worst, w.max_res < tol});
      };

  // [F_i, F_j] = -sum_k f_ijk F_k
  check_matrix_family("FF_commutator", [&](int i, int j) -> Eigen::MatrixXd {
    return t.F_list[i] * t.F_list[j] - t.F_list[j] * t.F_list[i] + span_f(i, j);
  });
  // [F_i, D_j] = -sum_k f_ijk D_k
  check_matrix_family("FD_commutator", [&](int i, int j) -> Eigen::MatrixXd {
    return t.F_list[i] * t.D_list[j] - t.D_list[j] * t.F_list[i] + span_fd(i, j);
  });
  // F_i D_j + F_j D_i = sum_k d_ijk F_k
  check_matrix_family("FD_symmetrized", [&](int i, int j) -> Eigen::MatrixXd {
    return t.F_list[i] * t.D_list[j] + t.F_list[j] * t.D_list[i] - span_df(i, j);
  });
  // D_i F_j + D_j F_i = sum_k d_ijk F_k
  check_matrix_family("DF_symmetrized", [&](int i, int j) -> Eigen::MatrixXd {
    return t.D_list[i] * t.F_list[j] + t.D_list[j] * t.F_list[i] - span_df(i, j);
  });
  // (D_i D_j - F_j F_i)_{ml} = sum_k d_ijk (D_k)_{ml} + (2/n)(d_ij d_ml - d_im d_jl)
  check_matrix_family("DD_expansion", [&](int i, int j) -> Eigen::MatrixXd {
    Eigen::MatrixXd rhs = span_dd(i, j);
    if (i == j) rhs += (2.0 / n) * Eigen::MatrixXd::Identity(s, s);
    rhs(i, j) -= 2.0 / n;
    return t.D_list[i] * t.D_list[j] - t.F_list[j] * t.F_list[i] - rhs;
  });

  // F^T F = n I
  {
    WorstTracker w;
    const Eigen::MatrixXd g =
        t.F_stacked.transpose() * t.F_stacked - static_cast<double>(n) * Eigen::MatrixXd::Identity(s, s);
    for (int r = 0; r < s; ++r)
      for (int c = 0; c < s; ++c) w.update(std::abs(g(r, c)), {r, c});
    report.checks.push_back({"FtF_scaled_identity", w.max_res, w.worst, w.max_res < tol});
  }

  report.pass = true;
  for (const auto& c : report.checks) report.pass = report.pass && c.pass;
  return report;
}

}  // namespace sunq
