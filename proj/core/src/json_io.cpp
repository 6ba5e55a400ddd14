#include "sunqsde/json_io.hpp"

#include <cstdio>

#include "json.hpp"

namespace sunq {

using json = nlohmann::ordered_json;
using cd = std::complex<double>;

namespace {

json parse(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw SchemaError("input is not valid JSON");
  return j;
}

const json& member(const json& j, const std::string& key) {
  if (!j.is_object()) throw SchemaError("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(key + ": missing field");
  return *it;
}

double get_real(const json& j, const std::string& path) {
  if (j.is_array())
    throw SchemaError(path + ": expected a real number, found an array (all entries are real)");
  if (!j.is_number()) throw SchemaError(path + ": expected a real number");
  return j.get<double>();
}

int get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError(path + ": expected an integer");
  return j.get<int>();
}

Eigen::VectorXd get_vector(const json& j, const std::string& path, int len) {
  if (!j.is_array() || static_cast<int>(j.size()) != len)
    throw SchemaError(path + ": expected an array of length " + std::to_string(len) +
                      (j.is_array() ? ", got " + std::to_string(j.size()) : ""));
  Eigen::VectorXd v(len);
  for (int i = 0; i < len; ++i) v[i] = get_real(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

Eigen::MatrixXd get_matrix(const json& j, const std::string& path, int rows, int cols) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    throw SchemaError(path + ": expected a " + std::to_string(rows) + "x" +
                      std::to_string(cols) + " array" +
                      (j.is_array() ? ", got " + std::to_string(j.size()) + " rows" : ""));
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const json& row = j[r];
    const std::string rpath = path + "[" + std::to_string(r) + "]";
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      throw SchemaError(rpath + ": expected a row of length " + std::to_string(cols));
    for (int c = 0; c < cols; ++c)
      m(r, c) = get_real(row[c], rpath + "[" + std::to_string(c) + "]");
  }
  return m;
}

cd get_complex(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2)
    throw SchemaError(path + ": expected a [re, im] pair");
  return cd(get_real(j[0], path + "[0]"), get_real(j[1], path + "[1]"));
}

json put_vector(const Eigen::VectorXd& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json put_matrix(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(row);
  }
  return out;
}

json put_complex_matrix(const Eigen::MatrixXcd& m) {
  json out = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c)
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    out.push_back(row);
  }
  return out;
}

json put_conditions(const std::vector<ConditionResidual>& conds) {
  json out = json::array();
  for (const auto& c : conds) {
    json e;
    e["id"] = c.id;
    e["residual"] = c.residual;
    e["max_abs"] = c.max_abs;
    e["pass"] = c.pass;
    out.push_back(e);
  }
  return out;
}

}  // namespace

std::string model_to_json(const StateSpaceModel& m, int indent) {
  json j;
  j["n"] = m.n;
  j["nw"] = m.nw;
  j["A0"] = put_vector(m.A0);
  j["A"] = put_matrix(m.A);
  json b1 = json::array(), b2 = json::array();
  for (const auto& b : m.B1) b1.push_back(put_matrix(b));
  for (const auto& b : m.B2) b2.push_back(put_matrix(b));
  j["B1"] = std::move(b1);
  j["B2"] = std::move(b2);
  j["C1"] = put_matrix(m.C1);
  j["C2"] = put_matrix(m.C2);
  return j.dump(indent);
}

StateSpaceModel model_from_json(const std::string& text) {
  const json j = parse(text);
  StateSpaceModel m;
  m.n = get_int(member(j, "n"), "n");
  m.nw = get_int(member(j, "nw"), "nw");
  if (m.n < 2) throw SchemaError("n: must be >= 2");
  if (m.nw < 0) throw SchemaError("nw: must be >= 0");
  const int s = m.s();
  m.A0 = get_vector(member(j, "A0"), "A0", s);
  m.A = get_matrix(member(j, "A"), "A", s, s);
  const json& b1 = member(j, "B1");
  const json& b2 = member(j, "B2");
  if (!b1.is_array() || static_cast<int>(b1.size()) != m.nw)
    throw SchemaError("B1: expected " + std::to_string(m.nw) + " channel matrices");
  if (!b2.is_array() || static_cast<int>(b2.size()) != m.nw)
    throw SchemaError("B2: expected " + std::to_string(m.nw) + " channel matrices");
  for (int k = 0; k < m.nw; ++k) {
    m.B1.push_back(get_matrix(b1[k], "B1[" + std::to_string(k) + "]", s, s));
    m.B2.push_back(get_matrix(b2[k], "B2[" + std::to_string(k) + "]", s, s));
  }
  m.C1 = get_matrix(member(j, "C1"), "C1", m.nw, s);
  m.C2 = get_matrix(member(j, "C2"), "C2", m.nw, s);
  return m;
}

std::string slh_to_json(const SlhParams& p, int indent) {
  json j;
  j["alpha"] = put_vector(p.alpha);
  j["Lambda"] = put_complex_matrix(p.Lambda);
  return j.dump(indent);
}

SlhParams slh_from_json(const std::string& text) {
  const json j = parse(text);
  SlhParams p;
  const json& alpha = member(j, "alpha");
  if (!alpha.is_array() || alpha.empty()) throw SchemaError("alpha: expected a nonempty array");
  p.alpha = get_vector(alpha, "alpha", static_cast<int>(alpha.size()));
  const json& lam = member(j, "Lambda");
  if (!lam.is_array()) throw SchemaError("Lambda: expected an array of rows");
  const int nw = static_cast<int>(lam.size());
  const int s = static_cast<int>(p.alpha.size());
  p.Lambda.resize(nw, s);
  for (int k = 0; k < nw; ++k) {
    const json& row = lam[k];
    const std::string rpath = "Lambda[" + std::to_string(k) + "]";
    if (!row.is_array() || static_cast<int>(row.size()) != s)
      throw SchemaError(rpath + ": expected a row of length " + std::to_string(s));
    for (int c = 0; c < s; ++c)
      p.Lambda(k, c) = get_complex(row[c], rpath + "[" + std::to_string(c) + "]");
  }
  return p;
}

std::string tensors_to_json(const GellMannBasis& basis, const StructureTensors& t, int indent) {
  json j;
  j["n"] = t.n;
  j["s"] = t.s;
  json order = json::array();
  for (const auto& l : basis.labels) order.push_back(l.str());
  j["order"] = std::move(order);
  auto tensor3 = [&](const std::vector<double>& data) {
    json out = json::array();
    for (int i = 0; i < t.s; ++i) {
      json plane = json::array();
      for (int jj = 0; jj < t.s; ++jj) {
        json row = json::array();
        for (int k = 0; k < t.s; ++k) row.push_back(data[(i * t.s + jj) * t.s + k]);
        plane.push_back(std::move(row));
      }
      out.push_back(std::move(plane));
    }
    return out;
  };
  j["f"] = tensor3(t.f);
  j["d"] = tensor3(t.d);
  return j.dump(indent);
}

Eigen::MatrixXcd density_from_json(const std::string& text) {
  const json j = parse(text);
  if (!j.is_array() || j.empty()) throw SchemaError("rho: expected a nonempty array of rows");
  const int n = static_cast<int>(j.size());
  Eigen::MatrixXcd rho(n, n);
  for (int r = 0; r < n; ++r) {
    const json& row = j[r];
    const std::string rpath = "rho[" + std::to_string(r) + "]";
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw SchemaError(rpath + ": expected a row of length " + std::to_string(n));
    for (int c = 0; c < n; ++c)
      rho(r, c) = get_complex(row[c], rpath + "[" + std::to_string(c) + "]");
  }
  return rho;
}

std::string density_to_json(const Eigen::MatrixXcd& rho, int indent) {
  return put_complex_matrix(rho).dump(indent);
}

std::string identity_report_to_json(const IdentityReport& r, int indent) {
  json j;
  j["type"] = "identity_report";
  j["tol"] = r.tol;
  j["pass"] = r.pass;
  json checks = json::array();
  for (const auto& c : r.checks) {
    json e;
    e["id"] = c.id;
    e["max_residual"] = c.max_residual;
    e["worst_index"] = c.worst_index;
    e["pass"] = c.pass;
    checks.push_back(e);
  }
  j["checks"] = std::move(checks);
  return j.dump(indent);
}

std::string realizability_report_to_json(const RealizabilityReport& r, int indent) {
  json j;
  j["type"] = "realizability_report";
  j["tol"] = r.tol;
  j["pass"] = r.pass;
  j["conditions"] = put_conditions(r.conditions);
  json rec;
  rec["alpha"] = put_vector(r.recovered.params.alpha);
  rec["Lambda"] = put_complex_matrix(r.recovered.params.Lambda);
  rec["alpha_residual"] = r.recovered.alpha_residual;
  j["recovered"] = std::move(rec);
  return j.dump(indent);
}

std::string preservation_report_to_json(const PreservationReport& r, int indent) {
  json j;
  j["type"] = "preservation_report";
  j["tol"] = r.tol;
  j["pass"] = r.pass;
  j["conditions"] = put_conditions(r.conditions);
  json b1 = json::array(), b2 = json::array();
  for (const auto& b : r.b1) b1.push_back(put_vector(b));
  for (const auto& b : r.b2) b2.push_back(put_vector(b));
  j["b1"] = std::move(b1);
  j["b2"] = std::move(b2);
  j["a"] = put_vector(r.a);
  j["implied_A0"] = put_vector(r.implied_A0);
  j["implied_A0_deviation"] = r.implied_A0_deviation;
  return j.dump(indent);
}

std::string oracle_report_to_json(const ItoIntegrands& g, double tol, int indent) {
  json j;
  j["type"] = "oracle_report";
  j["tol"] = tol;
  const double worst = g.max_norm();
  j["pass"] = worst < tol;
  j["max_norm"] = worst;
  json parts = json::array();
  auto push = [&](const std::string& id, const OperatorMatrix& om) {
    json e;
    e["id"] = id;
    e["norm"] = om.max_op_norm();
    parts.push_back(e);
  };
  push("ccr_dt", g.ccr_dt);
  push("accr_dt", g.accr_dt);
  for (std::size_t k = 0; k < g.ccr_dw1.size(); ++k) {
    const std::string suffix = "_ch" + std::to_string(k);
    push("ccr_dw1" + suffix, g.ccr_dw1[k]);
    push("ccr_dw2" + suffix, g.ccr_dw2[k]);
    push("accr_dw1" + suffix, g.accr_dw1[k]);
    push("accr_dw2" + suffix, g.accr_dw2[k]);
  }
  j["integrands"] = std::move(parts);
  return j.dump(indent);
}

std::string trajectory_to_csv(const MomentTrajectory& traj, bool with_moments) {
  std::string out = "t,r_ccr,r_accr";
  const int s = traj.points.empty() ? 0 : static_cast<int>(traj.points.front().m.size());
  if (with_moments) {
    for (int i = 0; i < s; ++i)
      out += ",m_re_" + std::to_string(i) + ",m_im_" + std::to_string(i);
  }
  out += "\n";
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
  };
  for (const auto& p : traj.points) {
    put(p.t);
    out += ",";
    put(p.r_ccr);
    out += ",";
    put(p.r_accr);
    if (with_moments) {
      for (int i = 0; i < s; ++i) {
        out += ",";
        put(p.m[i].real());
        out += ",";
        put(p.m[i].imag());
      }
    }
    out += "\n";
  }
  return out;
}

}  // namespace sunq
