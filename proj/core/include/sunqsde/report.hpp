#pragma once

#include <string>
#include <vector>

namespace sunq {

/// One verified identity: its tag, the largest absolute residual seen,
/// and the index tuple where it occurred (lexicographically smallest on
/// ties, so reports are deterministic).
struct IdentityCheck {
  std::string id;
  double max_residual = 0.0;
  std::vector<int> worst_index;
  bool pass = false;
};

struct IdentityReport {
  double tol = 0.0;
  bool pass = false;  // true iff every entry passes
  std::vector<IdentityCheck> checks;

  const IdentityCheck* find(const std::string& id) const {
    for (const auto& c : checks)
      if (c.id == id) return &c;
    return nullptr;
  }
};

/// Residual of one model condition. `residual` is normalized by
/// (1 + Frobenius norm of the condition's left side) and decides `pass`;
/// `max_abs` is the raw largest entry of the defect.
struct ConditionResidual {
  std::string id;
  double residual = 0.0;
  double max_abs = 0.0;
  bool pass = false;
};

}  // namespace sunq
