#pragma once

#include <string>

#include "polywalk/common.hpp"
#include "polywalk/systems.hpp"
#include "polywalk/walk_hash.hpp"

namespace polywalk {

// Raised when a file parses but its systems fail class-membership validation.
class ValidationFailure : public std::runtime_error {
public:
  ValidationFailure(std::string report, const std::string& msg)
      : std::runtime_error(msg), report_(std::move(report)) {}
  const std::string& report() const { return report_; }

private:
  std::string report_;
};

// System-definition file: {"p", "m", "S" (row-major), "systems": [{"G", "H",
// "gm", "hm"}], "schedule": "constant" | "cyclic" | [indices]}.  G and H are
// per-level term lists of {"exps": [...], "coeff": n}.  Every member is
// validated on load; non-members are refused with the validation report.
SystemFamily load_family(const std::string& path);
SystemFamily load_family_from_text(const std::string& text);

// Walk-hash parameter file: the same system schema with "members" (exactly
// 2^r entries), "r" and "w0" instead of "systems"/"schedule".
HashParams load_hash_params(const std::string& path);
HashParams load_hash_params_from_text(const std::string& text);

}  // namespace polywalk
