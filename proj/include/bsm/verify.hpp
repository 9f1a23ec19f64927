#ifndef BSM_VERIFY_HPP
#define BSM_VERIFY_HPP

#include <optional>
#include <string>
#include <vector>

#include "bsm/params.hpp"

namespace bsm {

struct VerifyCheck {
    std::string name;
    bool passed = false;
    bool skipped = false;
    std::string detail;  // exact values, or the reason a check was skipped
};

struct VerifyReport {
    std::string suite;
    std::vector<VerifyCheck> checks;
    bool passed = false;  // every executed check passed and at least one ran

    std::string to_json() const;
};

/// Runs one of the exact-verification suites: "discrepancy", "independence",
/// "goodness", "preimage", "grammian", or "all". With an instance the suite
/// checks that (n,k,m) alone; otherwise it runs its built-in instance set.
/// Checks whose enumeration would exceed enum_limit_bits are skipped and
/// annotated rather than failed.
VerifyReport run_verify_suite(const std::string& suite, const std::optional<Params>& instance,
                              uint32_t enum_limit_bits);

} // namespace bsm

#endif
