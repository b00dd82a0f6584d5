#pragma once
// Data-driven claim registry: every quantitative or structural claim the
// tool checks is registered here with an id, a speed class, and the
// acceptance criterion it belongs to (0 = none). The CLI `verify` command and
// the acceptance suite both run off this table.

#include <functional>
#include <string>
#include <vector>

#include "qslide/run_config.hpp"

namespace qslide {

enum class ClaimStatus { Pass, Fail, Partial };

std::string to_string(ClaimStatus s);

struct ClaimResult {
    std::string id;
    ClaimStatus status = ClaimStatus::Pass;
    std::string evidence;  // JSON blob; failures carry a concrete counterexample
};

struct Claim {
    std::string id;
    std::string title;
    bool fast = true;   // fast claims finish in well under a minute combined
    int criterion = 0;  // acceptance criterion 1..11, or 0
    std::function<ClaimResult(const RunConfig&)> run;
};

const std::vector<Claim>& claim_registry();

// selector: "all", "fast", or a claim id ("thm-disconnected" or
// "thm:disconnected"). Throws std::invalid_argument on unknown ids.
std::vector<ClaimResult> run_claims(const std::string& selector, const RunConfig& cfg,
                                    const std::function<void(const ClaimResult&)>& on_result);

}  // namespace qslide
