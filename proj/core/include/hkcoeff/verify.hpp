#pragma once

#include "hkcoeff/chains.hpp"
#include "hkcoeff/sampling.hpp"

#include <string>
#include <vector>

namespace hkcoeff {

/// Configuration of a named verification suite. The seed fully determines
/// the sampled cases.
struct SuiteConfig {
    std::string suite = "all";
    GroupKind kind = GroupKind::SL2;
    u64 q = 2;
    u64 modulus = 2;
    std::size_t radius = 3;
    u64 seed = 1;
    std::size_t cases = 20;
};

struct CheckResult {
    std::string name;
    std::string anchor;  // which statement the check certifies
    bool pass = false;
    std::string witness;  // failure detail, empty on success
};

struct SuiteReport {
    SuiteConfig config;
    std::vector<CheckResult> checks;
    bool ok() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    std::size_t failed() const {
        std::size_t n = 0;
        for (const auto& c : checks) n += !c.pass;
        return n;
    }
};

const std::vector<std::string>& suite_names();

/// Run one named suite (or "all") for a single configuration. Throws
/// std::invalid_argument for invalid configurations, e.g. GL2 requested for
/// a suite that needs the dagger level.
SuiteReport run_suite(const SuiteConfig& cfg);

}  // namespace hkcoeff
