#pragma once

#include <string>
#include <vector>

namespace polymerlab {

struct SelfCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Exact-identity checks: energy bookkeeping, enumeration closed forms, strip weights,
/// split bound, renewal identity and B_n. Deterministic and quick.
std::vector<SelfCheck> run_selftest();

}  // namespace polymerlab
