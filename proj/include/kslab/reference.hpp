#pragma once

#include <optional>
#include <string>

#include "kslab/rational.hpp"

namespace kslab {

// Frozen expected values for the built-in inequalities, used by --paper-check
// and verify-all. `nc_discrepancy` marks variants whose noncontextual maximum
// is known to exceed the bound (kept for comparison, reported but not failed).
struct ReferenceValues {
    std::string name;
    Rat realistic_max;
    Rat noncontextual_max;
    bool nc_discrepancy;
    std::optional<Rat> quantum_v1;       // value at visibility 1
    std::optional<Rat> quantum_v0;       // value at visibility 0
    std::optional<Rat> critical_vis;     // nullopt when no crossing in [0,1]
    std::optional<Rat> eps_negatives;    // negatives-only threshold
    std::optional<Rat> eps_uniform;      // uniform threshold
};

const ReferenceValues* reference_for(const std::string& name); // nullptr if unknown

} // namespace kslab
