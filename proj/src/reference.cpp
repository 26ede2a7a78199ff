#include "kslab/reference.hpp"

#include <array>

namespace kslab {

namespace {

const std::array<ReferenceValues, 10> table = {{
    // name, realistic max, nc max, nc discrepancy, qv1, qv0, v*, eps-neg, eps-uniform
    {"K", Rat(0), Rat(0), false, Rat(2, 27), Rat(-2), Rat(27, 28), Rat(1, 270), Rat(2, 594)},
    {"K-printed", Rat(0), Rat(0), false, Rat(-5, 54), Rat(-2), std::nullopt, std::nullopt,
     std::nullopt},
    {"lemma2a", Rat(1), Rat(0), false, Rat(1, 27), Rat(-1, 9), Rat(3, 4), Rat(1, 54), Rat(1, 81)},
    {"lemma2b", Rat(1), Rat(0), false, Rat(1, 27), Rat(-1, 9), Rat(3, 4), Rat(1, 54), Rat(1, 81)},
    {"lemma2c", Rat(1), Rat(0), false, Rat(1, 27), Rat(-1, 9), Rat(3, 4), Rat(1, 54), Rat(1, 81)},
    {"lemma2c-printed", Rat(1), Rat(1), true, Rat(-11, 27), Rat(-1, 9), std::nullopt, std::nullopt,
     std::nullopt},
    {"lemma2d", Rat(1), Rat(0), false, Rat(1, 27), Rat(-1, 9), Rat(3, 4), Rat(1, 54), Rat(1, 81)},
    {"lemma2d-printed", Rat(1), Rat(1), true, Rat(-11, 27), Rat(-1, 9), std::nullopt, std::nullopt,
     std::nullopt},
    {"lemma3", Rat(1), Rat(0), false, Rat(1, 27), Rat(-1, 3), Rat(9, 10), Rat(1, 108), Rat(1, 135)},
    {"lemma2a-conditional", Rat(1), Rat(0), false, Rat(1, 9), Rat(-1, 3), Rat(3, 4), Rat(1, 18),
     Rat(1, 27)},
}};

} // namespace

const ReferenceValues* reference_for(const std::string& name) {
    for (const auto& ref : table)
        if (ref.name == name) return &ref;
    return nullptr;
}

} // namespace kslab
