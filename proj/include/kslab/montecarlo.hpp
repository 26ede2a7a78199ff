#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kslab/quantum.hpp"

namespace kslab {

// Counter-based generator: draw k of stream s under seed g is
// splitmix64_finalize(key(g, s) + (k+1)*GAMMA), so any draw is addressable
// directly and chunked sampling reproduces a single pass exactly.
struct CounterRng {
    uint64_t key;
    CounterRng(uint64_t seed, uint64_t stream);
    uint64_t bits(uint64_t counter) const;    // uniform 64-bit word
    double uniform(uint64_t counter) const;   // in [0,1)
};

struct SettingPair {
    Slot a, b;
    auto operator<=>(const SettingPair&) const = default;
};
// RNG stream id of a setting; depends only on the slots, not the inequality
uint64_t setting_stream(const SettingPair& sp);

struct SettingCounts {
    SettingPair setting;
    std::vector<std::string> outcomesA, outcomesB; // canonical alphabets
    std::vector<uint64_t> counts;                  // A-major outcome-pair order
    uint64_t shots = 0;
    uint64_t count_of(const std::string& outA, const std::string& outB) const;
    uint64_t marginal_countB(const std::string& outB) const;
};

struct CountTable {
    std::vector<SettingCounts> settings; // sorted by (slotA, slotB)
    const SettingCounts* find(const SettingPair& sp) const;
};

SettingCounts sample_setting(const BipartiteState& state, const ObservableSet& os,
                             const SettingPair& sp, uint64_t n, const CounterRng& rng,
                             uint64_t counter_start = 0);

struct RunConfig {
    AnyInequality inequality;
    uint64_t seed = 0;
    uint64_t shots_per_setting = 1'000'000;
    double visibility = 1.0;
    double z_threshold = 3.0;
};

struct TermEstimate {
    Rat coef;
    std::vector<EventAtom> atoms;
    double phat;
    uint64_t n; // denominator actually used (conditioning count for conditionals)
};

struct EstimateReport {
    std::string name;
    uint64_t seed = 0;
    uint64_t shots_per_setting = 0;
    double visibility = 1.0;
    double estimate = 0;
    double stderr_ = 0;
    double z = 0;           // estimate / stderr
    double z_threshold = 3.0;
    std::string verdict;    // "violation" | "no-violation"
    std::vector<TermEstimate> terms;
};

// settings actually sampled for an inequality, deduplicated and sorted
std::vector<SettingPair> settings_of(const AnyInequality& ineq);

CountTable sample_all(const RunConfig& cfg);
// throws Error when a conditional term has zero conditioning counts
EstimateReport estimate_from_counts(const CountTable& table, const RunConfig& cfg);
std::pair<CountTable, EstimateReport> run(const RunConfig& cfg);

std::string counts_to_csv(const CountTable& table);   // header obsA,obsB,outA,outB,count
nlohmann::ordered_json report_to_json(const EstimateReport& report);

} // namespace kslab
