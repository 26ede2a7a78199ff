#include "kslab/montecarlo.hpp"

#include <algorithm>
#include <cmath>

#include "kslab/errors.hpp"

namespace kslab {

namespace {

constexpr uint64_t GAMMA = 0x9e3779b97f4a7c15ULL;

uint64_t mix(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

CounterRng::CounterRng(uint64_t seed, uint64_t stream)
    : key(mix(mix(seed + GAMMA) ^ (stream * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL))) {}

uint64_t CounterRng::bits(uint64_t counter) const {
    return mix(key + (counter + 1) * GAMMA);
}

double CounterRng::uniform(uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
}

uint64_t setting_stream(const SettingPair& sp) {
    return 4u * static_cast<uint64_t>(sp.a) + static_cast<uint64_t>(sp.b);
}

uint64_t SettingCounts::count_of(const std::string& outA, const std::string& outB) const {
    auto ia = std::find(outcomesA.begin(), outcomesA.end(), outA);
    auto ib = std::find(outcomesB.begin(), outcomesB.end(), outB);
    if (ia == outcomesA.end() || ib == outcomesB.end())
        throw Error("outcome pair (" + outA + "," + outB + ") not in setting alphabet");
    return counts[(ia - outcomesA.begin()) * outcomesB.size() + (ib - outcomesB.begin())];
}

uint64_t SettingCounts::marginal_countB(const std::string& outB) const {
    auto ib = std::find(outcomesB.begin(), outcomesB.end(), outB);
    if (ib == outcomesB.end()) throw Error("outcome " + outB + " not in setting alphabet");
    uint64_t total = 0;
    for (size_t ia = 0; ia < outcomesA.size(); ++ia)
        total += counts[ia * outcomesB.size() + (ib - outcomesB.begin())];
    return total;
}

const SettingCounts* CountTable::find(const SettingPair& sp) const {
    for (const auto& sc : settings)
        if (sc.setting == sp) return &sc;
    return nullptr;
}

SettingCounts sample_setting(const BipartiteState& state, const ObservableSet& os,
                             const SettingPair& sp, uint64_t n, const CounterRng& rng,
                             uint64_t counter_start) {
    SettingCounts sc;
    sc.setting = sp;
    sc.outcomesA = outcome_alphabet(sp.a);
    sc.outcomesB = outcome_alphabet(sp.b);
    const size_t nA = sc.outcomesA.size(), nB = sc.outcomesB.size();
    sc.counts.assign(nA * nB, 0);
    sc.shots = n;

    // exact outcome-pair distribution, frozen before any draw
    std::vector<double> probs(nA * nB);
    double total = 0;
    for (size_t ia = 0; ia < nA; ++ia) {
        EventAtom atomA{{Party::A, sp.a}, outcome_code_from_label(sp.a, sc.outcomesA[ia])};
        for (size_t ib = 0; ib < nB; ++ib) {
            EventAtom atomB{{Party::B, sp.b}, outcome_code_from_label(sp.b, sc.outcomesB[ib])};
            double p = std::max(joint_probability(state, os, atomA, atomB), 0.0);
            probs[ia * nB + ib] = p;
            total += p;
        }
    }
    if (std::abs(total - 1.0) > 1e-9) throw Error("setting distribution does not sum to 1");

    // inverse CDF with 64-bit integer thresholds; zero-probability outcomes are
    // left out entirely so they can never be drawn
    std::vector<uint64_t> threshold;
    std::vector<uint32_t> cell;
    long double cum = 0;
    for (size_t idx = 0; idx < probs.size(); ++idx) {
        if (probs[idx] <= 0.0) continue;
        cum += probs[idx];
        cell.push_back(static_cast<uint32_t>(idx));
        long double scaled = cum * 18446744073709551616.0L; // 2^64
        threshold.push_back(scaled >= 18446744073709551615.0L
                                ? UINT64_MAX
                                : static_cast<uint64_t>(scaled));
    }
    if (cell.empty()) throw Error("empty distribution");
    const size_t last = cell.size() - 1;

    for (uint64_t k = 0; k < n; ++k) {
        uint64_t z = rng.bits(counter_start + k);
        size_t j = 0;
        while (j < last && z >= threshold[j]) ++j;
        ++sc.counts[cell[j]];
    }
    return sc;
}

std::vector<SettingPair> settings_of(const AnyInequality& ineq) {
    const InequalityDef& base = base_of(ineq);
    const auto* cond = std::get_if<ConditionalInequalityDef>(&ineq);
    std::vector<SettingPair> out;
    for (size_t t = 0; t < base.terms.size(); ++t) {
        const auto& atoms = base.terms[t].atoms;
        SettingPair sp;
        if (cond) {
            // conditional terms: single A atom, condition supplies the B slot
            sp = {atoms[0].obs.slot, cond->condition.obs.slot};
        } else {
            if (atoms.size() != 2)
                throw ValidationError("terms[" + std::to_string(t) + "]",
                                      "simulation needs one atom per party in every term");
            const EventAtom& x = atoms[0];
            const EventAtom& y = atoms[1];
            sp = x.obs.party == Party::A ? SettingPair{x.obs.slot, y.obs.slot}
                                         : SettingPair{y.obs.slot, x.obs.slot};
        }
        if (std::find(out.begin(), out.end(), sp) == out.end()) out.push_back(sp);
    }
    std::sort(out.begin(), out.end());
    return out;
}

CountTable sample_all(const RunConfig& cfg) {
    if (cfg.shots_per_setting < 1) throw ValidationError("shots_per_setting", "must be >= 1");
    if (cfg.visibility < 0 || cfg.visibility > 1)
        throw ValidationError("visibility", "must lie in [0,1]");
    BipartiteState state = standard_state(cfg.visibility);
    ObservableSet os = paper_observables();
    CountTable table;
    for (const auto& sp : settings_of(cfg.inequality)) {
        CounterRng rng(cfg.seed, setting_stream(sp));
        table.settings.push_back(sample_setting(state, os, sp, cfg.shots_per_setting, rng));
    }
    return table;
}

namespace {

// smoothed so that an observed zero count still carries positive variance;
// the reported point estimate stays at x/n
double binomial_se(uint64_t x, uint64_t n) {
    double pt = (static_cast<double>(x) + 1.0) / (static_cast<double>(n) + 2.0);
    return std::sqrt(pt * (1.0 - pt) / static_cast<double>(n));
}

} // namespace

EstimateReport estimate_from_counts(const CountTable& table, const RunConfig& cfg) {
    const InequalityDef& base = base_of(cfg.inequality);
    const auto* cond = std::get_if<ConditionalInequalityDef>(&cfg.inequality);

    EstimateReport report;
    report.name = base.name;
    report.seed = cfg.seed;
    report.shots_per_setting = cfg.shots_per_setting;
    report.visibility = cfg.visibility;
    report.z_threshold = cfg.z_threshold;

    double estimate = 0, var = 0;
    for (const auto& term : base.terms) {
        TermEstimate te;
        te.coef = term.coef;
        te.atoms = term.atoms;

        uint64_t x = 0, n = 0;
        if (cond) {
            const EventAtom& atomA = term.atoms[0];
            SettingPair sp{atomA.obs.slot, cond->condition.obs.slot};
            const SettingCounts* sc = table.find(sp);
            if (!sc) throw Error("count table is missing a setting");
            std::string outA = outcome_label(atomA.obs.slot, atomA.out);
            std::string outC = outcome_label(cond->condition.obs.slot, cond->condition.out);
            n = sc->marginal_countB(outC);
            if (n == 0) throw Error("conditioning outcome was never observed");
            x = sc->count_of(outA, outC);
        } else {
            const EventAtom& a = term.atoms[0].obs.party == Party::A ? term.atoms[0] : term.atoms[1];
            const EventAtom& b = term.atoms[0].obs.party == Party::A ? term.atoms[1] : term.atoms[0];
            SettingPair sp{a.obs.slot, b.obs.slot};
            const SettingCounts* sc = table.find(sp);
            if (!sc) throw Error("count table is missing a setting");
            n = sc->shots;
            x = sc->count_of(outcome_label(a.obs.slot, a.out), outcome_label(b.obs.slot, b.out));
        }
        te.phat = static_cast<double>(x) / static_cast<double>(n);
        te.n = n;
        double c = to_double(term.coef);
        estimate += c * te.phat;
        double se = binomial_se(x, n);
        var += c * c * se * se;
        report.terms.push_back(std::move(te));
    }
    report.estimate = estimate;
    report.stderr_ = std::sqrt(var);
    report.z = report.stderr_ > 0 ? estimate / report.stderr_ : 0.0;
    report.verdict = report.z > report.z_threshold ? "violation" : "no-violation";
    return report;
}

std::pair<CountTable, EstimateReport> run(const RunConfig& cfg) {
    CountTable table = sample_all(cfg);
    EstimateReport report = estimate_from_counts(table, cfg);
    return {std::move(table), std::move(report)};
}

std::string counts_to_csv(const CountTable& table) {
    std::string out = "obsA,obsB,outA,outB,count\n";
    for (const auto& sc : table.settings)
        for (size_t ia = 0; ia < sc.outcomesA.size(); ++ia)
            for (size_t ib = 0; ib < sc.outcomesB.size(); ++ib) {
                out += slot_name(sc.setting.a);
                out += ',';
                out += slot_name(sc.setting.b);
                out += ',';
                out += sc.outcomesA[ia];
                out += ',';
                out += sc.outcomesB[ib];
                out += ',';
                out += std::to_string(sc.counts[ia * sc.outcomesB.size() + ib]);
                out += '\n';
            }
    return out;
}

nlohmann::ordered_json report_to_json(const EstimateReport& report) {
    nlohmann::ordered_json j;
    j["name"] = report.name;
    j["seed"] = report.seed;
    j["shots_per_setting"] = report.shots_per_setting;
    j["visibility"] = report.visibility;
    j["estimate"] = report.estimate;
    j["stderr"] = report.stderr_;
    j["z"] = report.z;
    j["z_threshold"] = report.z_threshold;
    j["verdict"] = report.verdict;
    auto terms = nlohmann::ordered_json::array();
    for (const auto& te : report.terms) {
        auto atoms = nlohmann::ordered_json::array();
        for (const auto& atom : te.atoms) atoms.push_back(to_json(atom));
        terms.push_back({{"coef", to_string(te.coef)},
                         {"atoms", std::move(atoms)},
                         {"phat", te.phat},
                         {"n", te.n}});
    }
    j["terms"] = std::move(terms);
    return j;
}

} // namespace kslab
