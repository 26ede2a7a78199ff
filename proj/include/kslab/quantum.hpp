#pragma once

#include <array>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "kslab/inequalities.hpp"

namespace kslab {

using cplx = std::complex<double>;

struct Ket {
    std::vector<cplx> amps; // dim 3 (single system) or 9 (pair, A-major)
    double norm2() const;
};

cplx inner(const Ket& x, const Ket& y);        // <x|y>
double fidelity(const Ket& x, const Ket& y);   // |<x|y>|^2, phase-blind

// the eight directions of the orthogonality block
struct BlockKets {
    Ket i, f, a0, b0, c0, a1, b1, c1;
    const Ket& by_name(const std::string& name) const;
    static const std::array<const char*, 8>& names();
};

BlockKets standard_kets();

// 11 required orthogonality edges plus the non-edge overlap |<f|i>|^2 = 1/9
struct BlockReport {
    struct Edge {
        std::string x, y;
        double overlap;  // |<x|y>|
        bool ok;
    };
    std::vector<Edge> edges;
    double nonedge_overlap2; // |<f|i>|^2
    bool nonedge_ok;
    std::vector<std::string> norm_failures;
    bool ok() const;
};

BlockReport verify_block(const BlockKets& kets, double tol = 1e-12);

// one measurement: outcome label -> rank-1 direction; a D slot carries only its
// "1" direction, the "0" outcome being the rank-2 complement
struct LabeledObservable {
    Party party;
    Slot slot;
    std::vector<std::pair<std::string, Ket>> outcomes;
    const Ket& direction(uint8_t code) const; // code as in EventAtom
};

struct ObservableSet {
    std::array<std::array<LabeledObservable, 4>, 2> obs; // [party][slot]
    const LabeledObservable& at(Party p, Slot s) const;
};

ObservableSet paper_observables();
ObservableSet observables_from_kets(const BlockKets& kets);

struct BipartiteState {
    Ket psi;           // dim 9, normalized
    double visibility; // in [0,1]; mixes with identity/9
};

BipartiteState standard_state(double visibility = 1.0);

// full outcome alphabet of a slot ("0","1" or the three ternary labels)
std::vector<std::string> outcome_alphabet(Slot slot);
int outcome_rank(Slot slot, uint8_t code); // 1 for T and D"1", 2 for D"0"

double joint_probability(const BipartiteState& state, const ObservableSet& os,
                         const EventAtom& atomA, const EventAtom& atomB);
double marginal_probability(const BipartiteState& state, const ObservableSet& os,
                            const EventAtom& atom);
// throws Error when the conditioning probability is below 1e-12
double conditional_probability(const BipartiteState& state, const ObservableSet& os,
                               const EventAtom& atomA, const EventAtom& conditionB);
// pure-state collapse of party A given a rank-1 outcome on B
Ket conditioned_state_A(const Ket& psi9, const Ket& directionB);

double quantum_value(const AnyInequality& ineq, const BipartiteState& state,
                     const ObservableSet& os);
double quantum_value(const AnyInequality& ineq, double visibility = 1.0);
std::vector<double> per_term_probabilities(const AnyInequality& ineq,
                                           const BipartiteState& state,
                                           const ObservableSet& os);

enum class EpsilonConvention { NegativesOnly, Uniform };
// throws Error when the inequality is not violated at v=1
double epsilon_threshold(const AnyInequality& ineq, EpsilonConvention conv);

struct CriticalVisibility {
    double closed_form;
    double bisection;
};
// throws Error when not violated at v=1 or when the value never crosses 0 on [0,1]
CriticalVisibility critical_visibility(const AnyInequality& ineq);

struct ProbabilityTable {
    struct Row {
        Slot obsA, obsB;
        std::string outA, outB;
        double p;
    };
    std::vector<Row> rows; // all 16 slot pairs, full outcome alphabets, fixed order
};

ProbabilityTable probability_table(const BipartiteState& state, const ObservableSet& os);
std::string table_to_csv(const ProbabilityTable& table);  // header obsA,outA,obsB,outB,p
nlohmann::ordered_json table_to_json(const ProbabilityTable& table);

// fault-injection input: {"a0": [0, 0.707, -0.707], ...}; entries may be
// numbers or [re, im] pairs; unlisted kets keep their standard value
BlockKets kets_from_json(const nlohmann::json& j);

} // namespace kslab
