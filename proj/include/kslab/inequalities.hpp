#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "kslab/hvstates.hpp"
#include "kslab/rational.hpp"

#include "json.hpp"

namespace kslab {

struct ObservableRef {
    Party party;
    Slot slot;
    auto operator<=>(const ObservableRef&) const = default;
};

struct EventAtom {
    ObservableRef obs;
    uint8_t out; // D: 0/1, T: 0..2 (a/b/c)
    auto operator<=>(const EventAtom&) const = default;
};

struct ProbabilityTerm {
    Rat coef;
    std::vector<EventAtom> atoms; // >= 1, at most one per observable, at most one per party
    bool operator==(const ProbabilityTerm&) const = default;
};

struct InequalityDef {
    std::string name;
    ModelClass cls = ModelClass::Realistic;
    Rat bound;
    std::vector<ProbabilityTerm> terms;
    bool operator==(const InequalityDef&) const = default;
};

struct ConditionalInequalityDef {
    InequalityDef base;
    EventAtom condition;
    bool operator==(const ConditionalInequalityDef&) const = default;
};

using AnyInequality = std::variant<InequalityDef, ConditionalInequalityDef>;

bool atom_matches(const EventAtom& atom, const JointAssignment& s);

Rat evaluate(const InequalityDef& ineq, const JointAssignment& s);
// nullopt when the conditioning outcome does not occur in s
std::optional<Rat> evaluate(const ConditionalInequalityDef& ineq, const JointAssignment& s);

struct BoundReport {
    Rat maximum;
    std::vector<JointAssignment> maximizers;                 // canonical order
    std::vector<std::pair<JointAssignment, Rat>> violators;  // value > bound, canonical order
    long eligible = 0; // states scanned (for conditionals: those satisfying the condition)
};

BoundReport bound(const InequalityDef& ineq);                   // over ineq.cls
BoundReport bound(const InequalityDef& ineq, ModelClass cls);   // over an explicit class
BoundReport bound(const ConditionalInequalityDef& ineq);
BoundReport bound(const ConditionalInequalityDef& ineq, ModelClass cls);

// throws ValidationError if the condition's observable appears in any term
ConditionalInequalityDef conditionalize(InequalityDef base, EventAtom condition);

// known names: K, K-printed, lemma2a, lemma2b, lemma2c, lemma2c-printed,
// lemma2d, lemma2d-printed, lemma3, lemma2a-conditional
AnyInequality builtin(const std::string& name); // throws ValidationError on unknown name
const std::vector<std::string>& builtin_names();

nlohmann::ordered_json to_json(const EventAtom& atom);
nlohmann::ordered_json to_json(const AnyInequality& ineq);
std::string serialize_inequality(const AnyInequality& ineq);

EventAtom atom_from_json(const nlohmann::json& j, const std::string& path);
AnyInequality inequality_from_json(const nlohmann::json& j);
AnyInequality parse_inequality(const std::string& text); // throws ParseError / ValidationError

// helpers shared by quantum/montecarlo: name and terms regardless of variant
const InequalityDef& base_of(const AnyInequality& ineq);
const std::string& name_of(const AnyInequality& ineq);

} // namespace kslab
