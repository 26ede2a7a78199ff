#include "kslab/inequalities.hpp"

#include <algorithm>
#include <set>

#include "kslab/errors.hpp"

namespace kslab {

bool atom_matches(const EventAtom& atom, const JointAssignment& s) {
    return outcome_code(s, atom.obs.party, atom.obs.slot) == atom.out;
}

Rat evaluate(const InequalityDef& ineq, const JointAssignment& s) {
    Rat total(0);
    for (const auto& term : ineq.terms) {
        bool fires = true;
        for (const auto& atom : term.atoms)
            if (!atom_matches(atom, s)) { fires = false; break; }
        if (fires) total += term.coef;
    }
    return total;
}

std::optional<Rat> evaluate(const ConditionalInequalityDef& ineq, const JointAssignment& s) {
    if (!atom_matches(ineq.condition, s)) return std::nullopt;
    return evaluate(ineq.base, s);
}

static BoundReport bound_over(const InequalityDef& base, ModelClass cls,
                              const EventAtom* condition) {
    BoundReport report;
    bool first = true;
    const auto& states = enumerate_joint(cls);
    for (const auto& s : states) {
        if (condition && !atom_matches(*condition, s)) continue;
        ++report.eligible;
        Rat v = evaluate(base, s);
        if (first || v > report.maximum) {
            report.maximum = v;
            first = false;
        }
        if (v > base.bound) report.violators.emplace_back(s, v);
    }
    if (first) throw Error("no state satisfies the conditioning outcome");
    for (const auto& s : states) {
        if (condition && !atom_matches(*condition, s)) continue;
        if (evaluate(base, s) == report.maximum) report.maximizers.push_back(s);
    }
    return report;
}

BoundReport bound(const InequalityDef& ineq, ModelClass cls) {
    return bound_over(ineq, cls, nullptr);
}
BoundReport bound(const InequalityDef& ineq) { return bound(ineq, ineq.cls); }
BoundReport bound(const ConditionalInequalityDef& ineq, ModelClass cls) {
    return bound_over(ineq.base, cls, &ineq.condition);
}
BoundReport bound(const ConditionalInequalityDef& ineq) { return bound(ineq, ineq.base.cls); }

ConditionalInequalityDef conditionalize(InequalityDef base, EventAtom condition) {
    for (size_t t = 0; t < base.terms.size(); ++t)
        for (size_t a = 0; a < base.terms[t].atoms.size(); ++a)
            if (base.terms[t].atoms[a].obs == condition.obs)
                throw ValidationError("terms[" + std::to_string(t) + "].atoms[" + std::to_string(a) + "]",
                                      "conditioning observable also appears in a term");
    return {std::move(base), condition};
}

namespace {

constexpr uint8_t a = 0, b = 1, c = 2;

EventAtom A_(Slot s, uint8_t out) { return {{Party::A, s}, out}; }
EventAtom B_(Slot s, uint8_t out) { return {{Party::B, s}, out}; }

ProbabilityTerm P(long long coef, EventAtom x) { return {Rat(coef), {x}}; }
ProbabilityTerm P(long long coef, EventAtom x, EventAtom y) { return {Rat(coef), {x, y}}; }

// the 18 terms shared by K and K-printed: 2 positive, 8 detector/ternary mixed,
// then the same-index and index-0 ternary exclusions and the c-c pair
std::vector<ProbabilityTerm> k_common_head() {
    return {
        P(+1, A_(Slot::D0, 1), B_(Slot::D1, 1)),
        P(+1, A_(Slot::D1, 1), B_(Slot::D0, 1)),
        P(-1, A_(Slot::D0, 1), B_(Slot::T0, a)),
        P(-1, A_(Slot::D0, 1), B_(Slot::T1, a)),
        P(-1, A_(Slot::T0, a), B_(Slot::D0, 1)),
        P(-1, A_(Slot::T1, a), B_(Slot::D0, 1)),
        P(-1, A_(Slot::D1, 1), B_(Slot::T0, b)),
        P(-1, A_(Slot::D1, 1), B_(Slot::T1, b)),
        P(-1, A_(Slot::T0, b), B_(Slot::D1, 1)),
        P(-1, A_(Slot::T1, b), B_(Slot::D1, 1)),
    };
}

std::vector<ProbabilityTerm> k_common_tail() {
    return {
        P(-1, A_(Slot::T0, a), B_(Slot::T0, b)),
        P(-1, A_(Slot::T1, a), B_(Slot::T1, b)),
        P(-1, A_(Slot::T0, b), B_(Slot::T0, a)),
        P(-1, A_(Slot::T1, b), B_(Slot::T1, a)),
        P(-1, A_(Slot::T0, a), B_(Slot::T0, c)),
        P(-1, A_(Slot::T0, c), B_(Slot::T0, a)),
        P(-1, A_(Slot::T0, b), B_(Slot::T0, c)),
        P(-1, A_(Slot::T0, c), B_(Slot::T0, b)),
        P(-1, A_(Slot::T0, c), B_(Slot::T1, c)),
        P(-1, A_(Slot::T1, c), B_(Slot::T0, c)),
    };
}

InequalityDef make_K() {
    // Bound-equivalent form in which every negative term is quantum-null: the
    // two cross-index a/b exclusions (redundant for the classical bound, but
    // not null) are replaced by the index-1 twins of the a/c exclusions.
    InequalityDef k{"K", ModelClass::Realistic, Rat(0), k_common_head()};
    k.terms.push_back(P(-1, A_(Slot::T1, a), B_(Slot::T1, c)));
    k.terms.push_back(P(-1, A_(Slot::T1, c), B_(Slot::T1, a)));
    auto tail = k_common_tail();
    k.terms.insert(k.terms.end(), tail.begin(), tail.end());
    return k;
}

InequalityDef make_K_printed() {
    InequalityDef k{"K-printed", ModelClass::Realistic, Rat(0), k_common_head()};
    k.terms.push_back(P(-1, A_(Slot::T0, a), B_(Slot::T1, b)));
    k.terms.push_back(P(-1, A_(Slot::T1, a), B_(Slot::T0, b)));
    auto tail = k_common_tail();
    k.terms.insert(k.terms.end(), tail.begin(), tail.end());
    return k;
}

InequalityDef make_lemma(const std::string& name, std::vector<ProbabilityTerm> terms) {
    return {name, ModelClass::Noncontextual, Rat(0), std::move(terms)};
}

AnyInequality make_builtin(const std::string& name) {
    if (name == "K") return make_K();
    if (name == "K-printed") return make_K_printed();
    if (name == "lemma2a")
        return make_lemma(name, {P(+1, A_(Slot::D0, 1), B_(Slot::D1, 1)),
                                 P(-1, A_(Slot::D0, 1), B_(Slot::T0, a)),
                                 P(-1, A_(Slot::D0, 1), B_(Slot::T1, a))});
    if (name == "lemma2b")
        return make_lemma(name, {P(+1, A_(Slot::D1, 1), B_(Slot::D0, 1)),
                                 P(-1, A_(Slot::T0, a), B_(Slot::D0, 1)),
                                 P(-1, A_(Slot::T1, a), B_(Slot::D0, 1))});
    if (name == "lemma2c")
        return make_lemma(name, {P(+1, A_(Slot::D1, 1), B_(Slot::D0, 1)),
                                 P(-1, A_(Slot::D1, 1), B_(Slot::T0, b)),
                                 P(-1, A_(Slot::D1, 1), B_(Slot::T1, b))});
    if (name == "lemma2c-printed")
        return make_lemma(name, {P(+1, A_(Slot::D0, 1), B_(Slot::D1, 1)),
                                 P(-1, A_(Slot::D0, 1), B_(Slot::T0, b)),
                                 P(-1, A_(Slot::D0, 1), B_(Slot::T1, b))});
    if (name == "lemma2d")
        return make_lemma(name, {P(+1, A_(Slot::D0, 1), B_(Slot::D1, 1)),
                                 P(-1, A_(Slot::T0, b), B_(Slot::D1, 1)),
                                 P(-1, A_(Slot::T1, b), B_(Slot::D1, 1))});
    if (name == "lemma2d-printed")
        return make_lemma(name, {P(+1, A_(Slot::D1, 1), B_(Slot::D0, 1)),
                                 P(-1, A_(Slot::T0, b), B_(Slot::D0, 1)),
                                 P(-1, A_(Slot::T1, b), B_(Slot::D0, 1))});
    if (name == "lemma3")
        return make_lemma(name, {P(+1, A_(Slot::D0, 1), B_(Slot::D1, 1)),
                                 P(-1, A_(Slot::T0, b), B_(Slot::T0, a)),
                                 P(-1, A_(Slot::T1, b), B_(Slot::T1, a)),
                                 P(-1, A_(Slot::T0, c), B_(Slot::T1, c)),
                                 P(-1, A_(Slot::T1, c), B_(Slot::T0, c))});
    if (name == "lemma2a-conditional") {
        InequalityDef base = make_lemma(name, {P(+1, A_(Slot::D1, 1)),
                                               P(-1, A_(Slot::T0, a)),
                                               P(-1, A_(Slot::T1, a))});
        return conditionalize(std::move(base), B_(Slot::D0, 1));
    }
    throw ValidationError("name", "unknown inequality '" + name + "'");
}

} // namespace

AnyInequality builtin(const std::string& name) { return make_builtin(name); }

const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names = {
        "K", "K-printed", "lemma2a", "lemma2b", "lemma2c", "lemma2c-printed",
        "lemma2d", "lemma2d-printed", "lemma3", "lemma2a-conditional"};
    return names;
}

const InequalityDef& base_of(const AnyInequality& ineq) {
    if (const auto* c = std::get_if<ConditionalInequalityDef>(&ineq)) return c->base;
    return std::get<InequalityDef>(ineq);
}

const std::string& name_of(const AnyInequality& ineq) { return base_of(ineq).name; }

nlohmann::ordered_json to_json(const EventAtom& atom) {
    return {{"party", party_name(atom.obs.party)},
            {"obs", slot_name(atom.obs.slot)},
            {"out", outcome_label(atom.obs.slot, atom.out)}};
}

nlohmann::ordered_json to_json(const AnyInequality& ineq) {
    const InequalityDef& base = base_of(ineq);
    nlohmann::ordered_json j;
    j["name"] = base.name;
    j["class"] = base.cls == ModelClass::Realistic ? "realistic" : "noncontextual";
    j["bound"] = to_string(base.bound);
    auto terms = nlohmann::ordered_json::array();
    for (const auto& term : base.terms) {
        auto atoms = nlohmann::ordered_json::array();
        for (const auto& atom : term.atoms) atoms.push_back(to_json(atom));
        terms.push_back({{"coef", to_string(term.coef)}, {"atoms", std::move(atoms)}});
    }
    j["terms"] = std::move(terms);
    if (const auto* c = std::get_if<ConditionalInequalityDef>(&ineq))
        j["condition"] = to_json(c->condition);
    return j;
}

std::string serialize_inequality(const AnyInequality& ineq) {
    return to_json(ineq).dump(2);
}

namespace {

const nlohmann::json& require(const nlohmann::json& j, const char* key, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) throw ValidationError(path + "." + key, "missing field");
    return *it;
}

std::string require_string(const nlohmann::json& j, const char* key, const std::string& path) {
    const auto& v = require(j, key, path);
    if (!v.is_string()) throw ValidationError(path + "." + key, "expected a string");
    return v.get<std::string>();
}

} // namespace

EventAtom atom_from_json(const nlohmann::json& j, const std::string& path) {
    if (!j.is_object()) throw ValidationError(path, "expected an atom object");
    Party party;
    Slot slot;
    try {
        party = party_from_name(require_string(j, "party", path));
    } catch (const ValidationError& e) {
        throw ValidationError(path + ".party", e.what());
    }
    try {
        slot = slot_from_name(require_string(j, "obs", path));
    } catch (const ValidationError& e) {
        throw ValidationError(path + ".obs", e.what());
    }
    try {
        uint8_t out = outcome_code_from_label(slot, require_string(j, "out", path));
        return {{party, slot}, out};
    } catch (const ValidationError& e) {
        throw ValidationError(path + ".out", e.what());
    }
}

AnyInequality inequality_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ValidationError("", "expected a JSON object");
    InequalityDef def;
    def.name = require_string(j, "name", "");
    std::string cls = require_string(j, "class", "");
    if (cls == "realistic") def.cls = ModelClass::Realistic;
    else if (cls == "noncontextual") def.cls = ModelClass::Noncontextual;
    else throw ValidationError("class", "must be \"realistic\" or \"noncontextual\", got '" + cls + "'");
    try {
        def.bound = parse_rational(require_string(j, "bound", ""));
    } catch (const ParseError& e) {
        throw ValidationError("bound", e.what());
    }
    const auto& terms = require(j, "terms", "");
    if (!terms.is_array()) throw ValidationError("terms", "expected an array");
    if (terms.empty()) throw ValidationError("terms", "at least one term is required");
    for (size_t t = 0; t < terms.size(); ++t) {
        const std::string tpath = "terms[" + std::to_string(t) + "]";
        const auto& jt = terms[t];
        if (!jt.is_object()) throw ValidationError(tpath, "expected a term object");
        ProbabilityTerm term;
        try {
            term.coef = parse_rational(require_string(jt, "coef", tpath));
        } catch (const ParseError& e) {
            throw ValidationError(tpath + ".coef", e.what());
        }
        const auto& atoms = require(jt, "atoms", tpath);
        if (!atoms.is_array()) throw ValidationError(tpath + ".atoms", "expected an array");
        if (atoms.empty()) throw ValidationError(tpath + ".atoms", "at least one atom is required");
        std::set<ObservableRef> seen;
        std::set<Party> parties;
        for (size_t n = 0; n < atoms.size(); ++n) {
            const std::string apath = tpath + ".atoms[" + std::to_string(n) + "]";
            EventAtom atom = atom_from_json(atoms[n], apath);
            if (!seen.insert(atom.obs).second)
                throw ValidationError(apath, "duplicate atom for observable " +
                                                 std::string(party_name(atom.obs.party)) + "." +
                                                 slot_name(atom.obs.slot));
            if (!parties.insert(atom.obs.party).second)
                throw ValidationError(apath, "more than one atom on party " +
                                                 std::string(party_name(atom.obs.party)));
            term.atoms.push_back(atom);
        }
        def.terms.push_back(std::move(term));
    }
    if (auto it = j.find("condition"); it != j.end())
        return conditionalize(std::move(def), atom_from_json(*it, "condition"));
    return def;
}

AnyInequality parse_inequality(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    return inequality_from_json(j);
}

} // namespace kslab
