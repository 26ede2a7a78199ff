#include "kslab/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "kslab/errors.hpp"

namespace kslab {

double Ket::norm2() const {
    double s = 0;
    for (auto z : amps) s += std::norm(z);
    return s;
}

cplx inner(const Ket& x, const Ket& y) {
    if (x.amps.size() != y.amps.size()) throw Error("dimension mismatch in inner product");
    cplx s = 0;
    for (size_t k = 0; k < x.amps.size(); ++k) s += std::conj(x.amps[k]) * y.amps[k];
    return s;
}

double fidelity(const Ket& x, const Ket& y) {
    return std::norm(inner(x, y));
}

const std::array<const char*, 8>& BlockKets::names() {
    static const std::array<const char*, 8> n = {"i", "f", "a0", "b0", "c0", "a1", "b1", "c1"};
    return n;
}

const Ket& BlockKets::by_name(const std::string& name) const {
    if (name == "i") return i;
    if (name == "f") return f;
    if (name == "a0") return a0;
    if (name == "b0") return b0;
    if (name == "c0") return c0;
    if (name == "a1") return a1;
    if (name == "b1") return b1;
    if (name == "c1") return c1;
    throw ValidationError("ket", "unknown ket name '" + name + "'");
}

static Ket& by_name_mut(BlockKets& k, const std::string& name) {
    return const_cast<Ket&>(k.by_name(name));
}

BlockKets standard_kets() {
    const double s2 = 1.0 / std::sqrt(2.0), s3 = 1.0 / std::sqrt(3.0);
    BlockKets k;
    k.i  = {{s3, s3, s3}};
    k.f  = {{s3, -s3, s3}};
    k.a0 = {{0, s2, -s2}};
    k.b0 = {{0, s2, s2}};
    k.c0 = {{1, 0, 0}};
    k.a1 = {{s2, -s2, 0}};
    k.b1 = {{s2, s2, 0}};
    k.c1 = {{0, 0, 1}};
    return k;
}

bool BlockReport::ok() const {
    if (!nonedge_ok || !norm_failures.empty()) return false;
    return std::all_of(edges.begin(), edges.end(), [](const Edge& e) { return e.ok; });
}

BlockReport verify_block(const BlockKets& kets, double tol) {
    static const std::pair<const char*, const char*> edge_list[11] = {
        {"a0", "b0"}, {"a0", "c0"}, {"b0", "c0"},
        {"a1", "b1"}, {"a1", "c1"}, {"b1", "c1"},
        {"i", "a0"},  {"i", "a1"},  {"f", "b0"},  {"f", "b1"},
        {"c0", "c1"},
    };
    BlockReport report;
    for (const char* name : BlockKets::names()) {
        const Ket& k = kets.by_name(name);
        if (k.amps.size() != 3 || std::abs(k.norm2() - 1.0) > tol)
            report.norm_failures.push_back(name);
    }
    for (auto [x, y] : edge_list) {
        double ov = std::abs(inner(kets.by_name(x), kets.by_name(y)));
        report.edges.push_back({x, y, ov, ov < tol});
    }
    report.nonedge_overlap2 = fidelity(kets.f, kets.i);
    report.nonedge_ok = std::abs(report.nonedge_overlap2 - 1.0 / 9.0) < tol;
    return report;
}

const Ket& LabeledObservable::direction(uint8_t code) const {
    if (slot == Slot::D0 || slot == Slot::D1) {
        if (code != 1) throw Error("D-slot \"0\" outcome has no single direction");
        return outcomes[0].second;
    }
    return outcomes.at(code).second;
}

const LabeledObservable& ObservableSet::at(Party p, Slot s) const {
    return obs[static_cast<size_t>(p)][static_cast<size_t>(s)];
}

ObservableSet observables_from_kets(const BlockKets& k) {
    auto D = [](Party p, Slot s, const Ket& dir) {
        return LabeledObservable{p, s, {{"1", dir}}};
    };
    auto T = [](Party p, Slot s, std::array<std::pair<const char*, const Ket*>, 3> dirs) {
        LabeledObservable o{p, s, {}};
        for (auto [label, ket] : dirs) o.outcomes.emplace_back(label, *ket);
        return o;
    };
    ObservableSet os{{{{
                          D(Party::A, Slot::D0, k.i),
                          D(Party::A, Slot::D1, k.f),
                          T(Party::A, Slot::T0, {{{"a0", &k.a0}, {"b0", &k.b0}, {"c0", &k.c0}}}),
                          T(Party::A, Slot::T1, {{{"a1", &k.a1}, {"b1", &k.b1}, {"c1", &k.c1}}}),
                      },
                      {
                          D(Party::B, Slot::D0, k.f),
                          D(Party::B, Slot::D1, k.i),
                          // outcome labels on B are deliberately swapped relative
                          // to the directions: a0 tags b1, b0 tags a1, c0 tags c1
                          T(Party::B, Slot::T0, {{{"a0", &k.b1}, {"b0", &k.a1}, {"c0", &k.c1}}}),
                          T(Party::B, Slot::T1, {{{"a1", &k.b0}, {"b1", &k.a0}, {"c1", &k.c0}}}),
                      }}}};
    return os;
}

ObservableSet paper_observables() {
    return observables_from_kets(standard_kets());
}

BipartiteState standard_state(double visibility) {
    // (|02> - |11> + |20>)/sqrt(3), A-major indexing 3*A + B
    const double s3 = 1.0 / std::sqrt(3.0);
    Ket psi;
    psi.amps.assign(9, 0.0);
    psi.amps[2] = s3;
    psi.amps[4] = -s3;
    psi.amps[6] = s3;
    return {psi, visibility};
}

std::vector<std::string> outcome_alphabet(Slot slot) {
    if (slot == Slot::D0 || slot == Slot::D1) return {"0", "1"};
    std::vector<std::string> out;
    for (uint8_t c = 0; c < 3; ++c) out.push_back(outcome_label(slot, c));
    return out;
}

int outcome_rank(Slot slot, uint8_t code) {
    if ((slot == Slot::D0 || slot == Slot::D1) && code == 0) return 2;
    return 1;
}

namespace {

double pure_joint(const Ket& psi, const Ket& uA, const Ket& uB) {
    cplx amp = 0;
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
            amp += std::conj(uA.amps[j]) * std::conj(uB.amps[k]) * psi.amps[3 * j + k];
    return std::norm(amp);
}

double pure_marginal(const Ket& psi, Party party, const Ket& u) {
    // <psi| (P_u ⊗ I) |psi> = sum_k |<u ⊗ e_k|psi>|^2 (and mirrored for B)
    double p = 0;
    for (int k = 0; k < 3; ++k) {
        cplx amp = 0;
        for (int j = 0; j < 3; ++j) {
            size_t idx = party == Party::A ? 3 * j + k : 3 * k + j;
            amp += std::conj(u.amps[j]) * psi.amps[idx];
        }
        p += std::norm(amp);
    }
    return p;
}

struct AtomEvent {
    const Ket* dir; // of the "1" side for D slots
    int rank;
    bool complement; // D-slot "0"
};

AtomEvent resolve(const ObservableSet& os, const EventAtom& atom) {
    const LabeledObservable& o = os.at(atom.obs.party, atom.obs.slot);
    bool isD = atom.obs.slot == Slot::D0 || atom.obs.slot == Slot::D1;
    if (isD && atom.out == 0) return {&o.direction(1), 2, true};
    return {&o.direction(atom.out), 1, false};
}

double pure_joint_event(const Ket& psi, const AtomEvent& ea, const AtomEvent& eb) {
    double p11 = pure_joint(psi, *ea.dir, *eb.dir);
    if (!ea.complement && !eb.complement) return p11;
    double pa = pure_marginal(psi, Party::A, *ea.dir);
    double pb = pure_marginal(psi, Party::B, *eb.dir);
    if (ea.complement && !eb.complement) return pb - p11;
    if (!ea.complement && eb.complement) return pa - p11;
    return 1.0 - pa - pb + p11;
}

} // namespace

double joint_probability(const BipartiteState& state, const ObservableSet& os,
                         const EventAtom& atomA, const EventAtom& atomB) {
    if (atomA.obs.party != Party::A || atomB.obs.party != Party::B)
        throw ValidationError("atoms", "joint probability needs one A atom and one B atom");
    AtomEvent ea = resolve(os, atomA), eb = resolve(os, atomB);
    double pure = pure_joint_event(state.psi, ea, eb);
    double noise = static_cast<double>(ea.rank) * static_cast<double>(eb.rank) / 9.0;
    return state.visibility * pure + (1.0 - state.visibility) * noise;
}

double marginal_probability(const BipartiteState& state, const ObservableSet& os,
                            const EventAtom& atom) {
    AtomEvent e = resolve(os, atom);
    double pure = pure_marginal(state.psi, atom.obs.party, *e.dir);
    if (e.complement) pure = 1.0 - pure;
    return state.visibility * pure + (1.0 - state.visibility) * e.rank / 3.0;
}

double conditional_probability(const BipartiteState& state, const ObservableSet& os,
                               const EventAtom& atomA, const EventAtom& conditionB) {
    double pc = marginal_probability(state, os, conditionB);
    if (pc <= 1e-12) throw Error("conditioning outcome has probability ~0");
    return joint_probability(state, os, atomA, conditionB) / pc;
}

Ket conditioned_state_A(const Ket& psi9, const Ket& directionB) {
    Ket out;
    out.amps.assign(3, 0.0);
    double n2 = 0;
    for (int j = 0; j < 3; ++j) {
        cplx amp = 0;
        for (int k = 0; k < 3; ++k) amp += std::conj(directionB.amps[k]) * psi9.amps[3 * j + k];
        out.amps[j] = amp;
        n2 += std::norm(amp);
    }
    if (n2 <= 1e-24) throw Error("conditioning outcome has probability ~0");
    double inv = 1.0 / std::sqrt(n2);
    for (auto& z : out.amps) z *= inv;
    return out;
}

namespace {

double term_probability(const ProbabilityTerm& term, const BipartiteState& state,
                        const ObservableSet& os, const EventAtom* condition) {
    if (condition) {
        if (term.atoms.size() != 1 || term.atoms[0].obs.party == condition->obs.party)
            throw ValidationError("terms", "conditional terms must hold a single atom on the "
                                           "party opposite the condition");
        return conditional_probability(state, os, term.atoms[0], *condition);
    }
    if (term.atoms.size() == 1) return marginal_probability(state, os, term.atoms[0]);
    if (term.atoms.size() == 2) {
        const EventAtom& x = term.atoms[0];
        const EventAtom& y = term.atoms[1];
        return x.obs.party == Party::A ? joint_probability(state, os, x, y)
                                       : joint_probability(state, os, y, x);
    }
    throw ValidationError("terms", "terms with more than two atoms are not supported");
}

} // namespace

std::vector<double> per_term_probabilities(const AnyInequality& ineq, const BipartiteState& state,
                                           const ObservableSet& os) {
    const InequalityDef& base = base_of(ineq);
    const auto* cond = std::get_if<ConditionalInequalityDef>(&ineq);
    std::vector<double> out;
    out.reserve(base.terms.size());
    for (const auto& term : base.terms)
        out.push_back(term_probability(term, state, os, cond ? &cond->condition : nullptr));
    return out;
}

double quantum_value(const AnyInequality& ineq, const BipartiteState& state,
                     const ObservableSet& os) {
    const InequalityDef& base = base_of(ineq);
    auto probs = per_term_probabilities(ineq, state, os);
    double v = 0;
    for (size_t t = 0; t < probs.size(); ++t) v += to_double(base.terms[t].coef) * probs[t];
    return v;
}

double quantum_value(const AnyInequality& ineq, double visibility) {
    return quantum_value(ineq, standard_state(visibility), paper_observables());
}

double epsilon_threshold(const AnyInequality& ineq, EpsilonConvention conv) {
    double v1 = quantum_value(ineq, 1.0);
    if (v1 <= 0) throw Error("no quantum violation to protect");
    long m = 0, n = 0;
    for (const auto& term : base_of(ineq).terms) {
        if (term.coef > Rat(0)) ++m;
        else if (term.coef < Rat(0)) ++n;
    }
    if (conv == EpsilonConvention::NegativesOnly) {
        if (n == 0) throw Error("no negative terms");
        return v1 / static_cast<double>(n);
    }
    return v1 / static_cast<double>(m + n);
}

CriticalVisibility critical_visibility(const AnyInequality& ineq) {
    double q1 = quantum_value(ineq, 1.0);
    if (q1 <= 0) throw Error("not violated at full visibility");
    double q0 = quantum_value(ineq, 0.0);
    if (q0 >= 0) throw Error("value never crosses the bound on [0,1]");
    double closed = q0 / (q0 - q1);
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        double mid = 0.5 * (lo + hi);
        (quantum_value(ineq, mid) < 0 ? lo : hi) = mid;
    }
    return {closed, 0.5 * (lo + hi)};
}

ProbabilityTable probability_table(const BipartiteState& state, const ObservableSet& os) {
    static const Slot slots[4] = {Slot::D0, Slot::D1, Slot::T0, Slot::T1};
    ProbabilityTable table;
    for (Slot sa : slots) {
        for (Slot sb : slots) {
            auto alphaA = outcome_alphabet(sa);
            auto alphaB = outcome_alphabet(sb);
            for (const auto& oa : alphaA) {
                EventAtom atomA{{Party::A, sa}, outcome_code_from_label(sa, oa)};
                for (const auto& ob : alphaB) {
                    EventAtom atomB{{Party::B, sb}, outcome_code_from_label(sb, ob)};
                    // complement cells can pick up float dust of order 1e-17
                    double p = std::clamp(joint_probability(state, os, atomA, atomB), 0.0, 1.0);
                    table.rows.push_back({sa, sb, oa, ob, p});
                }
            }
        }
    }
    return table;
}

std::string table_to_csv(const ProbabilityTable& table) {
    std::string out = "obsA,outA,obsB,outB,p\n";
    char buf[64];
    for (const auto& r : table.rows) {
        std::snprintf(buf, sizeof buf, "%s,%s,%s,%s,%.12g\n", slot_name(r.obsA), r.outA.c_str(),
                      slot_name(r.obsB), r.outB.c_str(), r.p);
        out += buf;
    }
    return out;
}

nlohmann::ordered_json table_to_json(const ProbabilityTable& table) {
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : table.rows)
        rows.push_back({{"obsA", slot_name(r.obsA)},
                        {"outA", r.outA},
                        {"obsB", slot_name(r.obsB)},
                        {"outB", r.outB},
                        {"p", r.p}});
    return rows;
}

BlockKets kets_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ValidationError("", "expected an object of ket overrides");
    BlockKets kets = standard_kets();
    for (const auto& [name, arr] : j.items()) {
        Ket& target = by_name_mut(kets, name); // validates the name
        if (!arr.is_array() || arr.size() != 3)
            throw ValidationError(name, "expected 3 amplitudes");
        Ket k;
        for (const auto& entry : arr) {
            if (entry.is_number()) {
                k.amps.emplace_back(entry.get<double>(), 0.0);
            } else if (entry.is_array() && entry.size() == 2 && entry[0].is_number() &&
                       entry[1].is_number()) {
                k.amps.emplace_back(entry[0].get<double>(), entry[1].get<double>());
            } else {
                throw ValidationError(name, "amplitude must be a number or [re, im]");
            }
        }
        target = k;
    }
    return kets;
}

} // namespace kslab
