#include "kslab/hvstates.hpp"

#include "kslab/errors.hpp"

namespace kslab {

uint8_t outcome_code(const PartyAssignment& s, Slot slot) {
    switch (slot) {
        case Slot::D0: return s.d0;
        case Slot::D1: return s.d1;
        case Slot::T0: return s.t0;
        case Slot::T1: return s.t1;
    }
    throw Error("bad slot");
}

uint8_t outcome_code(const JointAssignment& s, Party party, Slot slot) {
    return outcome_code(party == Party::A ? s.a : s.b, slot);
}

bool is_noncontextual(const PartyAssignment& s) {
    constexpr uint8_t a = 0, b = 1, c = 2;
    if (s.t0 == a && s.d0 != 0) return false;
    if (s.t1 == a && s.d0 != 0) return false;
    if (s.t0 == b && s.d1 != 0) return false;
    if (s.t1 == b && s.d1 != 0) return false;
    if (s.t0 == c && s.t1 == c) return false;
    return true;
}

bool is_noncontextual(const JointAssignment& s) {
    return is_noncontextual(s.a) && is_noncontextual(s.b);
}

const std::vector<PartyAssignment>& enumerate_party(ModelClass cls) {
    static const std::vector<PartyAssignment> realistic = [] {
        std::vector<PartyAssignment> out;
        out.reserve(36);
        for (uint8_t d0 = 0; d0 < 2; ++d0)
            for (uint8_t d1 = 0; d1 < 2; ++d1)
                for (uint8_t t0 = 0; t0 < 3; ++t0)
                    for (uint8_t t1 = 0; t1 < 3; ++t1)
                        out.push_back({d0, d1, t0, t1});
        return out;
    }();
    static const std::vector<PartyAssignment> noncontextual = [] {
        std::vector<PartyAssignment> out;
        for (const auto& s : realistic)
            if (is_noncontextual(s)) out.push_back(s);
        return out;
    }();
    return cls == ModelClass::Realistic ? realistic : noncontextual;
}

const std::vector<JointAssignment>& enumerate_joint(ModelClass cls) {
    static const auto build = [](ModelClass c) {
        std::vector<JointAssignment> out;
        const auto& per_party = enumerate_party(c);
        out.reserve(per_party.size() * per_party.size());
        for (const auto& a : per_party)
            for (const auto& b : per_party)
                out.push_back({a, b});
        return out;
    };
    static const std::vector<JointAssignment> realistic = build(ModelClass::Realistic);
    static const std::vector<JointAssignment> noncontextual = build(ModelClass::Noncontextual);
    return cls == ModelClass::Realistic ? realistic : noncontextual;
}

std::string outcome_label(Slot slot, uint8_t code) {
    switch (slot) {
        case Slot::D0:
        case Slot::D1:
            if (code > 1) throw Error("bad dichotomic outcome code");
            return code ? "1" : "0";
        case Slot::T0:
        case Slot::T1: {
            if (code > 2) throw Error("bad ternary outcome code");
            std::string s(1, "abc"[code]);
            s += (slot == Slot::T0 ? '0' : '1');
            return s;
        }
    }
    throw Error("bad slot");
}

uint8_t outcome_code_from_label(Slot slot, const std::string& label) {
    if (slot == Slot::D0 || slot == Slot::D1) {
        if (label == "0") return 0;
        if (label == "1") return 1;
        throw ValidationError("out", "dichotomic outcome must be \"0\" or \"1\", got '" + label + "'");
    }
    const char idx = slot == Slot::T0 ? '0' : '1';
    if (label.size() == 2 && label[1] == idx) {
        switch (label[0]) {
            case 'a': return 0;
            case 'b': return 1;
            case 'c': return 2;
        }
    }
    throw ValidationError("out", "outcome '" + label + "' does not belong to observable " +
                                     std::string(slot_name(slot)));
}

const char* slot_name(Slot slot) {
    switch (slot) {
        case Slot::D0: return "D0";
        case Slot::D1: return "D1";
        case Slot::T0: return "T0";
        case Slot::T1: return "T1";
    }
    throw Error("bad slot");
}

const char* party_name(Party party) {
    return party == Party::A ? "A" : "B";
}

Slot slot_from_name(const std::string& name) {
    if (name == "D0") return Slot::D0;
    if (name == "D1") return Slot::D1;
    if (name == "T0") return Slot::T0;
    if (name == "T1") return Slot::T1;
    throw ValidationError("obs", "unknown observable slot '" + name + "'");
}

Party party_from_name(const std::string& name) {
    if (name == "A") return Party::A;
    if (name == "B") return Party::B;
    throw ValidationError("party", "party must be \"A\" or \"B\", got '" + name + "'");
}

std::array<std::string, 4> to_labels(const PartyAssignment& s) {
    return {outcome_label(Slot::D0, s.d0), outcome_label(Slot::D1, s.d1),
            outcome_label(Slot::T0, s.t0), outcome_label(Slot::T1, s.t1)};
}

std::array<std::string, 8> to_labels(const JointAssignment& s) {
    auto a = to_labels(s.a), b = to_labels(s.b);
    return {a[0], a[1], a[2], a[3], b[0], b[1], b[2], b[3]};
}

PartyAssignment party_from_labels(const std::array<std::string, 4>& labels) {
    return {outcome_code_from_label(Slot::D0, labels[0]),
            outcome_code_from_label(Slot::D1, labels[1]),
            outcome_code_from_label(Slot::T0, labels[2]),
            outcome_code_from_label(Slot::T1, labels[3])};
}

JointAssignment joint_from_labels(const std::array<std::string, 8>& labels) {
    return {party_from_labels({labels[0], labels[1], labels[2], labels[3]}),
            party_from_labels({labels[4], labels[5], labels[6], labels[7]})};
}

} // namespace kslab
