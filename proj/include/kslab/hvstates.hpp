#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace kslab {

enum class Party : uint8_t { A, B };
enum class Slot : uint8_t { D0, D1, T0, T1 };
enum class ModelClass : uint8_t { Realistic, Noncontextual };

// Ternary outcomes are stored as 0/1/2 for a/b/c; the index (0 or 1) is implied
// by the slot. Dichotomic outcomes are 0/1 directly.
struct PartyAssignment {
    uint8_t d0, d1, t0, t1;
    auto operator<=>(const PartyAssignment&) const = default;
};

struct JointAssignment {
    PartyAssignment a, b;
    auto operator<=>(const JointAssignment&) const = default;
};

// outcome of one observable slot as stored code (D: 0/1, T: 0..2)
uint8_t outcome_code(const PartyAssignment& s, Slot slot);
uint8_t outcome_code(const JointAssignment& s, Party party, Slot slot);

// A ternary observable may yield its a-label only if the corresponding d0 is 0,
// its b-label only if d1 is 0, and the two c-labels are mutually exclusive.
bool is_noncontextual(const PartyAssignment& s);
bool is_noncontextual(const JointAssignment& s);

// Lexicographic in (d0, d1, t0, t1); joint enumeration is A-major.
const std::vector<PartyAssignment>& enumerate_party(ModelClass cls);
const std::vector<JointAssignment>& enumerate_joint(ModelClass cls);

// label strings: D slots "0"/"1", T0 "a0"/"b0"/"c0", T1 "a1"/"b1"/"c1"
std::string outcome_label(Slot slot, uint8_t code);
uint8_t outcome_code_from_label(Slot slot, const std::string& label); // throws ValidationError
const char* slot_name(Slot slot);
const char* party_name(Party party);
Slot slot_from_name(const std::string& name);                         // throws ValidationError
Party party_from_name(const std::string& name);                       // throws ValidationError

std::array<std::string, 4> to_labels(const PartyAssignment& s);
std::array<std::string, 8> to_labels(const JointAssignment& s);
PartyAssignment party_from_labels(const std::array<std::string, 4>& labels);
JointAssignment joint_from_labels(const std::array<std::string, 8>& labels);

} // namespace kslab
