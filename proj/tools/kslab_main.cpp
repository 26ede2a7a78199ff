#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "kslab/errors.hpp"
#include "kslab/inequalities.hpp"
#include "kslab/montecarlo.hpp"
#include "kslab/quantum.hpp"
#include "kslab/reference.hpp"

using nlohmann::ordered_json;
using namespace kslab;

namespace {

constexpr int EXIT_USAGE = 1;
constexpr int EXIT_CHECK_FAILED = 2;

void emit(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

AnyInequality resolve_inequality(const std::string& arg) {
    const auto& names = builtin_names();
    if (std::find(names.begin(), names.end(), arg) != names.end()) return builtin(arg);
    std::ifstream in(arg);
    if (!in) throw ValidationError("--ineq", "'" + arg + "' is neither a built-in inequality "
                                                          "nor a readable file");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_inequality(buf.str());
}

ModelClass class_from_flag(const std::string& s) {
    if (s == "realistic") return ModelClass::Realistic;
    if (s == "noncontextual") return ModelClass::Noncontextual;
    throw ValidationError("--class", "must be realistic, noncontextual, or declared");
}

const char* class_name(ModelClass c) {
    return c == ModelClass::Realistic ? "realistic" : "noncontextual";
}

ordered_json labels_json(const JointAssignment& s) {
    auto arr = ordered_json::array();
    for (const auto& l : to_labels(s)) arr.push_back(l);
    return arr;
}

// ---------------------------------------------------------------- enumerate
int cmd_enumerate(const std::string& cls_flag, bool joint, const std::string& format) {
    ModelClass cls = class_from_flag(cls_flag);
    if (format == "csv") {
        std::string out;
        if (joint) {
            const auto& states = enumerate_joint(cls);
            out += "# count=" + std::to_string(states.size()) + "\n";
            out += "d0A,d1A,t0A,t1A,d0B,d1B,t0B,t1B\n";
            for (const auto& s : states) {
                auto l = to_labels(s);
                for (size_t k = 0; k < l.size(); ++k) out += (k ? "," : "") + l[k];
                out += "\n";
            }
        } else {
            const auto& states = enumerate_party(cls);
            out += "# count=" + std::to_string(states.size()) + "\n";
            out += "d0,d1,t0,t1\n";
            for (const auto& s : states) {
                auto l = to_labels(s);
                for (size_t k = 0; k < l.size(); ++k) out += (k ? "," : "") + l[k];
                out += "\n";
            }
        }
        std::cout << out;
        return 0;
    }
    ordered_json j;
    j["kind"] = joint ? "joint" : "party";
    j["class"] = class_name(cls);
    auto arr = ordered_json::array();
    if (joint) {
        for (const auto& s : enumerate_joint(cls)) arr.push_back(labels_json(s));
    } else {
        for (const auto& s : enumerate_party(cls)) {
            auto row = ordered_json::array();
            for (const auto& l : to_labels(s)) row.push_back(l);
            arr.push_back(std::move(row));
        }
    }
    j["count"] = arr.size();
    j["states"] = std::move(arr);
    emit(j);
    return 0;
}

// -------------------------------------------------------------------- bound
int cmd_bound(const std::string& ineq_arg, const std::string& cls_flag, long witnesses,
              bool paper_check) {
    AnyInequality ineq = resolve_inequality(ineq_arg);
    const InequalityDef& base = base_of(ineq);
    ModelClass scan_cls = cls_flag == "declared" ? base.cls : class_from_flag(cls_flag);

    BoundReport rep = std::holds_alternative<ConditionalInequalityDef>(ineq)
                          ? bound(std::get<ConditionalInequalityDef>(ineq), scan_cls)
                          : bound(std::get<InequalityDef>(ineq), scan_cls);

    ordered_json j;
    j["name"] = base.name;
    j["class"] = class_name(scan_cls);
    j["bound"] = to_string(base.bound);
    j["maximum"] = to_string(rep.maximum);
    j["tight"] = rep.maximum == base.bound;
    j["exceeds_bound"] = rep.maximum > base.bound;
    j["eligible_count"] = rep.eligible;
    j["maximizer_count"] = rep.maximizers.size();
    j["violator_count"] = rep.violators.size();
    auto maxers = ordered_json::array();
    for (const auto& s : rep.maximizers) {
        if (witnesses >= 0 && static_cast<long>(maxers.size()) >= witnesses) break;
        maxers.push_back(labels_json(s));
    }
    j["maximizers"] = std::move(maxers);
    auto viols = ordered_json::array();
    for (const auto& [s, v] : rep.violators) {
        if (witnesses >= 0 && static_cast<long>(viols.size()) >= witnesses) break;
        viols.push_back({{"state", labels_json(s)}, {"value", to_string(v)}});
    }
    j["violators"] = std::move(viols);

    int rc = 0;
    if (scan_cls == base.cls && rep.maximum > base.bound) rc = EXIT_CHECK_FAILED;
    if (paper_check) {
        if (const ReferenceValues* ref = reference_for(base.name)) {
            Rat expect = scan_cls == ModelClass::Realistic ? ref->realistic_max
                                                           : ref->noncontextual_max;
            j["reference_maximum"] = to_string(expect);
            j["reference_match"] = rep.maximum == expect;
            if (rep.maximum != expect) rc = EXIT_CHECK_FAILED;
        }
    }
    emit(j);
    return rc;
}

// ------------------------------------------------------------------ quantum
int cmd_quantum(const std::string& ineq_arg, double visibility, bool paper_check) {
    if (visibility < 0 || visibility > 1)
        throw ValidationError("--visibility", "must lie in [0,1]");
    AnyInequality ineq = resolve_inequality(ineq_arg);
    const InequalityDef& base = base_of(ineq);
    BipartiteState state = standard_state(visibility);
    ObservableSet os = paper_observables();

    auto probs = per_term_probabilities(ineq, state, os);
    double value = 0;
    for (size_t t = 0; t < probs.size(); ++t) value += to_double(base.terms[t].coef) * probs[t];

    ordered_json j;
    j["name"] = base.name;
    j["visibility"] = visibility;
    j["value"] = value;
    auto terms = ordered_json::array();
    for (size_t t = 0; t < probs.size(); ++t) {
        auto atoms = ordered_json::array();
        for (const auto& atom : base.terms[t].atoms) atoms.push_back(to_json(atom));
        terms.push_back({{"coef", to_string(base.terms[t].coef)},
                         {"atoms", std::move(atoms)},
                         {"probability", std::clamp(probs[t], 0.0, 1.0)}});
    }
    j["terms"] = std::move(terms);
    if (const auto* c = std::get_if<ConditionalInequalityDef>(&ineq))
        j["condition"] = to_json(c->condition);

    int rc = 0;
    const ReferenceValues* ref = reference_for(base.name);
    if (ref && ref->quantum_v1 && ref->quantum_v0) {
        // the value is affine in visibility, so the frozen endpoints give the
        // reference at any v
        double expect = visibility * to_double(*ref->quantum_v1) +
                        (1 - visibility) * to_double(*ref->quantum_v0);
        j["reference"] = expect;
        j["abs_diff"] = std::abs(value - expect);
        if (paper_check && std::abs(value - expect) > 1e-9) rc = EXIT_CHECK_FAILED;
    }
    emit(j);
    return rc;
}

// --------------------------------------------------------------- robustness
int cmd_robustness(const std::string& ineq_arg, const std::string& convention,
                   bool paper_check) {
    AnyInequality ineq = resolve_inequality(ineq_arg);
    const InequalityDef& base = base_of(ineq);
    EpsilonConvention conv;
    if (convention == "negatives-only") conv = EpsilonConvention::NegativesOnly;
    else if (convention == "uniform") conv = EpsilonConvention::Uniform;
    else throw ValidationError("--convention", "must be negatives-only or uniform");

    double eps, q1;
    CriticalVisibility vis{};
    try {
        q1 = quantum_value(ineq, 1.0);
        eps = epsilon_threshold(ineq, conv);
        vis = critical_visibility(ineq);
    } catch (const Error& e) {
        std::cerr << "robustness: " << e.what() << "\n";
        return EXIT_USAGE;
    }

    ordered_json j;
    j["name"] = base.name;
    j["quantum_value"] = q1;
    j["epsilon"] = {{"convention", convention}, {"value", eps}};
    bool agree = std::abs(vis.closed_form - vis.bisection) < 1e-9;
    j["critical_visibility"] = {{"closed_form", vis.closed_form},
                                {"bisection", vis.bisection},
                                {"agreement", agree}};

    int rc = agree ? 0 : EXIT_CHECK_FAILED;
    if (const ReferenceValues* ref = reference_for(base.name)) {
        auto expect_eps = conv == EpsilonConvention::NegativesOnly ? ref->eps_negatives
                                                                   : ref->eps_uniform;
        if (expect_eps) {
            j["epsilon"]["exact"] = to_string(*expect_eps);
            if (paper_check && std::abs(eps - to_double(*expect_eps)) > 1e-12)
                rc = EXIT_CHECK_FAILED;
        }
        if (ref->critical_vis) {
            j["critical_visibility"]["exact"] = to_string(*ref->critical_vis);
            if (paper_check &&
                std::abs(vis.closed_form - to_double(*ref->critical_vis)) > 1e-9)
                rc = EXIT_CHECK_FAILED;
        }
    }
    emit(j);
    return rc;
}

// ----------------------------------------------------------------- simulate
int cmd_simulate(const std::string& ineq_arg, uint64_t shots, uint64_t seed, double visibility,
                 double z_threshold, const std::string& counts_csv) {
    RunConfig cfg{resolve_inequality(ineq_arg), seed, shots, visibility, z_threshold};
    auto [table, report] = run(cfg);
    if (!counts_csv.empty()) {
        std::ofstream out(counts_csv);
        if (!out) throw ValidationError("--counts-csv", "cannot write '" + counts_csv + "'");
        out << counts_to_csv(table);
    }
    emit(report_to_json(report));
    return 0;
}

// ------------------------------------------------------------- export-table
int cmd_export_table(double visibility, const std::string& format) {
    if (visibility < 0 || visibility > 1)
        throw ValidationError("--visibility", "must lie in [0,1]");
    ProbabilityTable table = probability_table(standard_state(visibility), paper_observables());
    if (format == "csv") std::cout << table_to_csv(table);
    else emit(table_to_json(table));
    return 0;
}

// --------------------------------------------------------------- verify-all
struct CheckLog {
    int failures = 0;
    int discrepancies = 0;
    int checks = 0;

    void ok(const std::string& msg) {
        ++checks;
        std::cout << "[ok]   " << msg << "\n";
    }
    void fail(const std::string& msg) {
        ++checks;
        ++failures;
        std::cout << "[FAIL] " << msg << "\n";
    }
    void expect(bool cond, const std::string& msg) { cond ? ok(msg) : fail(msg); }
    void discrepancy(const std::string& msg) {
        ++checks;
        ++discrepancies;
        std::cout << "[documented discrepancy] " << msg << "\n";
    }
};

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

int cmd_verify_all(const std::string& kets_file) {
    BlockKets kets = standard_kets();
    if (!kets_file.empty()) {
        std::ifstream in(kets_file);
        if (!in) throw ValidationError("--kets", "cannot read '" + kets_file + "'");
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(std::string("malformed kets JSON: ") + e.what());
        }
        kets = kets_from_json(j);
    }
    ObservableSet os = observables_from_kets(kets);
    CheckLog log;

    // orthogonality block
    BlockReport block = verify_block(kets);
    for (const auto& name : block.norm_failures) log.fail("ket " + name + " is not normalized");
    int edge_fails = 0;
    for (const auto& e : block.edges)
        if (!e.ok) {
            ++edge_fails;
            log.fail("orthogonality " + e.x + " | " + e.y + " broken: |<" + e.x + "|" + e.y +
                     ">| = " + fmt(e.overlap));
        }
    if (edge_fails == 0) log.ok("block: all 11 orthogonality edges hold (< 1e-12)");
    log.expect(block.nonedge_ok,
               "block: non-edge overlap |<f|i>|^2 = " + fmt(block.nonedge_overlap2) +
                   " (expected 1/9)");

    // enumeration counts
    log.expect(enumerate_party(ModelClass::Realistic).size() == 36, "36 realistic per-party states");
    log.expect(enumerate_party(ModelClass::Noncontextual).size() == 14,
               "14 noncontextual per-party states");
    log.expect(enumerate_joint(ModelClass::Realistic).size() == 1296, "1296 realistic joint states");
    log.expect(enumerate_joint(ModelClass::Noncontextual).size() == 196,
               "196 noncontextual joint states");

    // classical bounds for every builtin, both classes
    for (const auto& name : builtin_names()) {
        AnyInequality ineq = builtin(name);
        const ReferenceValues* ref = reference_for(name);
        for (ModelClass cls : {ModelClass::Realistic, ModelClass::Noncontextual}) {
            BoundReport rep = std::holds_alternative<ConditionalInequalityDef>(ineq)
                                  ? bound(std::get<ConditionalInequalityDef>(ineq), cls)
                                  : bound(std::get<InequalityDef>(ineq), cls);
            Rat expect = cls == ModelClass::Realistic ? ref->realistic_max
                                                      : ref->noncontextual_max;
            std::string msg = std::string(name) + ": " + class_name(cls) + " max " +
                              to_string(rep.maximum) + " (expected " + to_string(expect) + ")";
            if (rep.maximum != expect) log.fail(msg);
            else if (cls == ModelClass::Noncontextual && ref->nc_discrepancy)
                log.discrepancy(msg + " — exceeds its declared bound as transcribed");
            else log.ok(msg);
        }
    }

    // witnesses
    auto contains_state = [](const std::vector<JointAssignment>& v, const JointAssignment& s) {
        return std::find(v.begin(), v.end(), s) != v.end();
    };
    JointAssignment w_lemma2a = joint_from_labels({"1", "0", "b0", "b1", "0", "1", "a0", "c1"});
    JointAssignment w_lemma3 = joint_from_labels({"1", "0", "b0", "c1", "0", "1", "a0", "c1"});
    JointAssignment v_lemma3 = joint_from_labels({"1", "0", "a0", "a1", "0", "1", "b0", "b1"});
    log.expect(contains_state(bound(std::get<InequalityDef>(builtin("lemma2a"))).maximizers,
                              w_lemma2a),
               "lemma2a: tight witness (1,0,b0,b1,0,1,a0,c1) attains the bound");
    log.expect(contains_state(bound(std::get<InequalityDef>(builtin("lemma3"))).maximizers,
                              w_lemma3),
               "lemma3: tight witness (1,0,b0,c1,0,1,a0,c1) attains the bound");
    {
        auto rep = bound(std::get<InequalityDef>(builtin("lemma3")), ModelClass::Realistic);
        bool found = false;
        for (const auto& [s, v] : rep.violators)
            if (s == v_lemma3 && v == Rat(1)) found = true;
        log.expect(found, "lemma3: realistic violator (1,0,a0,a1,0,1,b0,b1) reaches +1");
    }

    // quantum values against frozen references
    BipartiteState pure = standard_state(1.0);
    for (const auto& name : builtin_names()) {
        const ReferenceValues* ref = reference_for(name);
        if (!ref->quantum_v1) continue;
        double v = quantum_value(builtin(name), pure, os);
        double expect = to_double(*ref->quantum_v1);
        log.expect(std::abs(v - expect) < 1e-9, std::string(name) + ": quantum value " + fmt(v) +
                                                    " (expected " + to_string(*ref->quantum_v1) +
                                                    ")");
    }

    // K term structure: 2 positive terms at 1/27, all 20 negatives null
    {
        AnyInequality k = builtin("K");
        auto probs = per_term_probabilities(k, pure, os);
        const auto& terms = base_of(k).terms;
        bool pos_ok = true, neg_ok = true;
        for (size_t t = 0; t < terms.size(); ++t) {
            if (terms[t].coef > Rat(0)) pos_ok &= std::abs(probs[t] - 1.0 / 27.0) < 1e-9;
            else neg_ok &= probs[t] < 1e-12;
        }
        log.expect(pos_ok, "K: both positive terms equal 1/27");
        log.expect(neg_ok, "K: all 20 negative terms are null (< 1e-12)");

        AnyInequality kp = builtin("K-printed");
        auto probs_p = per_term_probabilities(kp, pure, os);
        const auto& terms_p = base_of(kp).terms;
        int nonnull = 0;
        for (size_t t = 0; t < terms_p.size(); ++t)
            if (terms_p[t].coef < Rat(0) && probs_p[t] > 1e-12) ++nonnull;
        if (nonnull > 0)
            log.discrepancy("K-printed: " + std::to_string(nonnull) +
                            " negative terms are not null at v=1 (value " +
                            fmt(quantum_value(kp, pure, os)) + "), kept for comparison");
        else log.ok("K-printed: all negative terms null");
    }

    // conditional predictions
    {
        EventAtom d1A{{Party::A, Slot::D1}, 1};
        EventAtom t0A{{Party::A, Slot::T0}, 0};
        EventAtom t1A{{Party::A, Slot::T1}, 0};
        EventAtom d0B{{Party::B, Slot::D0}, 1};
        double p = conditional_probability(pure, os, d1A, d0B);
        log.expect(std::abs(p - 1.0 / 9.0) < 1e-9,
                   "conditional: P(D1A=1 | D0B=1) = " + fmt(p) + " (expected 1/9)");
        double pa0 = conditional_probability(pure, os, t0A, d0B);
        double pa1 = conditional_probability(pure, os, t1A, d0B);
        log.expect(std::abs(pa0) < 1e-9 && std::abs(pa1) < 1e-9,
                   "conditional: both a-outcome conditionals are 0");
        Ket cond = conditioned_state_A(pure.psi, os.at(Party::B, Slot::D0).direction(1));
        double fid = fidelity(cond, kets.i);
        log.expect(std::abs(fid - 1.0) < 1e-9,
                   "conditional: collapsed A state has fidelity " + fmt(fid) + " with i");
    }

    // robustness thresholds
    {
        double epsK = epsilon_threshold(builtin("K"), EpsilonConvention::NegativesOnly);
        log.expect(std::abs(epsK - 1.0 / 270.0) < 1e-12,
                   "K: negatives-only epsilon " + fmt(epsK) + " (expected 1/270)");
        double epsC =
            epsilon_threshold(builtin("lemma2a-conditional"), EpsilonConvention::Uniform);
        log.expect(std::abs(epsC - 1.0 / 27.0) < 1e-12,
                   "lemma2a-conditional: uniform epsilon " + fmt(epsC) + " (expected 1/27)");
        auto visK = critical_visibility(builtin("K"));
        log.expect(std::abs(visK.closed_form - 27.0 / 28.0) < 1e-9 &&
                       std::abs(visK.closed_form - visK.bisection) < 1e-9,
                   "K: critical visibility " + fmt(visK.closed_form) + " (expected 27/28)");
        auto visA = critical_visibility(builtin("lemma2a"));
        log.expect(std::abs(visA.closed_form - 0.75) < 1e-9 &&
                       std::abs(visA.closed_form - visA.bisection) < 1e-9,
                   "lemma2a: critical visibility " + fmt(visA.closed_form) + " (expected 3/4)");
    }

    // structural invariants: normalization, no-signaling, affinity
    for (double v : {1.0, 0.7}) {
        BipartiteState st = standard_state(v);
        ProbabilityTable table = probability_table(st, os);
        double worst_sum = 0;
        static const Slot slots[4] = {Slot::D0, Slot::D1, Slot::T0, Slot::T1};
        for (Slot sa : slots)
            for (Slot sb : slots) {
                double sum = 0;
                for (const auto& r : table.rows)
                    if (r.obsA == sa && r.obsB == sb) sum += r.p;
                worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
            }
        log.expect(worst_sum < 1e-9, "v=" + fmt(v) + ": every setting's outcomes sum to 1 (max |err| " +
                                         fmt(worst_sum) + ")");
        double worst_ns = 0;
        for (Slot sa : slots)
            for (const auto& oa : outcome_alphabet(sa)) {
                double ref_m = -1;
                for (Slot sb : slots) {
                    double m = 0;
                    for (const auto& r : table.rows)
                        if (r.obsA == sa && r.obsB == sb && r.outA == oa) m += r.p;
                    if (ref_m < 0) ref_m = m;
                    worst_ns = std::max(worst_ns, std::abs(m - ref_m));
                }
            }
        for (Slot sb : slots)
            for (const auto& ob : outcome_alphabet(sb)) {
                double ref_m = -1;
                for (Slot sa : slots) {
                    double m = 0;
                    for (const auto& r : table.rows)
                        if (r.obsA == sa && r.obsB == sb && r.outB == ob) m += r.p;
                    if (ref_m < 0) ref_m = m;
                    worst_ns = std::max(worst_ns, std::abs(m - ref_m));
                }
            }
        log.expect(worst_ns < 1e-9,
                   "v=" + fmt(v) + ": no-signaling (max marginal deviation " + fmt(worst_ns) + ")");
    }
    {
        double worst = 0;
        for (const auto& name : builtin_names()) {
            AnyInequality ineq = builtin(name);
            double q0 = quantum_value(ineq, standard_state(0.0), os);
            double qh = quantum_value(ineq, standard_state(0.5), os);
            double q1 = quantum_value(ineq, standard_state(1.0), os);
            worst = std::max(worst, std::abs(qh - 0.5 * (q0 + q1)));
        }
        log.expect(worst < 1e-9,
                   "quantum value affine in visibility (max midpoint error " + fmt(worst) + ")");
    }

    std::cout << "verify-all: " << log.checks << " checks, " << log.failures << " failures, "
              << log.discrepancies << " documented discrepancies\n";
    return log.failures == 0 ? 0 : EXIT_CHECK_FAILED;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"kslab: exhaustive and quantum verification of a two-qutrit "
                 "noncontextuality test"};
    app.require_subcommand(1);

    std::string cls_flag = "realistic";
    bool party = false, joint = false;
    std::string format = "json";
    auto* en = app.add_subcommand("enumerate", "list hidden-variable states");
    en->add_option("--class", cls_flag, "realistic|noncontextual")->capture_default_str();
    auto* party_flag = en->add_flag("--party", party, "per-party states (default)");
    en->add_flag("--joint", joint, "joint two-party states")->excludes(party_flag);
    en->add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();

    std::string b_ineq, b_cls = "declared";
    long b_witnesses = -1;
    bool b_paper = false;
    auto* bo = app.add_subcommand("bound", "exact maximum over a hidden-variable class");
    bo->add_option("--ineq", b_ineq, "built-in name or JSON file")->required();
    bo->add_option("--class", b_cls, "declared|realistic|noncontextual")->capture_default_str();
    bo->add_option("--witnesses", b_witnesses, "max witnesses listed (-1 = all)")
        ->capture_default_str();
    bo->add_flag("--paper-check", b_paper, "compare against frozen reference values");

    std::string q_ineq;
    double q_vis = 1.0;
    bool q_paper = false;
    auto* qu = app.add_subcommand("quantum", "Born-rule value of an inequality");
    qu->add_option("--ineq", q_ineq, "built-in name or JSON file")->required();
    qu->add_option("--visibility", q_vis, "mixing weight of the pure state")
        ->capture_default_str();
    qu->add_flag("--paper-check", q_paper, "fail (exit 2) if off the reference by > 1e-9");

    std::string r_ineq, r_conv = "negatives-only";
    bool r_paper = false;
    auto* ro = app.add_subcommand("robustness", "noise thresholds and critical visibility");
    ro->add_option("--ineq", r_ineq, "built-in name or JSON file")->required();
    ro->add_option("--convention", r_conv, "negatives-only|uniform")->capture_default_str();
    ro->add_flag("--paper-check", r_paper, "compare against frozen reference values");

    std::string s_ineq, s_counts;
    uint64_t s_shots = 1'000'000, s_seed = 0;
    double s_vis = 1.0, s_z = 3.0;
    auto* si = app.add_subcommand("simulate", "finite-statistics sampling of the experiment");
    si->add_option("--ineq", s_ineq, "built-in name or JSON file")->required();
    si->add_option("--shots", s_shots, "shots per setting")->capture_default_str();
    si->add_option("--seed", s_seed, "RNG seed")->envname("KSLAB_SEED")->capture_default_str();
    si->add_option("--visibility", s_vis, "mixing weight of the pure state")
        ->capture_default_str();
    si->add_option("--z", s_z, "violation verdict threshold")->capture_default_str();
    si->add_option("--counts-csv", s_counts, "also write the raw count table to this file");

    std::string v_kets;
    auto* ve = app.add_subcommand("verify-all", "run every check and summarize");
    ve->add_option("--kets", v_kets, "JSON file overriding block kets (fault injection)");

    double t_vis = 1.0;
    std::string t_format = "csv";
    auto* ex = app.add_subcommand("export-table", "full joint probability table");
    ex->add_option("--visibility", t_vis, "mixing weight of the pure state")
        ->capture_default_str();
    ex->add_option("--format", t_format, "csv|json")->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : EXIT_USAGE;
    }

    try {
        if (en->parsed()) return cmd_enumerate(cls_flag, joint, format);
        if (bo->parsed()) return cmd_bound(b_ineq, b_cls, b_witnesses, b_paper);
        if (qu->parsed()) return cmd_quantum(q_ineq, q_vis, q_paper);
        if (ro->parsed()) return cmd_robustness(r_ineq, r_conv, r_paper);
        if (si->parsed()) return cmd_simulate(s_ineq, s_shots, s_seed, s_vis, s_z, s_counts);
        if (ve->parsed()) return cmd_verify_all(v_kets);
        if (ex->parsed()) return cmd_export_table(t_vis, t_format);
    } catch (const Error& e) {
        std::cerr << "kslab: " << e.what() << "\n";
        return EXIT_USAGE;
    }
    return EXIT_USAGE;
}
