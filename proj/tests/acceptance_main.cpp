// Acceptance gate: prints one PASS/FAIL line per criterion and exits with the
// number of failures.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "kslab/inequalities.hpp"
#include "kslab/montecarlo.hpp"
#include "kslab/quantum.hpp"

using namespace kslab;

namespace {

int failures = 0;

void criterion(int num, const char* desc, bool ok) {
    std::printf("%s criterion %2d: %s\n", ok ? "PASS" : "FAIL", num, desc);
    if (!ok) ++failures;
}

bool has_state(const std::vector<JointAssignment>& v, const JointAssignment& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

} // namespace

int main() {
    // 1: enumeration counts
    criterion(1, "hidden-variable state counts 36/14 per party, 1296/196 jointly",
              enumerate_party(ModelClass::Realistic).size() == 36 &&
                  enumerate_party(ModelClass::Noncontextual).size() == 14 &&
                  enumerate_joint(ModelClass::Realistic).size() == 1296 &&
                  enumerate_joint(ModelClass::Noncontextual).size() == 196);

    // 2: realistic maximum of K is exactly 0
    {
        auto rep = bound(std::get<InequalityDef>(builtin("K")), ModelClass::Realistic);
        criterion(2, "K realistic maximum exactly 0, attained, never exceeded",
                  rep.maximum == Rat(0) && !rep.maximizers.empty() && rep.violators.empty() &&
                      rep.eligible == 1296);
    }

    // 3: noncontextual bounds with tight witnesses, realistic violations
    {
        auto a_nc = bound(std::get<InequalityDef>(builtin("lemma2a")));
        auto b_nc = bound(std::get<InequalityDef>(builtin("lemma2b")));
        auto l3_nc = bound(std::get<InequalityDef>(builtin("lemma3")));
        auto a_re = bound(std::get<InequalityDef>(builtin("lemma2a")), ModelClass::Realistic);
        auto b_re = bound(std::get<InequalityDef>(builtin("lemma2b")), ModelClass::Realistic);
        auto l3_re = bound(std::get<InequalityDef>(builtin("lemma3")), ModelClass::Realistic);
        JointAssignment w_a = joint_from_labels({"1", "0", "b0", "b1", "0", "1", "a0", "c1"});
        JointAssignment w_3 = joint_from_labels({"1", "0", "b0", "c1", "0", "1", "a0", "c1"});
        JointAssignment v_3 = joint_from_labels({"1", "0", "a0", "a1", "0", "1", "b0", "b1"});
        bool viol3 = false;
        for (const auto& [s, v] : l3_re.violators)
            if (s == v_3 && v == Rat(1)) viol3 = true;
        criterion(3, "noncontextual maxima 0 with tight witnesses; realistic maxima +1",
                  a_nc.maximum == Rat(0) && b_nc.maximum == Rat(0) &&
                      l3_nc.maximum == Rat(0) && has_state(a_nc.maximizers, w_a) &&
                      has_state(l3_nc.maximizers, w_3) && a_re.maximum == Rat(1) &&
                      b_re.maximum == Rat(1) && l3_re.maximum == Rat(1) &&
                      !a_re.violators.empty() && !b_re.violators.empty() && viol3);
    }

    // 4: transcription adjudication of the c/d variants
    {
        auto cp = bound(std::get<InequalityDef>(builtin("lemma2c-printed")));
        auto dp = bound(std::get<InequalityDef>(builtin("lemma2d-printed")));
        auto cc = bound(std::get<InequalityDef>(builtin("lemma2c")));
        auto dc = bound(std::get<InequalityDef>(builtin("lemma2d")));
        criterion(4, "printed c/d variants reach +1 noncontextually, corrected ones stay at 0",
                  cp.maximum == Rat(1) && dp.maximum == Rat(1) && cc.maximum == Rat(0) &&
                      dc.maximum == Rat(0));
    }

    // 5: quantum values
    {
        AnyInequality k = builtin("K");
        auto probs = per_term_probabilities(k, standard_state(), paper_observables());
        const auto& terms = base_of(k).terms;
        bool pos_ok = true;
        int nulls = 0;
        for (size_t t = 0; t < terms.size(); ++t) {
            if (terms[t].coef > Rat(0)) pos_ok &= std::abs(probs[t] - 1.0 / 27.0) < 1e-9;
            else if (probs[t] < 1e-12) ++nulls;
        }
        criterion(5, "quantum values: K 2/27, lemma2a and lemma3 1/27, 20 null K terms",
                  std::abs(quantum_value(k) - 2.0 / 27.0) < 1e-9 &&
                      std::abs(quantum_value(builtin("lemma2a")) - 1.0 / 27.0) < 1e-9 &&
                      std::abs(quantum_value(builtin("lemma3")) - 1.0 / 27.0) < 1e-9 &&
                      pos_ok && nulls == 20);
    }

    // 6: post-selected predictions
    {
        BipartiteState st = standard_state();
        ObservableSet os = paper_observables();
        EventAtom cond{{Party::B, Slot::D0}, 1};
        double p1 = conditional_probability(st, os, {{Party::A, Slot::D1}, 1}, cond);
        double pa0 = conditional_probability(st, os, {{Party::A, Slot::T0}, 0}, cond);
        double pa1 = conditional_probability(st, os, {{Party::A, Slot::T1}, 0}, cond);
        Ket collapsed = conditioned_state_A(st.psi, os.at(Party::B, Slot::D0).direction(1));
        double fid = fidelity(collapsed, standard_kets().i);
        criterion(6, "conditionals: P(D1A=1|D0B=1)=1/9, a-outcomes 0, collapse fidelity 1",
                  std::abs(p1 - 1.0 / 9.0) < 1e-9 && std::abs(pa0) < 1e-9 &&
                      std::abs(pa1) < 1e-9 && std::abs(fid - 1.0) < 1e-9);
    }

    // 7: robustness thresholds and critical visibilities
    {
        double ek = epsilon_threshold(builtin("K"), EpsilonConvention::NegativesOnly);
        double ec = epsilon_threshold(builtin("lemma2a-conditional"), EpsilonConvention::Uniform);
        auto vk = critical_visibility(builtin("K"));
        auto va = critical_visibility(builtin("lemma2a"));
        criterion(7, "epsilon 1/270 (K) and 1/27 (conditional); visibility 27/28 and 3/4",
                  std::abs(ek - 1.0 / 270.0) < 1e-12 && std::abs(ec - 1.0 / 27.0) < 1e-12 &&
                      std::abs(vk.closed_form - 27.0 / 28.0) < 1e-9 &&
                      std::abs(vk.closed_form - vk.bisection) < 1e-9 &&
                      std::abs(va.closed_form - 0.75) < 1e-9 &&
                      std::abs(va.closed_form - va.bisection) < 1e-9);
    }

    // 8: orthogonality block
    {
        BlockReport rep = verify_block(standard_kets());
        criterion(8, "all 11 orthogonalities < 1e-12 and |<f|i>|^2 = 1/9",
                  rep.ok() && rep.edges.size() == 11);
    }

    // 9: structural invariants
    {
        bool ok = true;
        static const Slot slots[4] = {Slot::D0, Slot::D1, Slot::T0, Slot::T1};
        ObservableSet os = paper_observables();
        for (double v : {1.0, 0.62}) {
            ProbabilityTable table = probability_table(standard_state(v), os);
            for (Slot sa : slots)
                for (Slot sb : slots) {
                    double sum = 0;
                    for (const auto& r : table.rows)
                        if (r.obsA == sa && r.obsB == sb) sum += r.p;
                    ok &= std::abs(sum - 1.0) < 1e-9;
                }
            for (Slot sa : slots)
                for (const auto& oa : outcome_alphabet(sa)) {
                    double ref = -1;
                    for (Slot sb : slots) {
                        double m = 0;
                        for (const auto& r : table.rows)
                            if (r.obsA == sa && r.obsB == sb && r.outA == oa) m += r.p;
                        if (ref < 0) ref = m;
                        ok &= std::abs(m - ref) < 1e-9;
                    }
                }
            for (Slot sb : slots)
                for (const auto& ob : outcome_alphabet(sb)) {
                    double ref = -1;
                    for (Slot sa : slots) {
                        double m = 0;
                        for (const auto& r : table.rows)
                            if (r.obsA == sa && r.obsB == sb && r.outB == ob) m += r.p;
                        if (ref < 0) ref = m;
                        ok &= std::abs(m - ref) < 1e-9;
                    }
                }
        }
        for (const auto& name : builtin_names()) {
            AnyInequality ineq = builtin(name);
            double q0 = quantum_value(ineq, 0.0);
            double qh = quantum_value(ineq, 0.5);
            double q1 = quantum_value(ineq, 1.0);
            ok &= std::abs(qh - 0.5 * (q0 + q1)) < 1e-9;
        }
        criterion(9, "normalization, no-signaling, and affinity in visibility (< 1e-9)", ok);
    }

    // 10: Monte Carlo reproducibility and accuracy
    {
        int within = 0;
        std::string first_json, first_csv;
        for (uint64_t seed = 0; seed < 100; ++seed) {
            RunConfig cfg{builtin("K"), seed, 1'000'000, 1.0, 3.0};
            auto [table, report] = run(cfg);
            if (std::abs(report.estimate - 2.0 / 27.0) <= 5.0 * report.stderr_) ++within;
            if (seed == 0) {
                first_json = report_to_json(report).dump(2);
                first_csv = counts_to_csv(table);
            }
        }
        RunConfig again{builtin("K"), 0, 1'000'000, 1.0, 3.0};
        auto [tr, rr] = run(again);
        bool reproducible = report_to_json(rr).dump(2) == first_json &&
                            counts_to_csv(tr) == first_csv;

        RunConfig c4{builtin("K"), 0, 10'000, 1.0, 3.0};
        RunConfig c5{builtin("K"), 0, 100'000, 1.0, 3.0};
        double se4 = run(c4).second.stderr_;
        double se5 = run(c5).second.stderr_;
        double se6 = rr.stderr_;
        const double root10 = std::sqrt(10.0);
        bool scaling = se4 / se5 > root10 / 1.5 && se4 / se5 < root10 * 1.5 &&
                       se5 / se6 > root10 / 1.5 && se5 / se6 < root10 * 1.5;

        char desc[160];
        std::snprintf(desc, sizeof desc,
                      "Monte Carlo: %d/100 seeds within 5 SE of 2/27; byte-identical rerun; "
                      "SE ~ 1/sqrt(N)",
                      within);
        criterion(10, desc, within >= 99 && reproducible && scaling);
    }

    if (failures == 0) std::printf("acceptance: all 10 criteria passed\n");
    else std::printf("acceptance: %d criterion(s) failed\n", failures);
    return failures;
}
