// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "chainlcd/analysis.hpp"
#include "chainlcd/bounds.hpp"
#include "chainlcd/forests.hpp"
#include "chainlcd/generators.hpp"
#include "chainlcd/report.hpp"
#include "chainlcd/verify.hpp"
#include "oracles.hpp"

using namespace chainlcd;

namespace {

struct Tally {
    std::size_t checked = 0;
    std::size_t failed = 0;
    std::string first_failure;

    void expect(bool ok, const std::string& what) {
        ++checked;
        if (ok) return;
        if (failed++ == 0) first_failure = what;
    }
    bool pass() const { return checked > 0 && failed == 0; }
    std::string summary() const {
        std::ostringstream os;
        os << checked << " checks, " << failed << " failures";
        if (failed) os << "; first: " << first_failure;
        return os.str();
    }
};

int failures = 0;

void report(int number, const std::string& title, bool pass, const std::string& detail) {
    std::cout << (pass ? "PASS" : "FAIL") << "  criterion " << number << ": " << title << " (" << detail << ")"
              << std::endl;
    if (!pass) ++failures;
}

Integer min_int(const Integer& a, const Integer& b) { return a < b ? a : b; }

Integer ipow(const Integer& base, std::size_t e) { return pow(base, static_cast<unsigned long>(e)); }

Integer stationary_cap(const StochasticMatrix& P) {
    auto st = denominator_stats(P);
    const std::size_t n = P.size();
    Integer nn = static_cast<unsigned long>(n);
    return min_int(nn * st.row_lcd_product, nn * ipow(st.global_lcd, n - 1));
}

std::string label(std::size_t i) { return "instance " + std::to_string(i); }

// Suite instances: the seeded random chains of criterion 1.
struct Suite {
    VerifyConfig config;
    std::vector<Instance> instances;
};

Suite build_suite() {
    Suite s;
    s.config.count = 1000;
    s.config.n_min = 2;
    s.config.n_max = 6;
    s.config.m_min = 2;
    s.config.m_max = 10;
    s.config.seed = 1;
    for (std::size_t i = 0; i < s.config.count; ++i) s.instances.push_back(verify_random_instance(s.config, i));
    return s;
}

void criterion_1(const Suite& suite, std::vector<AnalysisReport>& reports) {
    Tally t;
    auto start = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < suite.instances.size(); ++i) {
        const auto& inst = suite.instances[i];
        const auto& P = inst.matrix;
        reports.push_back(analyze(inst));
        const auto& r = reports.back();
        const auto& s = r.structure;

        for (std::size_t l = 0; l < s.recurrent_classes.size(); ++l) {
            const auto& C = s.recurrent_classes[l];
            t.expect(r.stationary_formula[l].probabilities == r.stationary_solve[l].probabilities,
                     label(i) + " stationary routes differ");
            t.expect(r.stationary_formula[l].probabilities == oracle::stationary(P, C),
                     label(i) + " stationary differs from Gauss-Jordan");
        }

        t.expect(r.absorption_formula.values == r.absorption_matrix.values, label(i) + " absorption routes differ");
        for (std::size_t l = 0; l < s.recurrent_classes.size() && !s.transient_states.empty(); ++l) {
            auto expected = oracle::absorption_into(P, s.transient_states, s.recurrent_classes[l]);
            for (std::size_t a = 0; a < s.transient_states.size(); ++a)
                t.expect(r.absorption_formula(s.transient_states[a], l) == expected[a],
                         label(i) + " absorption differs from Gauss-Jordan");
        }

        for (const auto& v : r.visits) {
            t.expect(v.forest_ratio.values == v.matrix_inverse.values, label(i) + " visit routes differ");
            t.expect(v.forest_ratio.values == RationalMatrix::from_rows(oracle::fundamental(P, v.open_set)),
                     label(i) + " visits differ from Gauss-Jordan");
        }
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    t.expect(seconds < 300.0, "runtime over 5 minutes");
    char buf[64];
    std::snprintf(buf, sizeof buf, "; %zu instances in %.1f s", suite.instances.size(), seconds);
    report(1, "tree formula, forest formula and visit ratios match the linear-algebra routes exactly", t.pass(),
           t.summary() + buf);
}

void criterion_2(const std::vector<AnalysisReport>& reports) {
    Tally t;
    std::size_t irreducible = 0;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i];
        const auto& P = r.instance.matrix;
        for (std::size_t l = 0; l < r.structure.recurrent_classes.size(); ++l) {
            const auto& C = r.structure.recurrent_classes[l];
            auto restricted = P.restrict_to_closed(C);
            Integer lcd = oracle::lcd(r.stationary_formula[l].probabilities);
            if (C.size() == P.size()) ++irreducible;
            t.expect(lcd <= stationary_cap(restricted), label(i) + " lcd(pi) above min{nD, nM^(n-1)}");
        }
    }
    report(2, "lcd(pi) <= min{nD, nM^(n-1)} on every recurrent class", t.pass() && irreducible > 0,
           t.summary() + "; " + std::to_string(irreducible) + " irreducible instances");
}

void criterion_3() {
    Tally t;
    for (std::size_t n = 3; n <= 8; ++n) {
        for (long m = 2; m <= 10; ++m) {
            auto fig = gen_fig3(n, m);
            auto s = decompose(fig.matrix);
            auto psi = absorption_forest_formula(fig.matrix, s);
            const std::string tag = "n=" + std::to_string(n) + " M=" + std::to_string(m);
            const Integer power = ipow(Integer(m), n - 2);
            t.expect(psi(0, s.class_of[n - 1]) == Rational(Integer(1), power), tag + " psi(1,{n}) != 1/M^(n-2)");
            Integer lcd = 1;
            for (const auto& row : psi.values) lcd = lcm(lcd, oracle::lcd(row));
            Integer bound = min_int(s.transient_row_lcd_product, ipow(denominator_stats(fig.matrix).global_lcd, n - 2));
            t.expect(lcd == power && bound == power, tag + " lcd or bound differs from M^(n-2)");
            auto checks = check_absorption_bound(fig.matrix, s, psi);
            t.expect(checks[0].tightness_ratio() == Rational(1), tag + " tightness ratio is not 1");
        }
    }
    report(3, "absorption construction: psi(1,{n}) = 1/M^(n-2) and the bound is attained for n in [3,8], M in [2,10]",
           t.pass(), t.summary());
}

void criterion_4() {
    Tally t;
    auto variant = gen_fig2_variant({3, 4, 5});
    auto pi = oracle::stationary(variant.matrix, {0, 1, 2});
    t.expect(variant.M == 5, "variant M != 5");
    t.expect(pi == oracle::vec({"20/47", "15/47", "12/47"}), "variant pi != (20/47, 15/47, 12/47)");
    t.expect(oracle::lcd(pi) == 47, "variant lcd != 47");
    t.expect(stationary_tree_formula(variant.matrix).probabilities == pi, "variant tree formula differs");

    // Smallest feasible prime construction: n = 2, q = 2.
    auto prime = gen_fig2(2, 2);
    auto pi2 = oracle::stationary(prime.matrix, {0, 1});
    Integer sum_q = prime.p[0] * prime.p[1] / prime.p[0] + prime.p[0] * prime.p[1] / prime.p[1];
    t.expect(oracle::lcd(pi2) == sum_q, "prime construction lcd != sum Q");
    t.expect(sum_q == 17, "prime construction sum Q != 17");
    t.expect(pi2 == prime.predicted_stationary, "prime construction pi differs from Q_v / sum Q");

    auto three = gen_fig2(3, 3);
    auto pi3 = oracle::stationary(three.matrix, {0, 1, 2});
    t.expect(oracle::lcd(pi3) == three.predicted_lcd, "n=3 prime construction lcd != sum Q");
    report(4, "cycle witnesses: (3,4,5) gives lcd 47, prime construction (n=2,q=2) gives lcd = sum Q = 17", t.pass(),
           t.summary());
}

void criterion_5(const std::vector<AnalysisReport>& reports) {
    Tally t;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i];
        const auto& P = r.instance.matrix;
        const auto& rew = *r.instance.rewards;
        t.expect(r.gain.has_value() && r.bias_anchored && r.bias_weighted, label(i) + " missing bias");
        if (!r.gain || !r.bias_anchored || !r.bias_weighted) continue;
        auto st = denominator_stats(P);
        const std::size_t n = P.size();
        Integer base = rew.max_abs() * static_cast<unsigned long>(n) *
                       min_int(st.row_lcd_product, ipow(st.global_lcd, n - 1));
        for (const auto* b : {&*r.bias_anchored, &*r.bias_weighted}) {
            const auto& u = b->vector.u;
            // Residual of P chi = chi and P u = chi + u - r, computed here.
            bool exact = true;
            for (State v = 0; v < n; ++v) {
                Rational pchi, pu;
                for (State w = 0; w < n; ++w) {
                    pchi += P(v, w) * r.gain->chi[w];
                    pu += P(v, w) * u[w];
                }
                exact = exact && pchi == r.gain->chi[v] && pu == r.gain->chi[v] + u[v] - Rational(rew.entries[v]);
            }
            t.expect(exact, label(i) + " nonzero bias residual");
            long factor = b->vector.normalization == BiasNormalization::Anchored ? 2 : 4;
            t.expect(sup_norm(u) <= Rational(Integer(base * factor)), label(i) + " max|u| above the bound");
        }
    }
    report(5, "both bias normalizations solve the bias equations exactly and respect the 2x / 4x bounds", t.pass(),
           t.summary());
}

void criterion_6(const std::vector<AnalysisReport>& reports) {
    Tally t;
    std::size_t multichain = 0;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i];
        if (r.structure.recurrent_classes.size() < 2 || !r.gain) continue;
        ++multichain;
        Integer lcd = oracle::lcd(r.gain->chi);
        Integer D = denominator_stats(r.instance.matrix).row_lcd_product;
        Integer s = static_cast<unsigned long>(r.structure.recurrent_count());
        t.expect(lcd * lcd <= ipow(Integer(3), s.get_ui()) * D * D, label(i) + " lcd(chi)^2 > 3^s D^2");
        Integer sizes = 1;
        for (const auto& C : r.structure.recurrent_classes) sizes *= static_cast<unsigned long>(C.size());
        t.expect(lcd <= sizes * D, label(i) + " lcd(chi) > |C_1|...|C_p| D");
    }
    report(6, "multichain gain: lcd(chi)^2 <= 3^s D^2 and lcd(chi) <= |C_1|...|C_p| D", t.pass() && multichain > 0,
           t.summary() + "; " + std::to_string(multichain) + " multichain instances");
}

void criterion_7(const std::vector<AnalysisReport>& reports) {
    Tally t;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i];
        auto st = denominator_stats(r.instance.matrix);
        for (const auto& v : r.visits) {
            Integer cap = 1;
            for (State w : v.open_set) cap *= st.row_lcds[w];
            const auto& N = v.matrix_inverse.values;
            for (std::size_t a = 0; a < N.rows(); ++a)
                for (std::size_t b = 0; b < N.cols(); ++b)
                    t.expect(N(a, b) <= Rational(cap), label(i) + " visit entry above prod M_w");
        }
    }
    report(7, "fundamental-matrix entries are at most the product of row lcds over the open set", t.pass(),
           t.summary());
}

void check_lemmas(const StochasticMatrix& P, Tally& t, const std::string& tag) {
    const std::size_t n = P.size();
    auto st = denominator_stats(P);
    const Rational D(st.row_lcd_product), Mtree(ipow(st.global_lcd, n - 1));
    for (State v = 0; v < n; ++v) {
        auto family = enumerate_forests(P, {v});
        for (const auto& f : family.forests) {
            t.expect((f.weight * D).is_integer(), tag + " tree weight times D not integral");
            t.expect((f.weight * Mtree).is_integer(), tag + " tree weight times M^(n-1) not integral");
        }
        t.expect(family.total_weight <= Rational(1), tag + " tree family weight above 1");
    }
    auto s = decompose(P);
    if (s.recurrent_count() < 2) return;
    const Rational DT(s.transient_row_lcd_product), Mforest(ipow(st.global_lcd, n >= 2 ? n - 2 : 0));
    auto family = enumerate_forests(P, s.recurrent_states);
    for (const auto& f : family.forests) {
        t.expect((f.weight * DT).is_integer(), tag + " forest weight times D_T not integral");
        t.expect((f.weight * Mforest).is_integer(), tag + " forest weight times M^(n-2) not integral");
    }
    t.expect(family.total_weight <= Rational(1), tag + " forest family weight above 1");
}

void criterion_8(const Suite& suite) {
    Tally t;
    for (std::size_t i = 0; i < suite.instances.size(); ++i) check_lemmas(suite.instances[i].matrix, t, label(i));
    // The random suite stops at n = 6; add n = 7 chains.
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        auto P = gen_random({.n = 7, .M = 2 + seed % 9, .density = 0.3 + 0.1 * static_cast<double>(seed % 4),
                             .seed = seed, .closed_blocks = seed % 2 ? 2u : 0u});
        check_lemmas(P, t, "n=7 seed " + std::to_string(seed));
    }
    for (std::size_t n = 3; n <= 7; ++n) check_lemmas(gen_fig3(n, 3).matrix, t, "fig3 n=" + std::to_string(n));
    report(8, "per-forest denominator lemmas and family weights <= 1 for n <= 7", t.pass(), t.summary());
}

void criterion_9(const Suite& suite) {
    Tally t;
    auto check = [&](const StochasticMatrix& P, const std::string& tag) {
        auto st = denominator_stats(P);
        const std::size_t n = P.size();
        Integer ours = stationary_cap(P);
        Integer nn = static_cast<unsigned long>(n);
        t.expect(ours * ours <= ipow(nn, n) * ipow(st.global_lcd, 2 * n), tag + " above n^(n/2) M^n");
        const std::size_t k = st.nondeterministic_rows;
        if (k >= 1)
            t.expect(ours <= Integer(static_cast<unsigned long>(k)) * nn * ipow(2 * st.global_lcd, k + 1),
                     tag + " above k n (2M)^(k+1)");
    };
    for (std::size_t i = 0; i < suite.instances.size(); ++i) check(suite.instances[i].matrix, label(i));
    for (std::size_t n = 3; n <= 8; ++n) check(gen_fig3(n, 5).matrix, "fig3 n=" + std::to_string(n));
    check(gen_fig2_variant({3, 4, 5}).matrix, "fig2 variant");
    report(9, "min{nD, nM^(n-1)} <= n^(n/2) M^n and, for k >= 1, <= k n (2M)^(k+1)", t.pass(), t.summary());
}

void criterion_10() {
    Tally t;
    const std::uint64_t trajectories = 100000, seed = 20240101;
    auto run = [&](const StochasticMatrix& P, State start, const std::string& tag) {
        auto s = decompose(P);
        auto psi = absorption_forest_formula(P, s);
        auto a = monte_carlo_absorption(P, s, psi, start, trajectories, seed);
        auto b = monte_carlo_absorption(P, s, psi, start, trajectories, seed);
        t.expect(a.pass, tag + " frequency outside 4 standard errors");
        bool same = a.classes.size() == b.classes.size();
        for (std::size_t l = 0; same && l < a.classes.size(); ++l) same = a.classes[l].frequency == b.classes[l].frequency;
        t.expect(same, tag + " not reproducible");
    };
    run(gen_fig3(4, 3).matrix, 0, "fig3(4,3)");
    run(gen_fig3(3, 2).matrix, 0, "fig3(3,2)");
    auto P = gen_random({.n = 6, .M = 6, .density = 0.5, .seed = 9, .closed_blocks = 2});
    auto s = decompose(P);
    t.expect(!s.transient_states.empty() && s.recurrent_classes.size() >= 2, "random instance has no transient state");
    if (!s.transient_states.empty()) run(P, s.transient_states.front(), "random multichain");
    report(10, "Monte Carlo absorption frequencies within 4 standard errors (1e5 trajectories, fixed seed)", t.pass(),
           t.summary());
}

}  // namespace

int main() {
    try {
        auto suite = build_suite();
        std::vector<AnalysisReport> reports;
        reports.reserve(suite.instances.size());
        criterion_1(suite, reports);
        criterion_2(reports);
        criterion_3();
        criterion_4();
        criterion_5(reports);
        criterion_6(reports);
        criterion_7(reports);
        criterion_8(suite);
        criterion_9(suite);
        criterion_10();
    } catch (const std::exception& e) {
        std::cout << "FAIL  acceptance suite aborted: " << e.what() << std::endl;
        return 1;
    }
    return failures == 0 ? 0 : 1;
}
