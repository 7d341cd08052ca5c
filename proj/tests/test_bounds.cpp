#include <doctest.h>

#include "chainlcd/bounds.hpp"
#include "chainlcd/generators.hpp"
#include "oracles.hpp"

using namespace chainlcd;

namespace {

RewardVector rewards(std::initializer_list<long> xs) {
    RewardVector r;
    for (long x : xs) r.entries.emplace_back(x);
    return r;
}

const BoundCheck& find(const BoundReport& report, const std::string& name) {
    for (const auto& c : report)
        if (c.name == name) return c;
    FAIL("missing check " << name);
    return report.front();
}

}  // namespace

TEST_CASE("stationary bound") {
    auto sym = check_stationary_bound(oracle::matrix({{"1/2", "1/2"}, {"1/2", "1/2"}}), oracle::vec({"1/2", "1/2"}));
    CHECK(find(sym, "stationary_lcd").quantity == Rational(2));
    CHECK(find(sym, "stationary_lcd").bound == 4);
    CHECK(find(sym, "stationary_lcd").binding == "nM^(n-1)");
    CHECK(all_pass(sym));

    auto fig2 = check_stationary_bound(gen_fig2_variant({3, 4, 5}).matrix, oracle::vec({"20/47", "15/47", "12/47"}));
    const auto& c = find(fig2, "stationary_lcd");
    CHECK(c.quantity == Rational(47));
    CHECK(c.bound == 75);
    CHECK(c.tightness_ratio() == oracle::q("47/75"));
    CHECK(c.pass);

    auto single = check_stationary_bound(oracle::matrix({{"1"}}), oracle::vec({"1"}));
    CHECK(find(single, "stationary_lcd").bound == 1);
    CHECK(all_pass(single));

    auto bad = check_stationary_bound(oracle::matrix({{"1/2", "1/2"}, {"1/2", "1/2"}}), oracle::vec({"1/5", "4/5"}));
    CHECK_FALSE(find(bad, "stationary_lcd").pass);
}

TEST_CASE("absorption bound is tight on fig3") {
    auto P = gen_fig3(4, 3).matrix;
    auto structure = decompose(P);
    auto report = check_absorption_bound(P, structure, absorption_forest_formula(P, structure));
    const auto& c = find(report, "absorption_lcd");
    CHECK(c.quantity == Rational(9));
    CHECK(c.bound == 9);
    CHECK(c.tightness_ratio() == Rational(1));
    CHECK(all_pass(report));

    auto irreducible = oracle::matrix({{"1/2", "1/2"}, {"1/2", "1/2"}});
    auto s = decompose(irreducible);
    auto r = check_absorption_bound(irreducible, s, absorption_forest_formula(irreducible, s));
    CHECK(find(r, "absorption_lcd").quantity == Rational(1));
    CHECK(all_pass(r));
}

TEST_CASE("gain bounds") {
    auto P = gen_fig3(4, 3).matrix;
    auto structure = decompose(P);
    auto report = check_gain_bounds(P, structure, gain(P, rewards({0, 0, 0, 1})));
    const auto& sq = find(report, "gain_lcd");
    CHECK(sq.quantity == Rational(9));
    REQUIRE(sq.bound_squared.has_value());
    CHECK(*sq.bound_squared == 9 * 81);
    CHECK(all_pass(report));

    auto zero = check_gain_bounds(P, structure, gain(P, rewards({0, 0, 0, 0})));
    CHECK(find(zero, "gain_lcd").quantity == Rational(1));

    auto sym = oracle::matrix({{"1/2", "1/2"}, {"1/2", "1/2"}});
    auto r = check_gain_bounds(sym, decompose(sym), gain(sym, rewards({1, 0})));
    const auto& ergodic = find(r, "gain_constant_denominator");
    CHECK(ergodic.quantity == Rational(2));
    CHECK(ergodic.bound == 4);
}

TEST_CASE("bias bounds on the two-cycle") {
    auto P = oracle::matrix({{"0", "1"}, {"1", "0"}});
    auto r = rewards({1, 0});
    auto anchored = check_bias_bound(P, r, bias(P, r, BiasNormalization::Anchored));
    CHECK(anchored.quantity == oracle::q("1/2"));
    CHECK(anchored.bound == 4);
    CHECK(anchored.pass);
    auto weighted = check_bias_bound(P, r, bias(P, r, BiasNormalization::Weighted));
    CHECK(weighted.quantity == oracle::q("1/4"));
    CHECK(weighted.bound == 8);

    auto zero = check_bias_bound(P, rewards({0, 0}), bias(P, rewards({0, 0}), BiasNormalization::Anchored));
    CHECK(zero.bound == 0);
    CHECK(zero.quantity == Rational(0));
    CHECK(zero.pass);
    CHECK_FALSE(zero.tightness_ratio().has_value());
}

TEST_CASE("seminorms") {
    auto u = oracle::vec({"-1/2", "3", "0"});
    CHECK(hilbert_seminorm(u) == oracle::q("7/2"));
    CHECK(sup_norm(u) == Rational(3));
}

TEST_CASE("visit bound") {
    auto P = gen_fig3(4, 3).matrix;
    auto report = check_visit_bound(P, fundamental_matrix(P, {0, 1}));
    CHECK(find(report, "visits_max_entry").quantity == Rational(1));
    CHECK(find(report, "visits_max_entry").bound == 9);
    CHECK(all_pass(report));
}

TEST_CASE("hadamard comparisons") {
    DenominatorStats a{{5, 5, 1}, 5, 25, 2};
    auto ra = hadamard_comparison(3, a);
    const auto& h = find(ra, "hadamard_n_half");
    CHECK(h.quantity == Rational(75));
    CHECK(*h.bound_squared == 27 * 15625);
    CHECK(h.pass);

    DenominatorStats b{{2, 2}, 2, 4, 2};
    auto rb = hadamard_comparison(2, b);
    CHECK(find(rb, "hadamard_k").quantity == Rational(4));
    CHECK(find(rb, "hadamard_k").bound == 2 * 2 * 64);
    CHECK(all_pass(rb));

    DenominatorStats c{{1, 1, 1}, 1, 1, 0};
    auto rc = hadamard_comparison(3, c);
    CHECK(find(rc, "hadamard_n_half").quantity == Rational(3));
    CHECK(find(rc, "hadamard_k").skipped);
    CHECK(all_pass(rc));
}

TEST_CASE("denominator lemmas on small chains") {
    std::size_t checked = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto P = gen_random({.n = 2 + seed % 5, .M = 12, .density = 0.6, .seed = seed, .closed_blocks = seed % 2 ? 2u : 0u});
        for (const auto& lemma : check_denominator_lemmas(P, decompose(P))) {
            CAPTURE(lemma.name);
            checked += lemma.checked;
            CHECK(lemma.pass());
        }
    }
    CHECK(checked > 1000);
}
