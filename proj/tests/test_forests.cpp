#include <doctest.h>

#include <algorithm>

#include "chainlcd/errors.hpp"
#include "chainlcd/forests.hpp"
#include "chainlcd/generators.hpp"
#include "oracles.hpp"

using namespace chainlcd;

namespace {

std::vector<std::vector<long>> parents(const ForestFamily& family) {
    std::vector<std::vector<long>> out;
    for (const auto& f : family.forests) {
        auto& p = out.emplace_back();
        for (State x : f.parent) p.push_back(x == RootedForest::none ? -1 : static_cast<long>(x));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::vector<long>> parents(const std::vector<oracle::Forest>& forests) {
    std::vector<std::vector<long>> out;
    for (const auto& f : forests) out.push_back(f.parent);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("cycle chain has one tree per root") {
    auto P = gen_fig2_variant({3, 4, 5}).matrix;
    for (State v = 0; v < 3; ++v) {
        auto family = enumerate_forests(P, {v});
        REQUIRE(family.forests.size() == 1);
        Rational expected(1);
        for (State w = 0; w < 3; ++w)
            if (w != v) expected *= Rational(Integer(std::vector<long>{3, 4, 5}[w]), 5);
        CHECK(family.total_weight == expected);
        CHECK(family.forests[0].roots() == StateSet{v});
    }
}

TEST_CASE("two-state tree") {
    auto P = oracle::matrix({{"1/2", "1/2"}, {"1/2", "1/2"}});
    auto family = enumerate_forests(P, {0});
    REQUIRE(family.forests.size() == 1);
    CHECK(family.forests[0].parent[1] == 0);
    CHECK(family.total_weight == oracle::q("1/2"));
}

TEST_CASE("fig3 forests rooted at the absorbing pair") {
    auto P = gen_fig3(4, 3).matrix;
    auto family = enumerate_forests(P, {2, 3});
    CHECK(family.forests.size() == 4);
    CHECK(family.total_weight == Rational(1));
    CHECK(parents(family) == parents(oracle::brute_force_forests(P, {2, 3})));

    auto path = enumerate_forests_with_path(P, {2, 3}, 0, 3);
    REQUIRE(path.forests.size() == 1);
    CHECK(path.forests[0].parent[0] == 1);
    CHECK(path.forests[0].parent[1] == 3);
    CHECK(path.total_weight == oracle::q("1/9"));
}

TEST_CASE("path restriction") {
    auto P = oracle::matrix({{"1/2", "1/2"}, {"1/2", "1/2"}});
    auto path = enumerate_forests_with_path(P, {0}, 1, 0);
    CHECK(path.forests.size() == 1);
    CHECK(path.total_weight == oracle::q("1/2"));

    auto fig3 = gen_fig3(5, 2).matrix;
    auto all = enumerate_forests(fig3, {3, 4});
    auto same = enumerate_forests_with_path(fig3, {3, 4}, 1, 1);
    CHECK(parents(all) == parents(same));
    CHECK(all.total_weight == same.total_weight);
}

TEST_CASE("enumeration matches brute force on random chains") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        RandomSpec spec{.n = 2 + seed % 4, .M = 6, .density = 0.6, .seed = seed, .closed_blocks = seed % 3 == 0 ? 2u : 0u};
        auto P = gen_random(spec);
        const std::size_t n = P.size();
        for (State r = 0; r < n; ++r) {
            StateSet roots{r};
            if (seed % 2 == 0 && r + 1 < n) roots.push_back(r + 1);
            auto family = enumerate_forests(P, roots);
            auto brute = oracle::brute_force_forests(P, roots);
            CAPTURE(seed);
            CAPTURE(r);
            CHECK(parents(family) == parents(brute));
            CHECK(family.total_weight == oracle::total(brute));
            CHECK(family.total_weight == forest_weight_sum_det(P, roots));

            for (State v = 0; v < n; ++v) {
                for (State w = 0; w < n; ++w) {
                    if (oracle::contains(roots, v) || oracle::contains(roots, w)) continue;
                    StateSet with_w = roots;
                    with_w.push_back(w);
                    std::sort(with_w.begin(), with_w.end());
                    Rational expected;
                    for (const auto& f : oracle::brute_force_forests(P, with_w))
                        if (oracle::forest_has_path(f, v, w)) expected += f.weight;
                    CHECK(enumerate_forests_with_path(P, with_w, v, w).total_weight == expected);
                    CHECK(path_forest_weight_sum_det(P, roots, v, w) == expected);
                }
            }
        }
    }
}

TEST_CASE("parallel enumeration is identical to sequential") {
    auto P = gen_random({.n = 6, .M = 12, .density = 0.8, .seed = 7});
    auto a = enumerate_forests(P, {0});
    auto b = enumerate_forests(P, {0}, {.budget = 10'000'000, .jobs = 4});
    REQUIRE(a.forests.size() == b.forests.size());
    for (std::size_t i = 0; i < a.forests.size(); ++i) {
        CHECK(a.forests[i].parent == b.forests[i].parent);
        CHECK(a.forests[i].weight == b.forests[i].weight);
    }
    CHECK(a.total_weight == b.total_weight);
}

TEST_CASE("matrix-tree determinants") {
    CHECK(tree_weight_sum_det(oracle::matrix({{"1/2", "1/2"}, {"1/2", "1/2"}}), 0) == oracle::q("1/2"));
    CHECK(tree_weight_sum_det(gen_fig2_variant({3, 4, 5}).matrix, 2) == oracle::q("12/25"));
    CHECK(tree_weight_sum_det(oracle::matrix({{"1"}}), 0) == Rational(1));
    CHECK(forest_weight_sum_det(gen_fig3(4, 3).matrix, {0, 1, 2, 3}) == Rational(1));
    CHECK(forest_weight_sum_det(gen_fig3(4, 3).matrix, {2, 3}) == Rational(1));
    CHECK(forest_weight_sum_det(oracle::matrix({{"1", "0"}, {"1/3", "2/3"}}), {0}) == oracle::q("1/3"));
}

TEST_CASE("full root set gives the empty forest") {
    auto family = enumerate_forests(gen_fig3(3, 2).matrix, {0, 1, 2});
    REQUIRE(family.forests.size() == 1);
    CHECK(family.forests[0].edge_count() == 0);
    CHECK(family.total_weight == Rational(1));
}

TEST_CASE("budget and preconditions") {
    auto P = gen_random({.n = 6, .M = 12, .density = 1.0, .seed = 3});
    CHECK(enumeration_size(P, {0}) == pow(Integer(5), 5));
    CHECK_THROWS_AS(enumerate_forests(P, {0}, {.budget = 100}), BudgetExceeded);
    CHECK_THROWS_AS(enumerate_forests(P, {}), PreconditionError);
    CHECK_THROWS_AS(enumerate_forests(P, {9}), PreconditionError);
}
