#include <doctest.h>

#include <cmath>

#include "chainlcd/errors.hpp"
#include "chainlcd/generators.hpp"
#include "chainlcd/linalg.hpp"
#include "chainlcd/structure.hpp"
#include "oracles.hpp"

using namespace chainlcd;

TEST_CASE("solve small systems") {
    auto I = RationalMatrix::identity(3);
    auto b = oracle::vec({"1/2", "-3", "7/9"});
    CHECK(solve(I, b) == b);
    CHECK(solve(RationalMatrix::from_rows({{Rational(2)}}), {Rational(1)}) == oracle::vec({"1/2"}));
    CHECK(solve(RationalMatrix::from_rows({{oracle::q("1/2")}}), {Rational(1)}) == oracle::vec({"2"}));
}

TEST_CASE("solve needs pivoting and reports rank") {
    auto A = RationalMatrix::from_rows({oracle::vec({"0", "1"}), oracle::vec({"1", "0"})});
    CHECK(solve(A, oracle::vec({"3", "4"})) == oracle::vec({"4", "3"}));

    auto S = RationalMatrix::from_rows({oracle::vec({"1", "2", "3"}), oracle::vec({"2", "4", "6"}), oracle::vec({"1", "0", "1"})});
    try {
        solve(S, oracle::vec({"1", "1", "1"}));
        FAIL("expected singular");
    } catch (const SingularMatrix& e) {
        CHECK(e.rank() == 2);
    }
    CHECK(determinant(S) == Rational(0));
}

TEST_CASE("solve agrees with Gauss-Jordan on random rational systems") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        auto P = gen_random({.n = 2 + seed % 5, .M = 30, .density = 0.7, .seed = seed});
        const std::size_t n = P.size();
        oracle::Matrix A(n, std::vector<Rational>(n)), B(n, std::vector<Rational>(2));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) A[i][j] = (i == j ? Rational(2) : Rational(0)) - P(i, j);
            B[i][0] = Rational(static_cast<long>(i) - 1);
            B[i][1] = Rational(Integer(1), Integer(static_cast<long>(i) + 2));
        }
        oracle::Matrix X;
        REQUIRE(oracle::gauss_jordan_solve(A, B, X));
        CHECK(solve(RationalMatrix::from_rows(A), RationalMatrix::from_rows(B)) == RationalMatrix::from_rows(X));

        auto inv = inverse(RationalMatrix::from_rows(A));
        CHECK(RationalMatrix::from_rows(A).multiply(inv) == RationalMatrix::identity(n));
    }
}

TEST_CASE("determinant") {
    CHECK(determinant(RationalMatrix(0, 0)) == Rational(1));
    auto A = RationalMatrix::from_rows({oracle::vec({"1/2", "1/3"}), oracle::vec({"1/4", "1"})});
    CHECK(determinant(A) == oracle::q("5/12"));
    auto B = RationalMatrix::from_rows({oracle::vec({"0", "2", "1"}), oracle::vec({"1", "0", "0"}), oracle::vec({"0", "0", "3"})});
    CHECK(determinant(B) == Rational(-6));
}

TEST_CASE("fundamental matrix") {
    auto P = oracle::matrix({{"1/2", "1/2"}, {"0", "1"}});
    CHECK(fundamental_matrix(P, {0}).visits(0, 0) == Rational(2));

    auto fig3 = gen_fig3(4, 3).matrix;
    auto N = fundamental_matrix(fig3, {0, 1});
    CHECK(N.values == RationalMatrix::from_rows({oracle::vec({"1", "1/3"}), oracle::vec({"0", "1"})}));
    auto series = oracle::truncated_series(fig3, {0, 1});
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) CHECK(std::abs(series[a][b] - N.values(a, b).to_double()) < 1e-12);

    auto loop = oracle::matrix({{"2/7", "5/7"}, {"1", "0"}});
    CHECK(fundamental_matrix(loop, {0}).visits(0, 0) == oracle::q("7/5"));

    CHECK_THROWS_AS(fundamental_matrix(fig3, {2}), PreconditionError);
}

TEST_CASE("fundamental matrix matches oracle and series on random open sets") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        auto P = gen_random({.n = 3 + seed % 4, .M = 8, .density = 0.6, .seed = seed});
        StateSet W;
        for (State v = 0; v + 1 < P.size(); v += 2) W.push_back(v);
        if (!is_open(P, W)) continue;
        auto N = fundamental_matrix(P, W);
        auto X = oracle::fundamental(P, W);
        CHECK(N.values == RationalMatrix::from_rows(X));
    }
}

TEST_CASE("stationary by solve") {
    CHECK(stationary_by_solve(oracle::matrix({{"1/2", "1/2"}, {"1/2", "1/2"}})) == oracle::vec({"1/2", "1/2"}));
    CHECK(stationary_by_solve(gen_fig2_variant({3, 4, 5}).matrix) == oracle::vec({"20/47", "15/47", "12/47"}));
    CHECK(stationary_by_solve(oracle::matrix({{"1"}})) == oracle::vec({"1"}));
    CHECK_THROWS_AS(stationary_by_solve(gen_fig3(3, 2).matrix), PreconditionError);
}
