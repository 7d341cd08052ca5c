#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "chainlcd/chain.hpp"

namespace chainlcd {

/// Cycle 1 -> 2 -> ... -> n -> 1 where state i < n moves on with
/// probability p_i / M (staying put otherwise) and state n returns with
/// probability 1. Trees: exactly one per root, so pi_v = Q_v / sum Q with
/// Q_v = p_1...p_n / p_v.
struct CycleInstance {
    StochasticMatrix matrix;
    std::vector<Integer> p;  // p_1..p_n, p_n = M
    Integer M;
    std::vector<Rational> predicted_stationary;
    Integer predicted_lcd;   // sum of Q_v
};

/// Prime-factorial construction: M = m_q! + m_n, p_i = m_q! + m_i with
/// m_i the i-th prime. Requires n >= 2 and q >= n; refuses when m_q! would
/// exceed `max_bits`.
CycleInstance gen_fig2(std::size_t n, std::size_t q, std::size_t max_bits = 100000);

/// Same shape with caller-chosen pairwise-coprime p_1..p_n, 1 <= p_i <= p_n = M.
CycleInstance gen_fig2_variant(const std::vector<Integer>& p);

/// States 1..n-2 transient: i -> next with 1/M, i -> n-1 with 1 - 1/M,
/// where next is i+1 (or n for i = n-2). States n-1 and n absorb.
struct AbsorptionInstance {
    StochasticMatrix matrix;
    Rational predicted_psi_last;  // psi(1, {n}) = 1 / M^(n-2)
    Integer predicted_transient_product;  // D_T = M^(n-2)
};

AbsorptionInstance gen_fig3(std::size_t n, const Integer& M);

struct RandomSpec {
    std::size_t n = 3;
    std::uint64_t M = 6;
    double density = 0.5;
    std::uint64_t seed = 1;
    /// When >= 2, this many disjoint state blocks are made closed, which
    /// forces at least that many recurrent classes.
    std::size_t closed_blocks = 0;
};

/// Each row gets a support of round(density * n) states (at least 1) and
/// positive numerators over a random divisor d of M, so its lcd divides M.
/// Deterministic for a fixed spec on every platform.
StochasticMatrix gen_random(const RandomSpec& spec);

/// First `count` primes.
std::vector<Integer> first_primes(std::size_t count);

enum class GeneratorKind { Fig2, Fig2Variant, Fig3, Random };

struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::Random;
    std::size_t n = 0;
    std::size_t q = 0;            // fig2
    Integer M = 0;                // fig3
    std::vector<Integer> p;       // fig2-variant
    RandomSpec random;            // random
    std::size_t max_bits = 100000;
};

GeneratorSpec generator_spec_from_json(const nlohmann::json& j);
nlohmann::json generator_spec_to_json(const GeneratorSpec& spec);

/// Generates the instance and returns it in the JSON instance format with a
/// "meta" block holding the spec and any predicted values.
nlohmann::json generate_instance_json(const GeneratorSpec& spec);

}  // namespace chainlcd
