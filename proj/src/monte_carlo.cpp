#include <cmath>
#include <limits>
#include <random>

#include "chainlcd/analysis.hpp"

namespace chainlcd {

namespace {

// Uniform draw in [0, bound) by rejection; independent of the standard
// library's distribution implementations, so results are portable.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

struct SamplingRow {
    std::uint64_t denominator = 1;
    std::vector<std::uint64_t> cumulative;  // scaled by denominator
    std::vector<State> targets;
};

std::uint64_t to_u64(const Integer& x) {
    if (x < 0 || mpz_sizeinbase(x.get_mpz_t(), 2) > 63) throw PreconditionError("row denominator too large for simulation");
    return static_cast<std::uint64_t>(mpz_get_ui(x.get_mpz_t()));
}

}  // namespace

MonteCarloResult monte_carlo_absorption(const StochasticMatrix& P, const ChainStructure& structure,
                                        const AbsorptionTable& exact, State start, std::uint64_t trajectories,
                                        std::uint64_t seed, double sigmas) {
    const std::size_t n = P.size();
    if (start >= n) throw PreconditionError("start state out of range");
    if (trajectories == 0) throw PreconditionError("at least one trajectory is required");

    std::vector<SamplingRow> rows(n);
    for (State i = 0; i < n; ++i) {
        Integer mi = lcd_of_vector(P.row(i));
        rows[i].denominator = to_u64(mi);
        std::uint64_t acc = 0;
        for (State j = 0; j < n; ++j) {
            if (P(i, j).is_zero()) continue;
            acc += to_u64(P(i, j).numerator() * (mi / P(i, j).denominator()));
            rows[i].cumulative.push_back(acc);
            rows[i].targets.push_back(j);
        }
    }

    const std::size_t p = structure.recurrent_classes.size();
    std::vector<std::uint64_t> hits(p, 0);
    std::mt19937_64 rng(seed);
    for (std::uint64_t t = 0; t < trajectories; ++t) {
        State x = start;
        while (structure.is_transient(x)) {
            const auto& row = rows[x];
            std::uint64_t u = uniform_below(rng, row.denominator);
            std::size_t k = 0;
            while (row.cumulative[k] <= u) ++k;
            x = row.targets[k];
        }
        ++hits[structure.class_of[x]];
    }

    MonteCarloResult out;
    out.start = start;
    out.trajectories = trajectories;
    const double count = static_cast<double>(trajectories);
    for (std::size_t l = 0; l < p; ++l) {
        MonteCarloClassResult c;
        c.exact = exact(start, l).to_double();
        c.frequency = static_cast<double>(hits[l]) / count;
        c.standard_error = std::sqrt(c.exact * (1.0 - c.exact) / count);
        c.within_tolerance = std::abs(c.frequency - c.exact) <= sigmas * c.standard_error;
        out.pass = out.pass && c.within_tolerance;
        out.classes.push_back(c);
    }
    return out;
}

}  // namespace chainlcd
