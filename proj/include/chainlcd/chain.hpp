#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chainlcd/errors.hpp"
#include "chainlcd/rational.hpp"

namespace chainlcd {

/// States are 0-based indices in the API; reports print them 1-based.
using State = std::size_t;
/// Sorted, duplicate-free list of states.
using StateSet = std::vector<State>;

/// Square matrix of rationals in [0,1] whose rows sum to exactly 1.
/// Immutable once constructed.
class StochasticMatrix {
public:
    /// Validates shape, entry range and exact row sums; throws ParseError.
    explicit StochasticMatrix(std::vector<std::vector<Rational>> rows);

    std::size_t size() const { return rows_.size(); }
    const Rational& operator()(State i, State j) const { return rows_[i][j]; }
    std::span<const Rational> row(State i) const { return rows_[i]; }
    const std::vector<std::vector<Rational>>& rows() const { return rows_; }

    /// Restriction to rows and columns in `states`. Only meaningful as a
    /// stochastic matrix when `states` is closed; see submatrix() otherwise.
    StochasticMatrix restrict_to_closed(const StateSet& states) const;

    friend bool operator==(const StochasticMatrix&, const StochasticMatrix&) = default;

private:
    std::vector<std::vector<Rational>> rows_;
};

/// Integer reward per state.
struct RewardVector {
    std::vector<Integer> entries;

    std::size_t size() const { return entries.size(); }
    Integer max_abs() const;
    bool is_zero() const;

    friend bool operator==(const RewardVector&, const RewardVector&) = default;
};

/// A matrix plus optional rewards, as carried by the JSON instance format.
struct Instance {
    StochasticMatrix matrix;
    std::optional<RewardVector> rewards;
};

/// Parses the JSON instance format: {"P": [[...], ...], "r": [...]} with
/// rationals written as strings "a/b" or "a". Unknown keys are ignored.
Instance parse_instance(std::string_view text);
StochasticMatrix parse_matrix(std::string_view text);

/// Inverse of parse_instance; keys in sorted order, two-space indent.
std::string serialize_instance(const Instance& instance);

RewardVector parse_rewards(std::span<const std::string> entries, std::size_t n);

struct DenominatorStats {
    std::vector<Integer> row_lcds;  // M_i
    Integer global_lcd;             // M
    Integer row_lcd_product;        // D
    std::size_t nondeterministic_rows = 0;  // k
};

DenominatorStats denominator_stats(const StochasticMatrix& P);

/// Product of M_i over the given states (1 for an empty set).
Integer row_lcd_product(const DenominatorStats& stats, const StateSet& states);

/// Number of rows with at least two nonzero entries.
std::size_t count_nondeterministic(const StochasticMatrix& P, const StateSet& states);

}  // namespace chainlcd
