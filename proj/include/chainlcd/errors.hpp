#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "chainlcd/rational.hpp"

namespace chainlcd {

/// Malformed or invalid instance text.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition (non-open set, reducible
/// matrix where irreducibility is required, bad generator parameters, ...).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Forest enumeration would visit more candidate assignments than allowed.
class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(Integer required, Integer budget)
        : std::runtime_error("forest enumeration needs " + required.get_str() +
                             " candidate assignments, budget is " + budget.get_str()),
          required_(std::move(required)),
          budget_(std::move(budget)) {}

    const Integer& required() const { return required_; }
    const Integer& budget() const { return budget_; }

private:
    Integer required_;
    Integer budget_;
};

class SingularMatrix : public std::runtime_error {
public:
    SingularMatrix(std::size_t rank, std::size_t size)
        : std::runtime_error("singular matrix: rank " + std::to_string(rank) + " of " +
                             std::to_string(size)),
          rank_(rank) {}

    std::size_t rank() const { return rank_; }

private:
    std::size_t rank_;
};

}  // namespace chainlcd
