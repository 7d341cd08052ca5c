#pragma once

#include <cstddef>
#include <vector>

#include "chainlcd/chain.hpp"

namespace chainlcd {

/// Dense row-major rational matrix.
class RationalMatrix {
public:
    RationalMatrix() = default;
    RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    static RationalMatrix identity(std::size_t n);
    static RationalMatrix from_rows(const std::vector<std::vector<Rational>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    /// Entries (rows[a], cols[b]).
    RationalMatrix submatrix(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const;
    RationalMatrix transpose() const;
    std::vector<Rational> multiply(const std::vector<Rational>& x) const;
    RationalMatrix multiply(const RationalMatrix& rhs) const;

    friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

/// Solves A X = B for square A by fraction-free (Bareiss) elimination on
/// the row-scaled integer system. Throws SingularMatrix with the rank.
RationalMatrix solve(const RationalMatrix& A, const RationalMatrix& B);
std::vector<Rational> solve(const RationalMatrix& A, const std::vector<Rational>& b);

Rational determinant(const RationalMatrix& A);
RationalMatrix inverse(const RationalMatrix& A);

/// Sub-block of P on rows `rows` and columns `cols`.
RationalMatrix block(const StochasticMatrix& P, const StateSet& rows, const StateSet& cols);

struct FundamentalMatrix {
    StateSet open_set;       // W, sorted; row/column a of `values` is open_set[a]
    RationalMatrix values;   // N_W(v, w) = (I - P_WW)^{-1}

    const Rational& visits(State v, State w) const;
};

/// (I - P_WW)^{-1}. Throws PreconditionError when W is not open.
FundamentalMatrix fundamental_matrix(const StochasticMatrix& P, const StateSet& W);

/// Stationary distribution of an irreducible P: (P^T - I) pi = 0 with the
/// last equation replaced by sum(pi) = 1.
std::vector<Rational> stationary_by_solve(const StochasticMatrix& P);

}  // namespace chainlcd
