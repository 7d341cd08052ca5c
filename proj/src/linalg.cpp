#include "chainlcd/linalg.hpp"

#include <algorithm>

#include "chainlcd/structure.hpp"

namespace chainlcd {

RationalMatrix RationalMatrix::identity(std::size_t n) {
    RationalMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) out(i, i) = Rational(1);
    return out;
}

RationalMatrix RationalMatrix::from_rows(const std::vector<std::vector<Rational>>& rows) {
    RationalMatrix out(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < out.rows(); ++i) {
        if (rows[i].size() != out.cols()) throw PreconditionError("ragged matrix rows");
        for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) = rows[i][j];
    }
    return out;
}

RationalMatrix RationalMatrix::submatrix(const std::vector<std::size_t>& rows,
                                         const std::vector<std::size_t>& cols) const {
    RationalMatrix out(rows.size(), cols.size());
    for (std::size_t a = 0; a < rows.size(); ++a) {
        for (std::size_t b = 0; b < cols.size(); ++b) out(a, b) = (*this)(rows[a], cols[b]);
    }
    return out;
}

RationalMatrix RationalMatrix::transpose() const {
    RationalMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    }
    return out;
}

std::vector<Rational> RationalMatrix::multiply(const std::vector<Rational>& x) const {
    if (x.size() != cols_) throw PreconditionError("dimension mismatch in matrix-vector product");
    std::vector<Rational> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            if (!(*this)(i, j).is_zero()) out[i] += (*this)(i, j) * x[j];
        }
    }
    return out;
}

RationalMatrix RationalMatrix::multiply(const RationalMatrix& rhs) const {
    if (rhs.rows_ != cols_) throw PreconditionError("dimension mismatch in matrix product");
    RationalMatrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            if ((*this)(i, k).is_zero()) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += (*this)(i, k) * rhs(k, j);
        }
    }
    return out;
}

namespace {

using IntegerRows = std::vector<std::vector<Integer>>;

// Rank by plain rational elimination; only used to report singularity.
std::size_t rank_of(RationalMatrix A) {
    std::size_t rank = 0;
    for (std::size_t col = 0; col < A.cols() && rank < A.rows(); ++col) {
        std::size_t pivot = rank;
        while (pivot < A.rows() && A(pivot, col).is_zero()) ++pivot;
        if (pivot == A.rows()) continue;
        for (std::size_t j = 0; j < A.cols(); ++j) std::swap(A(pivot, j), A(rank, j));
        for (std::size_t i = rank + 1; i < A.rows(); ++i) {
            if (A(i, col).is_zero()) continue;
            Rational f = A(i, col) / A(rank, col);
            for (std::size_t j = col; j < A.cols(); ++j) A(i, j) -= f * A(rank, j);
        }
        ++rank;
    }
    return rank;
}

struct Elimination {
    IntegerRows upper;        // n x (n + m), upper triangular in the first n columns
    std::vector<Integer> row_scale;  // factor each original row was multiplied by
    int sign = 1;             // parity of row swaps
};

// Clears denominators row by row, then runs Bareiss forward elimination
// with first-nonzero pivoting. Returns false when A is singular.
bool bareiss_forward(const RationalMatrix& A, const RationalMatrix* B, Elimination& out) {
    const std::size_t n = A.rows();
    const std::size_t m = B ? B->cols() : 0;
    IntegerRows& M = out.upper;
    M.assign(n, std::vector<Integer>(n + m));
    out.row_scale.assign(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
        Integer scale = 1;
        for (std::size_t j = 0; j < n; ++j) scale = lcm(scale, A(i, j).denominator());
        for (std::size_t j = 0; j < m; ++j) scale = lcm(scale, (*B)(i, j).denominator());
        for (std::size_t j = 0; j < n; ++j) M[i][j] = A(i, j).numerator() * (scale / A(i, j).denominator());
        for (std::size_t j = 0; j < m; ++j) M[i][n + j] = (*B)(i, j).numerator() * (scale / (*B)(i, j).denominator());
        out.row_scale[i] = scale;
    }

    Integer previous = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        while (pivot < n && M[pivot][k] == 0) ++pivot;
        if (pivot == n) return false;
        if (pivot != k) {
            std::swap(M[pivot], M[k]);
            std::swap(out.row_scale[pivot], out.row_scale[k]);
            out.sign = -out.sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n + m; ++j) {
                Integer t = M[k][k] * M[i][j] - M[i][k] * M[k][j];
                mpz_divexact(M[i][j].get_mpz_t(), t.get_mpz_t(), previous.get_mpz_t());
            }
            M[i][k] = 0;
        }
        previous = M[k][k];
    }
    return true;
}

}  // namespace

RationalMatrix solve(const RationalMatrix& A, const RationalMatrix& B) {
    const std::size_t n = A.rows();
    if (A.cols() != n) throw PreconditionError("solve requires a square matrix");
    if (B.rows() != n) throw PreconditionError("right-hand side has the wrong number of rows");
    const std::size_t m = B.cols();

    Elimination e;
    if (!bareiss_forward(A, &B, e)) throw SingularMatrix(rank_of(A), n);

    RationalMatrix X(n, m);
    for (std::size_t c = 0; c < m; ++c) {
        for (std::size_t ii = n; ii-- > 0;) {
            Rational acc(e.upper[ii][n + c]);
            for (std::size_t j = ii + 1; j < n; ++j) {
                if (e.upper[ii][j] != 0) acc -= Rational(e.upper[ii][j]) * X(j, c);
            }
            X(ii, c) = acc / Rational(e.upper[ii][ii]);
        }
    }
    return X;
}

std::vector<Rational> solve(const RationalMatrix& A, const std::vector<Rational>& b) {
    RationalMatrix B(b.size(), 1);
    for (std::size_t i = 0; i < b.size(); ++i) B(i, 0) = b[i];
    RationalMatrix X = solve(A, B);
    std::vector<Rational> x(X.rows());
    for (std::size_t i = 0; i < X.rows(); ++i) x[i] = X(i, 0);
    return x;
}

Rational determinant(const RationalMatrix& A) {
    const std::size_t n = A.rows();
    if (A.cols() != n) throw PreconditionError("determinant requires a square matrix");
    if (n == 0) return Rational(1);
    Elimination e;
    if (!bareiss_forward(A, nullptr, e)) return Rational(0);
    Integer scale = 1;
    for (const auto& s : e.row_scale) scale *= s;
    return Rational(e.upper[n - 1][n - 1] * e.sign, scale);
}

RationalMatrix inverse(const RationalMatrix& A) { return solve(A, RationalMatrix::identity(A.rows())); }

RationalMatrix block(const StochasticMatrix& P, const StateSet& rows, const StateSet& cols) {
    RationalMatrix out(rows.size(), cols.size());
    for (std::size_t a = 0; a < rows.size(); ++a) {
        for (std::size_t b = 0; b < cols.size(); ++b) out(a, b) = P(rows[a], cols[b]);
    }
    return out;
}

const Rational& FundamentalMatrix::visits(State v, State w) const {
    auto a = std::lower_bound(open_set.begin(), open_set.end(), v);
    auto b = std::lower_bound(open_set.begin(), open_set.end(), w);
    if (a == open_set.end() || *a != v || b == open_set.end() || *b != w) {
        throw PreconditionError("state outside the open set");
    }
    return values(static_cast<std::size_t>(a - open_set.begin()), static_cast<std::size_t>(b - open_set.begin()));
}

FundamentalMatrix fundamental_matrix(const StochasticMatrix& P, const StateSet& W) {
    if (!is_open(P, W)) throw PreconditionError("fundamental matrix requested for a set that is not open");
    StateSet sorted = W;
    std::sort(sorted.begin(), sorted.end());
    RationalMatrix A = block(P, sorted, sorted);
    for (std::size_t i = 0; i < A.rows(); ++i) {
        for (std::size_t j = 0; j < A.cols(); ++j) A(i, j) = (i == j ? Rational(1) : Rational(0)) - A(i, j);
    }
    return {sorted, inverse(A)};
}

std::vector<Rational> stationary_by_solve(const StochasticMatrix& P) {
    if (!is_irreducible(P)) throw PreconditionError("stationary_by_solve requires an irreducible matrix");
    const std::size_t n = P.size();
    RationalMatrix A(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) A(i, j) = P(j, i) - (i == j ? Rational(1) : Rational(0));
    }
    std::vector<Rational> b(n);
    for (std::size_t j = 0; j < n; ++j) A(n - 1, j) = Rational(1);
    b[n - 1] = Rational(1);
    return solve(A, b);
}

}  // namespace chainlcd
