#pragma once

#include <cstddef>
#include <vector>

#include "chainlcd/chain.hpp"
#include "chainlcd/linalg.hpp"

namespace chainlcd {

/// Spanning rooted forest of the transition digraph. Every non-root vertex
/// has exactly one outgoing edge (its parent); edges point towards the roots.
struct RootedForest {
    static constexpr State none = static_cast<State>(-1);

    std::vector<State> parent;  // parent[v] == none iff v is a root
    Rational weight;            // product of P(v, parent[v])

    StateSet roots() const;
    std::size_t edge_count() const;
    /// Root reached by following parent pointers from v.
    State root_of(State v) const;
    /// True iff the forest contains a directed path from `from` to `to`
    /// (always true when from == to).
    bool has_path(State from, State to) const;
};

struct ForestFamily {
    StateSet roots;
    std::vector<RootedForest> forests;  // lexicographic order of parent maps
    Rational total_weight;
};

struct EnumerationOptions {
    Integer budget = 10'000'000;
    unsigned jobs = 1;
};

/// Number of candidate assignments the enumerator walks: the product over
/// non-root vertices of their non-loop out-degree.
Integer enumeration_size(const StochasticMatrix& P, const StateSet& roots);

/// All rooted forests whose root set is exactly `roots`.
/// Throws PreconditionError for an empty or out-of-range root set and
/// BudgetExceeded when enumeration_size exceeds options.budget.
ForestFamily enumerate_forests(const StochasticMatrix& P, const StateSet& roots,
                               const EnumerationOptions& options = {});

/// Subfamily containing a directed path from -> to; the whole family when from == to.
ForestFamily enumerate_forests_with_path(const StochasticMatrix& P, const StateSet& roots, State from,
                                         State to, const EnumerationOptions& options = {});

// Matrix-tree theorem routes. The weighted out-degree Laplacian of P has
// L(v,v) = 1 - P(v,v) and L(v,w) = -P(v,w) for v != w.

RationalMatrix laplacian(const StochasticMatrix& P);

/// Total weight of trees rooted at `root`: det of L with row/column root removed.
Rational tree_weight_sum_det(const StochasticMatrix& P, State root);

/// Total weight of forests rooted at R: det of L with rows/columns of R removed.
Rational forest_weight_sum_det(const StochasticMatrix& P, const StateSet& roots);

/// Total weight of forests rooted at roots + {to} containing a path from -> to,
/// for `from`, `to` outside `roots`; computed as an adjugate entry of L
/// restricted to the complement of `roots`.
Rational path_forest_weight_sum_det(const StochasticMatrix& P, const StateSet& roots, State from, State to);

}  // namespace chainlcd
