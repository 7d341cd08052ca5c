#pragma once

#include <cstddef>
#include <vector>

#include "chainlcd/chain.hpp"

namespace chainlcd {

/// Support graph of P: edge (v,w) iff P(v,w) > 0, loops included.
struct TransitionDigraph {
    std::vector<std::vector<State>> successors;

    explicit TransitionDigraph(const StochasticMatrix& P);
    std::size_t vertex_count() const { return successors.size(); }
};

/// Strongly connected components, each sorted, listed by smallest member.
std::vector<StateSet> strongly_connected_components(const TransitionDigraph& graph);

struct ChainStructure {
    std::vector<StateSet> recurrent_classes;  // C_1..C_p, sorted by smallest member
    StateSet transient_states;                // T
    StateSet recurrent_states;                // S = union of the classes
    /// Class index of each state, or npos for transient states.
    std::vector<std::size_t> class_of;
    Integer transient_row_lcd_product;        // D_T
    std::size_t nondeterministic_transient_rows = 0;  // k_T

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::size_t recurrent_count() const { return recurrent_states.size(); }  // s
    bool is_transient(State v) const { return class_of[v] == npos; }
};

/// Recurrent classes are the closed SCCs of the transition digraph.
ChainStructure decompose(const StochasticMatrix& P);

/// True iff every state of W has a directed path to a state outside W.
/// Throws PreconditionError when W is empty or mentions a state >= n.
bool is_open(const StochasticMatrix& P, const StateSet& W);

bool is_irreducible(const StochasticMatrix& P);

/// Complement of W in [n].
StateSet complement(const StateSet& W, std::size_t n);

}  // namespace chainlcd
