#include "chainlcd/structure.hpp"

#include <algorithm>
#include <string>

namespace chainlcd {

TransitionDigraph::TransitionDigraph(const StochasticMatrix& P) : successors(P.size()) {
    for (State v = 0; v < P.size(); ++v) {
        for (State w = 0; w < P.size(); ++w) {
            if (!P(v, w).is_zero()) successors[v].push_back(w);
        }
    }
}

// Iterative Tarjan.
std::vector<StateSet> strongly_connected_components(const TransitionDigraph& graph) {
    const std::size_t n = graph.vertex_count();
    constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, unvisited), lowlink(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<State> stack;
    std::vector<StateSet> components;
    std::size_t counter = 0;

    struct Frame {
        State vertex;
        std::size_t next_edge;
    };
    std::vector<Frame> call_stack;

    for (State root = 0; root < n; ++root) {
        if (index[root] != unvisited) continue;
        call_stack.push_back({root, 0});
        index[root] = lowlink[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;

        while (!call_stack.empty()) {
            Frame& frame = call_stack.back();
            const State v = frame.vertex;
            const auto& succ = graph.successors[v];
            if (frame.next_edge < succ.size()) {
                State w = succ[frame.next_edge++];
                if (index[w] == unvisited) {
                    index[w] = lowlink[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call_stack.push_back({w, 0});
                } else if (on_stack[w]) {
                    lowlink[v] = std::min(lowlink[v], index[w]);
                }
                continue;
            }
            if (lowlink[v] == index[v]) {
                StateSet component;
                State w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    component.push_back(w);
                } while (w != v);
                std::sort(component.begin(), component.end());
                components.push_back(std::move(component));
            }
            call_stack.pop_back();
            if (!call_stack.empty()) {
                State parent = call_stack.back().vertex;
                lowlink[parent] = std::min(lowlink[parent], lowlink[v]);
            }
        }
    }
    std::sort(components.begin(), components.end(),
              [](const StateSet& a, const StateSet& b) { return a.front() < b.front(); });
    return components;
}

ChainStructure decompose(const StochasticMatrix& P) {
    const std::size_t n = P.size();
    TransitionDigraph graph(P);
    auto components = strongly_connected_components(graph);

    std::vector<std::size_t> component_of(n);
    for (std::size_t c = 0; c < components.size(); ++c) {
        for (State v : components[c]) component_of[v] = c;
    }

    ChainStructure out;
    out.class_of.assign(n, ChainStructure::npos);
    for (std::size_t c = 0; c < components.size(); ++c) {
        bool closed = true;
        for (State v : components[c]) {
            for (State w : graph.successors[v]) {
                if (component_of[w] != c) closed = false;
            }
        }
        if (!closed) continue;
        for (State v : components[c]) out.class_of[v] = out.recurrent_classes.size();
        out.recurrent_classes.push_back(components[c]);
    }

    for (State v = 0; v < n; ++v) {
        if (out.class_of[v] == ChainStructure::npos) {
            out.transient_states.push_back(v);
        } else {
            out.recurrent_states.push_back(v);
        }
    }

    auto stats = denominator_stats(P);
    out.transient_row_lcd_product = row_lcd_product(stats, out.transient_states);
    out.nondeterministic_transient_rows = count_nondeterministic(P, out.transient_states);
    return out;
}

bool is_open(const StochasticMatrix& P, const StateSet& W) {
    const std::size_t n = P.size();
    if (W.empty()) throw PreconditionError("open-set test on an empty set");
    std::vector<bool> inside(n, false);
    for (State v : W) {
        if (v >= n) throw PreconditionError("state " + std::to_string(v) + " out of range");
        inside[v] = true;
    }
    // Backward search from the outside: a state of W can escape iff it
    // reaches some state that is not in W.
    TransitionDigraph graph(P);
    std::vector<std::vector<State>> predecessors(n);
    for (State v = 0; v < n; ++v) {
        for (State w : graph.successors[v]) predecessors[w].push_back(v);
    }
    std::vector<bool> escapes(n, false);
    std::vector<State> frontier;
    for (State v = 0; v < n; ++v) {
        if (!inside[v]) {
            escapes[v] = true;
            frontier.push_back(v);
        }
    }
    while (!frontier.empty()) {
        State w = frontier.back();
        frontier.pop_back();
        for (State v : predecessors[w]) {
            if (!escapes[v]) {
                escapes[v] = true;
                frontier.push_back(v);
            }
        }
    }
    return std::all_of(W.begin(), W.end(), [&](State v) { return escapes[v]; });
}

bool is_irreducible(const StochasticMatrix& P) {
    return strongly_connected_components(TransitionDigraph(P)).size() == 1;
}

StateSet complement(const StateSet& W, std::size_t n) {
    std::vector<bool> inside(n, false);
    for (State v : W) inside[v] = true;
    StateSet out;
    for (State v = 0; v < n; ++v) {
        if (!inside[v]) out.push_back(v);
    }
    return out;
}

}  // namespace chainlcd
