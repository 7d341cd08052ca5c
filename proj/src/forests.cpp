#include "chainlcd/forests.hpp"

#include <algorithm>
#include <future>
#include <string>

namespace chainlcd {

StateSet RootedForest::roots() const {
    StateSet out;
    for (State v = 0; v < parent.size(); ++v) {
        if (parent[v] == none) out.push_back(v);
    }
    return out;
}

std::size_t RootedForest::edge_count() const {
    return static_cast<std::size_t>(std::count_if(parent.begin(), parent.end(), [](State p) { return p != none; }));
}

State RootedForest::root_of(State v) const {
    while (parent[v] != none) v = parent[v];
    return v;
}

bool RootedForest::has_path(State from, State to) const {
    for (State x = from;; x = parent[x]) {
        if (x == to) return true;
        if (parent[x] == none) return false;
    }
}

namespace {

StateSet validated_roots(const StochasticMatrix& P, const StateSet& roots) {
    if (roots.empty()) throw PreconditionError("root set must be non-empty");
    StateSet sorted = roots;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    if (sorted.back() >= P.size()) throw PreconditionError("root " + std::to_string(sorted.back()) + " out of range");
    return sorted;
}

struct Candidates {
    std::vector<State> free_vertices;               // non-roots, ascending
    std::vector<std::vector<State>> targets;        // non-loop out-edges per free vertex
};

Candidates candidates(const StochasticMatrix& P, const StateSet& roots) {
    std::vector<bool> is_root(P.size(), false);
    for (State r : roots) is_root[r] = true;
    Candidates c;
    for (State v = 0; v < P.size(); ++v) {
        if (is_root[v]) continue;
        c.free_vertices.push_back(v);
        std::vector<State> out;
        for (State w = 0; w < P.size(); ++w) {
            if (w != v && !P(v, w).is_zero()) out.push_back(w);
        }
        c.targets.push_back(std::move(out));
    }
    return c;
}

// Depth-first assignment of parents in vertex order. A new edge v -> w
// closes a cycle iff following parents from w returns to v; earlier
// assignments are acyclic, so the walk always terminates.
class Enumerator {
public:
    Enumerator(const StochasticMatrix& P, const Candidates& c)
        : P_(P), c_(c), parent_(P.size(), RootedForest::none), partial_(c.free_vertices.size() + 1) {
        partial_[0] = Rational(1);
    }

    void run_from(std::size_t depth, std::vector<RootedForest>& out) {
        if (depth == c_.free_vertices.size()) {
            out.push_back({parent_, partial_[depth]});
            return;
        }
        const State v = c_.free_vertices[depth];
        for (State w : c_.targets[depth]) {
            if (closes_cycle(v, w)) continue;
            parent_[v] = w;
            partial_[depth + 1] = partial_[depth] * P_(v, w);
            run_from(depth + 1, out);
        }
        parent_[v] = RootedForest::none;
    }

    // Enumerate with the first free vertex pinned to a single target.
    void run_pinned(State target, std::vector<RootedForest>& out) {
        const State v = c_.free_vertices[0];
        parent_[v] = target;
        partial_[1] = P_(v, target);
        run_from(1, out);
        parent_[v] = RootedForest::none;
    }

private:
    bool closes_cycle(State v, State w) const {
        State x = w;
        while (x != v && parent_[x] != RootedForest::none) x = parent_[x];
        return x == v;
    }

    const StochasticMatrix& P_;
    const Candidates& c_;
    std::vector<State> parent_;
    std::vector<Rational> partial_;
};

}  // namespace

Integer enumeration_size(const StochasticMatrix& P, const StateSet& roots) {
    auto c = candidates(P, validated_roots(P, roots));
    Integer size = 1;
    for (const auto& t : c.targets) size *= static_cast<unsigned long>(t.size());
    return size;
}

ForestFamily enumerate_forests(const StochasticMatrix& P, const StateSet& roots, const EnumerationOptions& options) {
    ForestFamily family;
    family.roots = validated_roots(P, roots);
    const Candidates c = candidates(P, family.roots);

    Integer size = 1;
    for (const auto& t : c.targets) size *= static_cast<unsigned long>(t.size());
    if (size > options.budget) throw BudgetExceeded(size, options.budget);

    if (c.free_vertices.empty()) {
        family.forests.push_back({std::vector<State>(P.size(), RootedForest::none), Rational(1)});
    } else if (options.jobs <= 1 || c.targets[0].size() <= 1) {
        Enumerator(P, c).run_from(0, family.forests);
    } else {
        // Each task owns one choice for the first free vertex; concatenating
        // in choice order keeps the lexicographic order.
        const auto& first = c.targets[0];
        std::vector<std::vector<RootedForest>> parts(first.size());
        const std::size_t jobs = std::min<std::size_t>(options.jobs, first.size());
        std::vector<std::future<void>> workers;
        for (std::size_t j = 0; j < jobs; ++j) {
            workers.push_back(std::async(std::launch::async, [&, j] {
                Enumerator e(P, c);
                for (std::size_t i = j; i < first.size(); i += jobs) e.run_pinned(first[i], parts[i]);
            }));
        }
        for (auto& w : workers) w.get();
        for (auto& part : parts) {
            for (auto& f : part) family.forests.push_back(std::move(f));
        }
    }

    for (const auto& f : family.forests) family.total_weight += f.weight;
    return family;
}

ForestFamily enumerate_forests_with_path(const StochasticMatrix& P, const StateSet& roots, State from, State to,
                                         const EnumerationOptions& options) {
    if (from >= P.size() || to >= P.size()) throw PreconditionError("path endpoint out of range");
    ForestFamily all = enumerate_forests(P, roots, options);
    if (from == to) return all;
    ForestFamily out;
    out.roots = std::move(all.roots);
    for (auto& f : all.forests) {
        if (f.has_path(from, to)) {
            out.total_weight += f.weight;
            out.forests.push_back(std::move(f));
        }
    }
    return out;
}

RationalMatrix laplacian(const StochasticMatrix& P) {
    const std::size_t n = P.size();
    RationalMatrix L(n, n);
    for (State v = 0; v < n; ++v) {
        for (State w = 0; w < n; ++w) L(v, w) = v == w ? Rational(1) - P(v, v) : -P(v, w);
    }
    return L;
}

Rational tree_weight_sum_det(const StochasticMatrix& P, State root) {
    if (root >= P.size()) throw PreconditionError("root out of range");
    return forest_weight_sum_det(P, {root});
}

Rational forest_weight_sum_det(const StochasticMatrix& P, const StateSet& roots) {
    StateSet kept = [&] {
        auto r = validated_roots(P, roots);
        StateSet out;
        for (State v = 0; v < P.size(); ++v) {
            if (!std::binary_search(r.begin(), r.end(), v)) out.push_back(v);
        }
        return out;
    }();
    return determinant(laplacian(P).submatrix(kept, kept));
}

Rational path_forest_weight_sum_det(const StochasticMatrix& P, const StateSet& roots, State from, State to) {
    auto r = validated_roots(P, roots);
    if (from >= P.size() || to >= P.size()) throw PreconditionError("path endpoint out of range");
    if (std::binary_search(r.begin(), r.end(), from) || std::binary_search(r.begin(), r.end(), to)) {
        throw PreconditionError("path endpoints must lie outside the root set");
    }
    StateSet kept;
    for (State v = 0; v < P.size(); ++v) {
        if (!std::binary_search(r.begin(), r.end(), v)) kept.push_back(v);
    }
    auto position = [&](State v) { return static_cast<std::size_t>(std::lower_bound(kept.begin(), kept.end(), v) - kept.begin()); };
    const std::size_t a = position(from), b = position(to);

    // adj(A)(a, b) = (-1)^(a+b) det(A without row b and column a).
    StateSet rows, cols;
    for (std::size_t i = 0; i < kept.size(); ++i) {
        if (i != b) rows.push_back(kept[i]);
        if (i != a) cols.push_back(kept[i]);
    }
    Rational minor = determinant(laplacian(P).submatrix(rows, cols));
    return (a + b) % 2 == 0 ? minor : -minor;
}

}  // namespace chainlcd
