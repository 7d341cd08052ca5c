#include "chainlcd/analysis.hpp"

#include <algorithm>

namespace chainlcd {

std::string_view to_string(Method m) {
    switch (m) {
        case Method::Trivial: return "trivial";
        case Method::Enumeration: return "enumeration";
        case Method::Determinant: return "determinant";
        case Method::FundamentalMatrix: return "fundamental_matrix";
        case Method::LinearSolve: return "linear_solve";
    }
    return "unknown";
}

std::string_view to_string(BiasNormalization n) {
    return n == BiasNormalization::Anchored ? "anchored" : "weighted";
}

namespace {

bool contains(const StateSet& set, State v) { return std::binary_search(set.begin(), set.end(), v); }

StateSet with_state(StateSet set, State v) {
    set.insert(std::lower_bound(set.begin(), set.end(), v), v);
    return set;
}

}  // namespace

StationaryDistribution stationary_tree_formula(const StochasticMatrix& P, const AnalysisOptions& options) {
    if (!is_irreducible(P)) throw PreconditionError("tree formula requires an irreducible matrix");
    const std::size_t n = P.size();
    StationaryDistribution out;
    out.states.resize(n);
    for (State v = 0; v < n; ++v) out.states[v] = v;

    std::vector<Rational> tree_sums(n);
    try {
        for (State v = 0; v < n; ++v) tree_sums[v] = enumerate_forests(P, {v}, options.enumeration).total_weight;
        out.method = Method::Enumeration;
    } catch (const BudgetExceeded&) {
        if (!options.determinant_fallback) throw;
        for (State v = 0; v < n; ++v) tree_sums[v] = tree_weight_sum_det(P, v);
        out.method = Method::Determinant;
    }
    Rational total;
    for (const auto& t : tree_sums) total += t;
    for (const auto& t : tree_sums) out.probabilities.push_back(t / total);
    return out;
}

StationaryDistribution class_stationary_tree_formula(const StochasticMatrix& P, const StateSet& C,
                                                     const AnalysisOptions& options) {
    auto local = stationary_tree_formula(P.restrict_to_closed(C), options);
    local.states = C;
    return local;
}

StationaryDistribution class_stationary_by_solve(const StochasticMatrix& P, const StateSet& C) {
    return {C, stationary_by_solve(P.restrict_to_closed(C)), Method::LinearSolve};
}

namespace {

AbsorptionTable recurrent_part(const StochasticMatrix& P, const ChainStructure& structure) {
    AbsorptionTable table;
    const std::size_t p = structure.recurrent_classes.size();
    table.values.assign(P.size(), std::vector<Rational>(p));
    for (State v : structure.recurrent_states) table.values[v][structure.class_of[v]] = Rational(1);
    return table;
}

}  // namespace

AbsorptionTable absorption_by_fundamental_matrix(const StochasticMatrix& P, const ChainStructure& structure) {
    AbsorptionTable table = recurrent_part(P, structure);
    table.method = Method::FundamentalMatrix;
    const StateSet& T = structure.transient_states;
    if (T.empty()) return table;
    auto N = fundamental_matrix(P, T);
    RationalMatrix B = N.values.multiply(block(P, T, structure.recurrent_states));
    for (std::size_t a = 0; a < T.size(); ++a) {
        for (std::size_t b = 0; b < structure.recurrent_states.size(); ++b) {
            State s = structure.recurrent_states[b];
            table.values[T[a]][structure.class_of[s]] += B(a, b);
        }
    }
    return table;
}

AbsorptionTable absorption_forest_formula(const StochasticMatrix& P, const ChainStructure& structure,
                                          const AnalysisOptions& options) {
    const StateSet& S = structure.recurrent_states;
    const StateSet& T = structure.transient_states;
    AbsorptionTable table = recurrent_part(P, structure);
    if (T.empty() || S.size() == 1) {
        // A single recurrent state absorbs everything.
        for (State v : T) table.values[v][0] = Rational(1);
        table.method = Method::Trivial;
        return table;
    }

    ForestFamily family;
    try {
        family = enumerate_forests(P, S, options.enumeration);
    } catch (const BudgetExceeded&) {
        auto fallback = absorption_by_fundamental_matrix(P, structure);
        fallback.fell_back = true;
        return fallback;
    }
    table.method = Method::Enumeration;
    // In a forest rooted at S the unique out-path from v ends at its root,
    // so F_vw(S) for w in S is exactly the forests where v's root is w.
    for (const auto& f : family.forests) {
        for (State v : T) table.values[v][structure.class_of[f.root_of(v)]] += f.weight;
    }
    for (State v : T) {
        for (auto& x : table.values[v]) x /= family.total_weight;
    }
    return table;
}

AbsorptionTable absorption_forest_formula(const StochasticMatrix& P, const AnalysisOptions& options) {
    return absorption_forest_formula(P, decompose(P), options);
}

GainVector gain_from(const ChainStructure& structure, const std::vector<StationaryDistribution>& stationary,
                     const AbsorptionTable& absorption, const RewardVector& r) {
    const std::size_t n = structure.class_of.size();
    if (r.size() != n) {
        throw PreconditionError("reward vector has " + std::to_string(r.size()) + " entries, expected " +
                                std::to_string(n));
    }
    GainVector out;
    for (const auto& pi : stationary) {
        Rational eta;
        for (std::size_t a = 0; a < pi.states.size(); ++a) eta += Rational(r.entries[pi.states[a]]) * pi.probabilities[a];
        out.class_gains.push_back(eta);
    }
    out.chi.resize(n);
    for (State i = 0; i < n; ++i) {
        for (std::size_t l = 0; l < out.class_gains.size(); ++l) {
            if (!absorption(i, l).is_zero()) out.chi[i] += absorption(i, l) * out.class_gains[l];
        }
    }
    out.constant = std::all_of(out.chi.begin(), out.chi.end(), [&](const Rational& x) { return x == out.chi.front(); });
    return out;
}

GainVector gain(const StochasticMatrix& P, const RewardVector& r, const AnalysisOptions& options) {
    if (r.size() != P.size()) {
        throw PreconditionError("reward vector has " + std::to_string(r.size()) + " entries, expected " +
                                std::to_string(P.size()));
    }
    auto structure = decompose(P);
    std::vector<StationaryDistribution> stationary;
    for (const auto& C : structure.recurrent_classes) stationary.push_back(class_stationary_tree_formula(P, C, options));
    return gain_from(structure, stationary, absorption_forest_formula(P, structure, options), r);
}

BiasVector bias_from(const StochasticMatrix& P, const ChainStructure& structure,
                     const std::vector<StationaryDistribution>& stationary, const GainVector& gain,
                     const RewardVector& r, BiasNormalization normalization) {
    const std::size_t n = P.size();
    if (r.size() != n) throw PreconditionError("reward vector length does not match the matrix");
    BiasVector out;
    out.normalization = normalization;
    out.u.resize(n);

    for (std::size_t l = 0; l < structure.recurrent_classes.size(); ++l) {
        const StateSet& C = structure.recurrent_classes[l];
        const State anchor = C.front();
        out.anchors.push_back(anchor);
        if (C.size() > 1) {
            StateSet W(C.begin() + 1, C.end());
            auto N = fundamental_matrix(P, W);
            std::vector<Rational> rhs;
            for (State v : W) rhs.push_back(Rational(r.entries[v]) - gain.class_gains[l]);
            auto u_hat = N.values.multiply(rhs);
            for (std::size_t a = 0; a < W.size(); ++a) out.u[W[a]] = u_hat[a];
        }
        if (normalization == BiasNormalization::Weighted) {
            const auto& pi = stationary[l];
            Rational mean;
            for (std::size_t a = 0; a < pi.states.size(); ++a) mean += out.u[pi.states[a]] * pi.probabilities[a];
            for (State v : C) out.u[v] -= mean;
        }
    }

    const StateSet& T = structure.transient_states;
    if (!T.empty()) {
        auto N = fundamental_matrix(P, T);
        std::vector<Rational> rhs;
        for (State i : T) {
            Rational x = Rational(r.entries[i]) - gain.chi[i];
            for (State s : structure.recurrent_states) {
                if (!P(i, s).is_zero()) x += P(i, s) * out.u[s];
            }
            rhs.push_back(std::move(x));
        }
        auto u_hat = N.values.multiply(rhs);
        for (std::size_t a = 0; a < T.size(); ++a) out.u[T[a]] = u_hat[a];
    }
    return out;
}

BiasVector bias(const StochasticMatrix& P, const RewardVector& r, BiasNormalization normalization,
                const AnalysisOptions& options) {
    if (r.size() != P.size()) throw PreconditionError("reward vector length does not match the matrix");
    auto structure = decompose(P);
    std::vector<StationaryDistribution> stationary;
    for (const auto& C : structure.recurrent_classes) stationary.push_back(class_stationary_tree_formula(P, C, options));
    auto g = gain_from(structure, stationary, absorption_forest_formula(P, structure, options), r);
    return bias_from(P, structure, stationary, g, r, normalization);
}

bool satisfies_bias_equations(const StochasticMatrix& P, const RewardVector& r, const std::vector<Rational>& chi,
                              const std::vector<Rational>& u) {
    const std::size_t n = P.size();
    if (r.size() != n || chi.size() != n || u.size() != n) return false;
    for (State i = 0; i < n; ++i) {
        Rational p_chi, p_u;
        for (State j = 0; j < n; ++j) {
            if (P(i, j).is_zero()) continue;
            p_chi += P(i, j) * chi[j];
            p_u += P(i, j) * u[j];
        }
        if (p_chi != chi[i]) return false;
        if (p_u != chi[i] + u[i] - Rational(r.entries[i])) return false;
    }
    return true;
}

namespace {

StateSet checked_open_set(const StochasticMatrix& P, const StateSet& W) {
    StateSet sorted = W;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    if (!is_open(P, sorted)) throw PreconditionError("visit counts requested for a set that is not open");
    return sorted;
}

}  // namespace

Rational visits(const StochasticMatrix& P, const StateSet& W, State v, State w, const AnalysisOptions& options) {
    StateSet open = checked_open_set(P, W);
    if (!contains(open, v) || !contains(open, w)) throw PreconditionError("visit endpoints must lie in the open set");
    StateSet S = complement(open, P.size());
    try {
        auto numerator = enumerate_forests_with_path(P, with_state(S, w), v, w, options.enumeration);
        auto denominator = enumerate_forests(P, S, options.enumeration);
        return numerator.total_weight / denominator.total_weight;
    } catch (const BudgetExceeded&) {
        if (!options.determinant_fallback) throw;
        return path_forest_weight_sum_det(P, S, v, w) / forest_weight_sum_det(P, S);
    }
}

FundamentalMatrix visits_by_forests(const StochasticMatrix& P, const StateSet& W, const AnalysisOptions& options) {
    StateSet open = checked_open_set(P, W);
    StateSet S = complement(open, P.size());
    FundamentalMatrix out{open, RationalMatrix(open.size(), open.size())};
    try {
        Rational denominator = enumerate_forests(P, S, options.enumeration).total_weight;
        for (std::size_t b = 0; b < open.size(); ++b) {
            const State w = open[b];
            auto family = enumerate_forests(P, with_state(S, w), options.enumeration);
            for (const auto& f : family.forests) {
                for (std::size_t a = 0; a < open.size(); ++a) {
                    if (f.has_path(open[a], w)) out.values(a, b) += f.weight;
                }
            }
            for (std::size_t a = 0; a < open.size(); ++a) out.values(a, b) /= denominator;
        }
    } catch (const BudgetExceeded&) {
        if (!options.determinant_fallback) throw;
        Rational denominator = forest_weight_sum_det(P, S);
        for (std::size_t a = 0; a < open.size(); ++a) {
            for (std::size_t b = 0; b < open.size(); ++b) {
                out.values(a, b) = path_forest_weight_sum_det(P, S, open[a], open[b]) / denominator;
            }
        }
    }
    return out;
}

}  // namespace chainlcd
