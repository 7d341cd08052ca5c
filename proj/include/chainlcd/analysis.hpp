#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "chainlcd/chain.hpp"
#include "chainlcd/forests.hpp"
#include "chainlcd/linalg.hpp"
#include "chainlcd/structure.hpp"

namespace chainlcd {

/// Which route produced a number.
enum class Method { Trivial, Enumeration, Determinant, FundamentalMatrix, LinearSolve };

std::string_view to_string(Method m);

struct AnalysisOptions {
    EnumerationOptions enumeration;
    /// When enumeration is over budget, use matrix-tree determinants instead
    /// of failing.
    bool determinant_fallback = true;
};

struct StationaryDistribution {
    StateSet states;                     // the class, ascending
    std::vector<Rational> probabilities; // aligned with `states`
    Method method = Method::Enumeration;
};

/// Tree formula: pi_w proportional to the total weight of trees rooted at w.
/// Requires irreducible P; throws PreconditionError otherwise.
StationaryDistribution stationary_tree_formula(const StochasticMatrix& P, const AnalysisOptions& options = {});

/// Tree formula applied to the closed class C (states of P).
StationaryDistribution class_stationary_tree_formula(const StochasticMatrix& P, const StateSet& C,
                                                     const AnalysisOptions& options = {});

/// Linear-solve counterpart of class_stationary_tree_formula.
StationaryDistribution class_stationary_by_solve(const StochasticMatrix& P, const StateSet& C);

struct AbsorptionTable {
    std::vector<std::vector<Rational>> values;  // values[i][l] = psi(i, C_l)
    Method method = Method::Enumeration;
    bool fell_back = false;  // enumeration over budget, fundamental-matrix route used

    const Rational& operator()(State i, std::size_t l) const { return values[i][l]; }
};

/// Forest formula over the recurrent set S. Falls back to the
/// fundamental-matrix route (fell_back = true) when enumeration is over budget.
AbsorptionTable absorption_forest_formula(const StochasticMatrix& P, const ChainStructure& structure,
                                          const AnalysisOptions& options = {});
AbsorptionTable absorption_forest_formula(const StochasticMatrix& P, const AnalysisOptions& options = {});

/// B = (I - P_TT)^{-1} P_TS, columns summed per class.
AbsorptionTable absorption_by_fundamental_matrix(const StochasticMatrix& P, const ChainStructure& structure);

struct GainVector {
    std::vector<Rational> class_gains;  // eta per recurrent class
    std::vector<Rational> chi;
    bool constant = false;
};

GainVector gain(const StochasticMatrix& P, const RewardVector& r, const AnalysisOptions& options = {});

/// Gain from precomputed class distributions and absorption table.
GainVector gain_from(const ChainStructure& structure, const std::vector<StationaryDistribution>& stationary,
                     const AbsorptionTable& absorption, const RewardVector& r);

enum class BiasNormalization {
    Anchored,  // u = 0 at the smallest state of each recurrent class
    Weighted,  // sum over each class of u_i pi_i = 0
};

std::string_view to_string(BiasNormalization n);

struct BiasVector {
    std::vector<Rational> u;
    BiasNormalization normalization = BiasNormalization::Anchored;
    StateSet anchors;  // one per class (the smallest member)
};

/// Solves P chi = chi, P u = chi + u - r: per-class solves on C minus its
/// anchor, then the transient lift u_T = (I - P_TT)^{-1}(r_T - chi_T + P_TS u_S).
BiasVector bias(const StochasticMatrix& P, const RewardVector& r, BiasNormalization normalization,
                const AnalysisOptions& options = {});
BiasVector bias_from(const StochasticMatrix& P, const ChainStructure& structure,
                     const std::vector<StationaryDistribution>& stationary, const GainVector& gain,
                     const RewardVector& r, BiasNormalization normalization);

/// True iff P chi = chi and P u = chi + u - r hold exactly.
bool satisfies_bias_equations(const StochasticMatrix& P, const RewardVector& r, const std::vector<Rational>& chi,
                              const std::vector<Rational>& u);

/// Expected visits to w before leaving the open set W, starting at v, by the
/// forest ratio  sum F_vw(S + w) / sum F(S)  with S the complement of W.
Rational visits(const StochasticMatrix& P, const StateSet& W, State v, State w,
                const AnalysisOptions& options = {});

/// All entries of the forest-ratio visit matrix on W (rows/cols in ascending W order).
FundamentalMatrix visits_by_forests(const StochasticMatrix& P, const StateSet& W, const AnalysisOptions& options = {});

struct MonteCarloClassResult {
    double exact = 0.0;
    double frequency = 0.0;
    double standard_error = 0.0;
    bool within_tolerance = false;
};

struct MonteCarloResult {
    State start = 0;
    std::uint64_t trajectories = 0;
    std::vector<MonteCarloClassResult> classes;
    bool pass = true;
};

/// Simulates `trajectories` runs from `start` until a recurrent class is
/// hit and compares hit frequencies with the exact psi(start, .) at
/// `sigmas` standard errors. Sampling is exact on each row's common
/// denominator, driven by mt19937_64, so a seed fixes the outcome.
MonteCarloResult monte_carlo_absorption(const StochasticMatrix& P, const ChainStructure& structure,
                                        const AbsorptionTable& exact, State start, std::uint64_t trajectories,
                                        std::uint64_t seed, double sigmas = 4.0);

}  // namespace chainlcd
