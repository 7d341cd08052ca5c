#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chainlcd/analysis.hpp"

namespace chainlcd {

/// One verdict: `quantity <= bound`, or `quantity^2 <= bound_squared` when
/// the bound carries a half-integer power.
struct BoundCheck {
    std::string name;
    Rational quantity;
    Integer bound;                       // for squared checks, ceil(sqrt(bound_squared))
    std::optional<Integer> bound_squared;
    std::string binding;                 // active argument of a min, when there is one
    bool skipped = false;                // preconditions of the bound do not hold
    std::string note;
    bool pass = true;

    /// quantity / bound; empty when the bound is zero or the check was skipped.
    std::optional<Rational> tightness_ratio() const;
};

using BoundReport = std::vector<BoundCheck>;

bool all_pass(const BoundReport& report);

/// min{nD, nM^(n-1)} with the active argument's name.
Integer stationary_bound(std::size_t n, const DenominatorStats& stats, std::string* binding = nullptr);
/// min{D_T, M^(n-2)}, with M^(n-2) read as 1 when n < 2.
Integer absorption_bound(std::size_t n, const DenominatorStats& stats, const ChainStructure& structure,
                         std::string* binding = nullptr);

/// lcd(pi) <= min{nD, nM^(n-1)} and the k-dependent relaxation
/// min{nD, nM^(n-1)} <= nM^min(k, n-1). P must be irreducible.
BoundReport check_stationary_bound(const StochasticMatrix& P, const std::vector<Rational>& pi);

/// lcd(psi) <= min{D_T, M^(n-2)} and min{D_T, M^(n-2)} <= M^min(k_T, n-2).
BoundReport check_absorption_bound(const StochasticMatrix& P, const ChainStructure& structure,
                                   const AbsorptionTable& psi);

/// Ergodic bound on eta when chi is constant; always lcd(chi)^2 <= 3^s D^2
/// and lcd(chi) <= |C_1|...|C_p| D.
BoundReport check_gain_bounds(const StochasticMatrix& P, const ChainStructure& structure, const GainVector& gain);

/// max|u| <= c max|r| n min{D, M^(n-1)} with c = 2 (anchored) or 4 (weighted).
BoundCheck check_bias_bound(const StochasticMatrix& P, const RewardVector& r, const BiasVector& u);

/// max u - min u.
Rational hilbert_seminorm(const std::vector<Rational>& u);
Rational sup_norm(const std::vector<Rational>& u);

/// Entries of (I - P_WW)^{-1} are at most prod_{w in W} M_w <= min{D, M^(n-1)}.
BoundReport check_visit_bound(const StochasticMatrix& P, const FundamentalMatrix& N);

/// min{nD, nM^(n-1)} against the Hadamard-type bounds n^(n/2) M^n and,
/// when k >= 1, k n (2M)^(k+1).
BoundReport hadamard_comparison(std::size_t n, const DenominatorStats& stats);

/// Per-forest denominator properties counted over every enumerated forest.
struct LemmaCheck {
    std::string name;
    std::size_t checked = 0;
    std::size_t failures = 0;
    bool pass() const { return failures == 0; }
};

/// Tree weights times D and M^(n-1) are integers and each tree family
/// weighs at most 1; when |S| >= 2, forests rooted at the recurrent set S
/// have weights that become integers when multiplied by D_T and by
/// M^(n-2), and total at most 1.
std::vector<LemmaCheck> check_denominator_lemmas(const StochasticMatrix& P, const ChainStructure& structure,
                                                 const EnumerationOptions& options = {});

}  // namespace chainlcd
