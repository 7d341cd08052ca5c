#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "chainlcd/analysis.hpp"
#include "chainlcd/bounds.hpp"

namespace chainlcd {

/// Forest-ratio visit counts next to the matrix inverse for one open set.
struct VisitComparison {
    StateSet open_set;
    FundamentalMatrix forest_ratio;
    FundamentalMatrix matrix_inverse;
    bool agree = false;
};

struct BiasResult {
    BiasVector vector;
    bool satisfies_equations = false;
    BoundCheck bound;
    Rational hilbert_seminorm;
};

struct AnalysisReport {
    AnalysisReport(Instance instance_, DenominatorStats stats_, ChainStructure structure_)
        : instance(std::move(instance_)), stats(std::move(stats_)), structure(std::move(structure_)) {}

    Instance instance;
    DenominatorStats stats;
    ChainStructure structure;

    std::vector<StationaryDistribution> stationary_formula;  // per class
    std::vector<StationaryDistribution> stationary_solve;
    std::vector<BoundReport> stationary_bounds;

    AbsorptionTable absorption_formula;
    AbsorptionTable absorption_matrix;
    BoundReport absorption_bounds;

    std::vector<VisitComparison> visits;  // transient set, then each class minus its anchor
    BoundReport visit_bounds;

    std::optional<GainVector> gain;
    BoundReport gain_bounds;
    std::optional<BiasResult> bias_anchored;
    std::optional<BiasResult> bias_weighted;

    BoundReport hadamard;
    std::vector<MonteCarloResult> monte_carlo;

    /// Dual-path mismatches, failed verdicts and unsatisfied equations.
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
};

struct AnalyzeOptions {
    AnalysisOptions analysis;
    std::uint64_t monte_carlo_trajectories = 0;  // 0 disables simulation
    std::uint64_t monte_carlo_seed = 20240101;
};

AnalysisReport analyze(const Instance& instance, const AnalyzeOptions& options = {});

struct JsonOptions {
    bool decimal = false;  // add decimal approximations next to exact values
};

/// Deterministic JSON: sorted keys, rationals as "a/b" strings, states 1-based.
nlohmann::json to_json(const AnalysisReport& report, const JsonOptions& options = {});
nlohmann::json to_json(const BoundCheck& check, const JsonOptions& options = {});

}  // namespace chainlcd
