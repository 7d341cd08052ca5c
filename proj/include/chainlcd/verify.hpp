#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "chainlcd/report.hpp"

namespace chainlcd {

/// Pass/fail tallies for one named check.
struct CheckTally {
    std::size_t passed = 0;
    std::size_t failed = 0;
};

/// Everything the harness learned from one instance.
struct InstanceOutcome {
    std::string label;
    std::size_t n = 0;
    bool irreducible = false;
    std::size_t recurrent_classes = 0;
    std::map<std::string, CheckTally> checks;
    /// Largest tightness ratio seen per bound name.
    std::map<std::string, Rational> tightness;
    std::map<std::string, Integer> lcds;  // stationary / absorption / gain
    std::vector<std::string> failures;

    void record(const std::string& name, bool pass, const std::string& detail = {});
};

/// Runs analyze() plus the per-forest denominator properties (n <= 7) on one
/// instance and tallies every check.
InstanceOutcome evaluate_instance(const std::string& label, const Instance& instance, const AnalysisOptions& options);

struct VerifyConfig {
    std::size_t count = 1000;
    std::size_t n_min = 2, n_max = 6;
    std::uint64_t m_min = 2, m_max = 10;
    std::optional<double> density;  // random per instance when unset
    std::uint64_t seed = 1;
    unsigned jobs = 1;
    bool extremal = true;
    Integer forest_budget = 10'000'000;
    bool keep_outcomes = false;
};

/// Random instance i of a verify run: every second instance is forced to
/// have at least two recurrent classes; rewards are drawn from [-10, 10].
Instance verify_random_instance(const VerifyConfig& config, std::size_t index);

struct VerifySummary {
    std::size_t instances = 0;
    std::size_t irreducible_instances = 0;
    std::size_t multichain_instances = 0;
    std::map<std::string, CheckTally> checks;
    std::map<std::string, Rational> worst_tightness;
    std::map<std::string, Integer> max_lcd;
    std::vector<std::string> failure_details;  // first few
    std::vector<nlohmann::json> extremal;       // one row per fig2/fig3 instance
    std::size_t failures = 0;
    std::vector<InstanceOutcome> outcomes;      // only with keep_outcomes
};

VerifySummary run_verify(const VerifyConfig& config);

nlohmann::json to_json(const VerifySummary& summary, const VerifyConfig& config);

}  // namespace chainlcd
