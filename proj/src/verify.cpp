#include "chainlcd/verify.hpp"

#include <algorithm>
#include <future>
#include <limits>
#include <random>

#include "chainlcd/generators.hpp"

namespace chainlcd {

using nlohmann::json;

void InstanceOutcome::record(const std::string& name, bool pass, const std::string& detail) {
    auto& tally = checks[name];
    if (pass) {
        ++tally.passed;
        return;
    }
    ++tally.failed;
    failures.push_back(label + ": " + name + (detail.empty() ? "" : " (" + detail + ")"));
}

namespace {

void record_bounds(InstanceOutcome& out, const BoundReport& report) {
    for (const auto& c : report) {
        if (c.skipped) continue;
        out.record(c.name, c.pass, c.quantity.to_string() + " vs " + c.bound.get_str());
        if (auto ratio = c.tightness_ratio()) {
            auto it = out.tightness.find(c.name);
            if (it == out.tightness.end() || it->second < *ratio) out.tightness[c.name] = *ratio;
        }
    }
}

void keep_max(std::map<std::string, Integer>& m, const std::string& key, const Integer& value) {
    auto it = m.find(key);
    if (it == m.end() || it->second < value) m[key] = value;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

}  // namespace

InstanceOutcome evaluate_instance(const std::string& label, const Instance& instance, const AnalysisOptions& options) {
    InstanceOutcome out;
    out.label = label;
    const auto& P = instance.matrix;
    out.n = P.size();

    AnalyzeOptions analyze_options;
    analyze_options.analysis = options;
    std::optional<AnalysisReport> analyzed;
    try {
        analyzed = analyze(instance, analyze_options);
    } catch (const std::exception& e) {
        out.record("analysis_completed", false, e.what());
        return out;
    }
    const AnalysisReport& report = *analyzed;
    const auto& structure = report.structure;
    out.irreducible = structure.recurrent_classes.size() == 1 && structure.transient_states.empty();
    out.recurrent_classes = structure.recurrent_classes.size();

    for (std::size_t l = 0; l < report.stationary_formula.size(); ++l) {
        const auto& f = report.stationary_formula[l].probabilities;
        out.record("dual_stationary", f == report.stationary_solve[l].probabilities);
        record_bounds(out, report.stationary_bounds[l]);
        keep_max(out.lcds, "stationary", lcd_of_vector(f));
    }

    out.record("dual_absorption", report.absorption_formula.values == report.absorption_matrix.values);
    record_bounds(out, report.absorption_bounds);
    Integer absorption_lcd = 1;
    for (const auto& row : report.absorption_formula.values) {
        for (const auto& x : row) absorption_lcd = lcm(absorption_lcd, x.denominator());
    }
    keep_max(out.lcds, "absorption", absorption_lcd);

    for (const auto& v : report.visits) out.record("dual_visits", v.agree);
    record_bounds(out, report.visit_bounds);

    if (report.gain) {
        const RewardVector& r = *instance.rewards;
        auto cross = gain_from(structure, report.stationary_solve, report.absorption_matrix, r);
        out.record("dual_gain", cross.chi == report.gain->chi);
        record_bounds(out, report.gain_bounds);
        keep_max(out.lcds, "gain", lcd_of_vector(report.gain->chi));

        for (const auto* b : {&*report.bias_anchored, &*report.bias_weighted}) {
            auto name = std::string(to_string(b->vector.normalization));
            out.record("bias_equations_" + name, b->satisfies_equations);
            record_bounds(out, {b->bound});
        }
        bool constant_shift = true;
        for (const auto& C : structure.recurrent_classes) {
            const auto& a = report.bias_anchored->vector.u;
            const auto& w = report.bias_weighted->vector.u;
            for (State v : C) constant_shift = constant_shift && (a[v] - w[v] == a[C.front()] - w[C.front()]);
        }
        out.record("bias_class_constant_shift", constant_shift);
    }

    record_bounds(out, report.hadamard);

    if (P.size() <= 7) {
        try {
            for (const auto& lemma : check_denominator_lemmas(P, structure, options.enumeration)) {
                auto& tally = out.checks[lemma.name];
                tally.passed += lemma.checked - lemma.failures;
                tally.failed += lemma.failures;
                if (lemma.failures) out.failures.push_back(label + ": " + lemma.name);
            }
        } catch (const BudgetExceeded& e) {
            out.record("lemma_enumeration_within_budget", false, e.what());
        }
    }
    return out;
}

Instance verify_random_instance(const VerifyConfig& config, std::size_t index) {
    std::mt19937_64 rng(splitmix64(config.seed ^ splitmix64(index)));
    RandomSpec spec;
    spec.n = config.n_min + uniform_below(rng, config.n_max - config.n_min + 1);
    spec.M = config.m_min + uniform_below(rng, config.m_max - config.m_min + 1);
    spec.density = config.density ? *config.density : static_cast<double>(1 + uniform_below(rng, 5)) / 5.0;
    spec.seed = rng();
    spec.closed_blocks = (index % 2 == 1 && spec.n >= 2) ? 2 : 0;
    Instance instance{gen_random(spec), RewardVector{}};
    for (std::size_t i = 0; i < spec.n; ++i) {
        instance.rewards->entries.push_back(Integer(static_cast<long>(uniform_below(rng, 21)) - 10));
    }
    return instance;
}

namespace {

void absorb(VerifySummary& summary, InstanceOutcome outcome, bool keep) {
    ++summary.instances;
    if (outcome.irreducible) ++summary.irreducible_instances;
    if (outcome.recurrent_classes >= 2) ++summary.multichain_instances;
    for (const auto& [name, tally] : outcome.checks) {
        summary.checks[name].passed += tally.passed;
        summary.checks[name].failed += tally.failed;
        summary.failures += tally.failed;
    }
    for (const auto& [name, ratio] : outcome.tightness) {
        auto it = summary.worst_tightness.find(name);
        if (it == summary.worst_tightness.end() || it->second < ratio) summary.worst_tightness[name] = ratio;
    }
    for (const auto& [name, lcd] : outcome.lcds) keep_max(summary.max_lcd, name, lcd);
    for (const auto& f : outcome.failures) {
        if (summary.failure_details.size() < 20) summary.failure_details.push_back(f);
    }
    if (keep) summary.outcomes.push_back(std::move(outcome));
}

}  // namespace

VerifySummary run_verify(const VerifyConfig& config) {
    if (config.n_min < 1 || config.n_min > config.n_max) throw PreconditionError("empty state-count range");
    if (config.m_min < 1 || config.m_min > config.m_max) throw PreconditionError("empty denominator range");

    AnalysisOptions options;
    options.enumeration.budget = config.forest_budget;

    std::vector<InstanceOutcome> outcomes(config.count);
    auto work = [&](std::size_t first, std::size_t stride) {
        for (std::size_t i = first; i < config.count; i += stride) {
            outcomes[i] = evaluate_instance("random#" + std::to_string(i), verify_random_instance(config, i), options);
        }
    };
    const std::size_t jobs = std::max<std::size_t>(1, std::min<std::size_t>(config.jobs, config.count));
    if (jobs == 1) {
        work(0, 1);
    } else {
        std::vector<std::future<void>> workers;
        for (std::size_t j = 0; j < jobs; ++j) workers.push_back(std::async(std::launch::async, work, j, jobs));
        for (auto& w : workers) w.get();
    }

    VerifySummary summary;
    for (auto& o : outcomes) absorb(summary, std::move(o), config.keep_outcomes);

    if (!config.extremal) return summary;

    for (std::size_t n = std::max<std::size_t>(3, config.n_min); n <= config.n_max; ++n) {
        for (std::uint64_t m = std::max<std::uint64_t>(2, config.m_min); m <= config.m_max; ++m) {
            auto fig3 = gen_fig3(n, Integer(static_cast<unsigned long>(m)));
            RewardVector r;
            r.entries.assign(n, 0);
            r.entries[n - 1] = 1;
            Instance instance{fig3.matrix, r};
            auto label = "fig3(n=" + std::to_string(n) + ",M=" + std::to_string(m) + ")";
            auto outcome = evaluate_instance(label, instance, options);

            auto structure = decompose(fig3.matrix);
            auto psi = absorption_forest_formula(fig3.matrix, structure, options);
            auto checks = check_absorption_bound(fig3.matrix, structure, psi);
            const std::size_t last_class = structure.class_of[n - 1];
            json row;
            row["kind"] = "fig3";
            row["n"] = n;
            row["M"] = m;
            row["psi_1_last"] = psi(0, last_class).to_string();
            row["predicted_psi_1_last"] = fig3.predicted_psi_last.to_string();
            row["lcd"] = checks[0].quantity.to_string();
            row["bound"] = checks[0].bound.get_str();
            row["tightness_ratio"] = checks[0].tightness_ratio()->to_string();
            bool ok = psi(0, last_class) == fig3.predicted_psi_last && *checks[0].tightness_ratio() == Rational(1);
            outcome.record("fig3_tightness", ok);
            summary.extremal.push_back(std::move(row));
            absorb(summary, std::move(outcome), config.keep_outcomes);
        }
    }

    for (std::size_t n = std::max<std::size_t>(2, config.n_min); n <= config.n_max; ++n) {
        std::optional<CycleInstance> built;
        try {
            built = gen_fig2(n, n);
        } catch (const PreconditionError&) {
            continue;
        }
        const CycleInstance& fig2 = *built;
        RewardVector r;
        r.entries.assign(n, 0);
        r.entries[0] = 1;
        auto label = "fig2(n=" + std::to_string(n) + ",q=" + std::to_string(n) + ")";
        auto outcome = evaluate_instance(label, Instance{fig2.matrix, r}, options);

        auto pi = stationary_tree_formula(fig2.matrix, options);
        auto checks = check_stationary_bound(fig2.matrix, pi.probabilities);
        Integer lcd = lcd_of_vector(pi.probabilities);
        json row;
        row["kind"] = "fig2";
        row["n"] = n;
        row["q"] = n;
        row["M"] = fig2.M.get_str();
        row["lcd"] = lcd.get_str();
        row["predicted_lcd"] = fig2.predicted_lcd.get_str();
        row["bound"] = checks[0].bound.get_str();
        row["tightness_ratio"] = checks[0].tightness_ratio()->to_string();
        outcome.record("fig2_predicted_lcd", lcd == fig2.predicted_lcd && pi.probabilities == fig2.predicted_stationary);
        summary.extremal.push_back(std::move(row));
        absorb(summary, std::move(outcome), config.keep_outcomes);
    }
    return summary;
}

json to_json(const VerifySummary& summary, const VerifyConfig& config) {
    json out;
    json cfg;
    cfg["count"] = config.count;
    cfg["n_min"] = config.n_min;
    cfg["n_max"] = config.n_max;
    cfg["m_min"] = config.m_min;
    cfg["m_max"] = config.m_max;
    cfg["density"] = config.density ? json(*config.density) : json("mixed");
    cfg["seed"] = config.seed;
    cfg["extremal"] = config.extremal;
    cfg["forest_budget"] = config.forest_budget.get_str();
    out["config"] = cfg;

    out["instances"] = summary.instances;
    out["irreducible_instances"] = summary.irreducible_instances;
    out["multichain_instances"] = summary.multichain_instances;
    json checks = json::object();
    for (const auto& [name, tally] : summary.checks) checks[name] = {{"passed", tally.passed}, {"failed", tally.failed}};
    out["checks"] = checks;
    json worst = json::object();
    for (const auto& [name, ratio] : summary.worst_tightness) worst[name] = ratio.to_string();
    out["worst_tightness"] = worst;
    json lcds = json::object();
    for (const auto& [name, lcd] : summary.max_lcd) lcds[name] = lcd.get_str();
    out["max_lcd"] = lcds;
    out["extremal"] = summary.extremal;
    out["failures"] = summary.failures;
    out["failure_details"] = summary.failure_details;
    return out;
}

}  // namespace chainlcd
