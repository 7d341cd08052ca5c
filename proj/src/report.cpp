#include "chainlcd/report.hpp"

#include <cstdio>

namespace chainlcd {

using nlohmann::json;

namespace {

std::string set_label(const StateSet& set) {
    std::string out = "{";
    for (std::size_t a = 0; a < set.size(); ++a) {
        if (a) out += ",";
        out += std::to_string(set[a] + 1);
    }
    return out + "}";
}

bool same_values(const FundamentalMatrix& a, const FundamentalMatrix& b) {
    return a.open_set == b.open_set && a.values == b.values;
}

void collect(const BoundReport& report, const std::string& scope, std::vector<std::string>& violations) {
    for (const auto& c : report) {
        if (!c.pass) {
            violations.push_back("bound " + c.name + scope + " violated: " + c.quantity.to_string() + " > " +
                                 c.bound.get_str());
        }
    }
}

// Two bias vectors of the same chain differ by a constant on every class.
bool differ_by_class_constants(const ChainStructure& structure, const std::vector<Rational>& a,
                               const std::vector<Rational>& b) {
    for (const auto& C : structure.recurrent_classes) {
        const Rational shift = a[C.front()] - b[C.front()];
        for (State v : C) {
            if (a[v] - b[v] != shift) return false;
        }
    }
    return true;
}

}  // namespace

AnalysisReport analyze(const Instance& instance, const AnalyzeOptions& options) {
    const StochasticMatrix& P = instance.matrix;
    AnalysisReport report(instance, denominator_stats(P), decompose(P));
    const auto& structure = report.structure;
    auto& violations = report.violations;

    for (const auto& C : structure.recurrent_classes) {
        auto formula = class_stationary_tree_formula(P, C, options.analysis);
        auto solved = class_stationary_by_solve(P, C);
        if (formula.probabilities != solved.probabilities) {
            violations.push_back("stationary distribution of class " + set_label(C) + " differs between routes");
        }
        auto bounds = check_stationary_bound(P.restrict_to_closed(C), formula.probabilities);
        collect(bounds, " on class " + set_label(C), violations);
        report.stationary_formula.push_back(std::move(formula));
        report.stationary_solve.push_back(std::move(solved));
        report.stationary_bounds.push_back(std::move(bounds));
    }

    report.absorption_formula = absorption_forest_formula(P, structure, options.analysis);
    report.absorption_matrix = absorption_by_fundamental_matrix(P, structure);
    if (report.absorption_formula.values != report.absorption_matrix.values) {
        violations.push_back("absorption probabilities differ between routes");
    }
    report.absorption_bounds = check_absorption_bound(P, structure, report.absorption_formula);
    collect(report.absorption_bounds, "", violations);

    std::vector<StateSet> open_sets;
    if (!structure.transient_states.empty()) open_sets.push_back(structure.transient_states);
    for (const auto& C : structure.recurrent_classes) {
        if (C.size() > 1) open_sets.emplace_back(C.begin() + 1, C.end());
    }
    for (const auto& W : open_sets) {
        VisitComparison v{W, visits_by_forests(P, W, options.analysis), fundamental_matrix(P, W)};
        v.agree = same_values(v.forest_ratio, v.matrix_inverse);
        if (!v.agree) violations.push_back("visit counts on " + set_label(W) + " differ between routes");
        for (auto c : check_visit_bound(P, v.matrix_inverse)) {
            c.note = "W=" + set_label(W);
            report.visit_bounds.push_back(std::move(c));
        }
        report.visits.push_back(std::move(v));
    }
    collect(report.visit_bounds, "", violations);

    if (instance.rewards) {
        const RewardVector& r = *instance.rewards;
        report.gain = gain_from(structure, report.stationary_formula, report.absorption_formula, r);
        auto cross = gain_from(structure, report.stationary_solve, report.absorption_matrix, r);
        if (cross.chi != report.gain->chi) violations.push_back("gain differs between routes");
        report.gain_bounds = check_gain_bounds(P, structure, *report.gain);
        collect(report.gain_bounds, "", violations);

        for (auto normalization : {BiasNormalization::Anchored, BiasNormalization::Weighted}) {
            BiasResult result;
            result.vector = bias_from(P, structure, report.stationary_formula, *report.gain, r, normalization);
            result.satisfies_equations = satisfies_bias_equations(P, r, report.gain->chi, result.vector.u);
            result.bound = check_bias_bound(P, r, result.vector);
            result.hilbert_seminorm = hilbert_seminorm(result.vector.u);
            if (!result.satisfies_equations) {
                violations.push_back(std::string(to_string(normalization)) + " bias does not satisfy the bias equations");
            }
            collect({result.bound}, "", violations);
            (normalization == BiasNormalization::Anchored ? report.bias_anchored : report.bias_weighted) = std::move(result);
        }
        if (!differ_by_class_constants(structure, report.bias_anchored->vector.u, report.bias_weighted->vector.u)) {
            violations.push_back("anchored and weighted bias differ by more than a class-wise constant");
        }
    }

    report.hadamard = hadamard_comparison(P.size(), report.stats);
    collect(report.hadamard, "", violations);

    if (options.monte_carlo_trajectories > 0) {
        for (State v : structure.transient_states) {
            auto mc = monte_carlo_absorption(P, structure, report.absorption_formula, v,
                                             options.monte_carlo_trajectories, options.monte_carlo_seed + v);
            report.monte_carlo.push_back(std::move(mc));
        }
    }
    return report;
}

namespace {

class Writer {
public:
    explicit Writer(const JsonOptions& options) : options_(options) {}

    json rational(const Rational& x) const {
        if (!options_.decimal) return x.to_string();
        char buffer[64];
        std::snprintf(buffer, sizeof buffer, "%.12g", x.to_double());
        return json{{"exact", x.to_string()}, {"decimal", std::string(buffer)}};
    }

    json vector(const std::vector<Rational>& v) const {
        json out = json::array();
        for (const auto& x : v) out.push_back(rational(x));
        return out;
    }

    json matrix(const RationalMatrix& m) const {
        json out = json::array();
        for (std::size_t i = 0; i < m.rows(); ++i) {
            json row = json::array();
            for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(rational(m(i, j)));
            out.push_back(std::move(row));
        }
        return out;
    }

    static json states(const StateSet& set) {
        json out = json::array();
        for (State v : set) out.push_back(v + 1);
        return out;
    }

    json check(const BoundCheck& c) const {
        json j;
        j["name"] = c.name;
        j["quantity"] = rational(c.quantity);
        j["bound"] = c.bound.get_str();
        if (c.bound_squared) {
            j["bound_squared"] = c.bound_squared->get_str();
            j["comparison"] = "squared";
        } else {
            j["comparison"] = "direct";
        }
        if (!c.binding.empty()) j["binding"] = c.binding;
        if (!c.note.empty()) j["note"] = c.note;
        j["verdict"] = c.skipped ? "skipped" : (c.pass ? "pass" : "fail");
        auto ratio = c.tightness_ratio();
        j["tightness_ratio"] = ratio ? rational(*ratio) : json(nullptr);
        return j;
    }

    json checks(const BoundReport& report) const {
        json out = json::array();
        for (const auto& c : report) out.push_back(check(c));
        return out;
    }

    json absorption(const AbsorptionTable& table, const ChainStructure& structure) const {
        json out = json::object();
        for (State i = 0; i < table.values.size(); ++i) {
            for (std::size_t l = 0; l < structure.recurrent_classes.size(); ++l) {
                auto key = "psi[" + std::to_string(i + 1) + "][C=" + set_label(structure.recurrent_classes[l]) + "]";
                out[key] = rational(table(i, l));
            }
        }
        return out;
    }

private:
    JsonOptions options_;
};

}  // namespace

json to_json(const BoundCheck& check, const JsonOptions& options) { return Writer(options).check(check); }

json to_json(const AnalysisReport& report, const JsonOptions& options) {
    const Writer w(options);
    const auto& P = report.instance.matrix;
    const auto& structure = report.structure;
    json out;

    out["n"] = P.size();

    json den;
    json row_lcds = json::array();
    for (const auto& m : report.stats.row_lcds) row_lcds.push_back(m.get_str());
    den["row_lcds"] = row_lcds;
    den["M"] = report.stats.global_lcd.get_str();
    den["D"] = report.stats.row_lcd_product.get_str();
    den["k"] = report.stats.nondeterministic_rows;
    den["D_T"] = structure.transient_row_lcd_product.get_str();
    den["k_T"] = structure.nondeterministic_transient_rows;
    den["s"] = structure.recurrent_count();
    out["denominators"] = den;

    json st;
    json classes = json::array();
    for (const auto& C : structure.recurrent_classes) classes.push_back(Writer::states(C));
    st["recurrent_classes"] = classes;
    st["transient_states"] = Writer::states(structure.transient_states);
    st["irreducible"] = structure.recurrent_classes.size() == 1 && structure.transient_states.empty();
    out["structure"] = st;

    json stationary = json::array();
    for (std::size_t l = 0; l < report.stationary_formula.size(); ++l) {
        const auto& f = report.stationary_formula[l];
        json j;
        j["class"] = Writer::states(f.states);
        j["tree_formula"] = w.vector(f.probabilities);
        j["linear_solve"] = w.vector(report.stationary_solve[l].probabilities);
        j["method"] = std::string(to_string(f.method));
        j["agree"] = f.probabilities == report.stationary_solve[l].probabilities;
        j["lcd"] = lcd_of_vector(f.probabilities).get_str();
        j["bounds"] = w.checks(report.stationary_bounds[l]);
        stationary.push_back(std::move(j));
    }
    out["stationary"] = stationary;

    json ab;
    ab["forest_formula"] = w.absorption(report.absorption_formula, structure);
    ab["fundamental_matrix"] = w.absorption(report.absorption_matrix, structure);
    ab["method"] = std::string(to_string(report.absorption_formula.method));
    ab["fell_back"] = report.absorption_formula.fell_back;
    ab["agree"] = report.absorption_formula.values == report.absorption_matrix.values;
    ab["bounds"] = w.checks(report.absorption_bounds);
    out["absorption"] = ab;

    json visits = json::array();
    for (const auto& v : report.visits) {
        json j;
        j["open_set"] = Writer::states(v.open_set);
        j["forest_ratio"] = w.matrix(v.forest_ratio.values);
        j["matrix_inverse"] = w.matrix(v.matrix_inverse.values);
        j["agree"] = v.agree;
        visits.push_back(std::move(j));
    }
    out["visits"] = json{{"sets", visits}, {"bounds", w.checks(report.visit_bounds)}};

    if (report.gain) {
        json r = json::array();
        for (const auto& x : report.instance.rewards->entries) r.push_back(x.get_str());
        out["rewards"] = r;
        json g;
        g["eta"] = w.vector(report.gain->class_gains);
        g["chi"] = w.vector(report.gain->chi);
        g["constant"] = report.gain->constant;
        g["lcd"] = lcd_of_vector(report.gain->chi).get_str();
        g["bounds"] = w.checks(report.gain_bounds);
        out["gain"] = g;

        json bias;
        for (const auto* b : {&*report.bias_anchored, &*report.bias_weighted}) {
            json j;
            j["u"] = w.vector(b->vector.u);
            j["anchors"] = Writer::states(b->vector.anchors);
            j["satisfies_equations"] = b->satisfies_equations;
            j["sup_norm"] = w.rational(sup_norm(b->vector.u));
            j["hilbert_seminorm"] = w.rational(b->hilbert_seminorm);
            j["bound"] = w.check(b->bound);
            bias[std::string(to_string(b->vector.normalization))] = j;
        }
        out["bias"] = bias;
    }

    out["hadamard"] = w.checks(report.hadamard);

    if (!report.monte_carlo.empty()) {
        json mc = json::array();
        for (const auto& m : report.monte_carlo) {
            json j;
            j["start"] = m.start + 1;
            j["trajectories"] = m.trajectories;
            j["pass"] = m.pass;
            json cls = json::array();
            for (const auto& c : m.classes) {
                cls.push_back({{"exact", c.exact}, {"frequency", c.frequency}, {"standard_error", c.standard_error},
                               {"within_tolerance", c.within_tolerance}});
            }
            j["classes"] = cls;
            mc.push_back(std::move(j));
        }
        out["monte_carlo"] = mc;
    }

    out["violations"] = report.violations;
    out["verdict"] = report.ok() ? "pass" : "fail";
    return out;
}

}  // namespace chainlcd
