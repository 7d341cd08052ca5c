#include "chainlcd/bounds.hpp"

#include <algorithm>

namespace chainlcd {

std::optional<Rational> BoundCheck::tightness_ratio() const {
    if (skipped || bound == 0) return std::nullopt;
    return quantity / Rational(bound);
}

bool all_pass(const BoundReport& report) {
    return std::all_of(report.begin(), report.end(), [](const BoundCheck& c) { return c.pass; });
}

namespace {

unsigned long exponent(std::size_t n, std::size_t minus) { return n > minus ? static_cast<unsigned long>(n - minus) : 0UL; }

BoundCheck direct(std::string name, Rational quantity, Integer bound, std::string binding = {}) {
    BoundCheck c;
    c.name = std::move(name);
    c.pass = quantity <= Rational(bound);
    c.quantity = std::move(quantity);
    c.bound = std::move(bound);
    c.binding = std::move(binding);
    return c;
}

Integer ceil_sqrt(const Integer& x) {
    Integer root;
    mpz_sqrt(root.get_mpz_t(), x.get_mpz_t());
    if (root * root < x) root += 1;
    return root;
}

BoundCheck squared(std::string name, Rational quantity, Integer bound_squared) {
    BoundCheck c;
    c.name = std::move(name);
    c.pass = quantity * quantity <= Rational(bound_squared);
    c.quantity = std::move(quantity);
    c.bound = ceil_sqrt(bound_squared);
    c.bound_squared = std::move(bound_squared);
    return c;
}

}  // namespace

Integer stationary_bound(std::size_t n, const DenominatorStats& stats, std::string* binding) {
    const Integer nn = static_cast<unsigned long>(n);
    Integer by_product = nn * stats.row_lcd_product;
    Integer by_power = nn * pow(stats.global_lcd, exponent(n, 1));
    if (binding) *binding = by_product <= by_power ? "nD" : "nM^(n-1)";
    return std::min(by_product, by_power);
}

Integer absorption_bound(std::size_t n, const DenominatorStats& stats, const ChainStructure& structure,
                         std::string* binding) {
    Integer by_product = structure.transient_row_lcd_product;
    Integer by_power = pow(stats.global_lcd, exponent(n, 2));
    if (binding) *binding = by_product <= by_power ? "D_T" : "M^(n-2)";
    return std::min(by_product, by_power);
}

BoundReport check_stationary_bound(const StochasticMatrix& P, const std::vector<Rational>& pi) {
    const std::size_t n = P.size();
    auto stats = denominator_stats(P);
    std::string binding;
    Integer bound = stationary_bound(n, stats, &binding);

    BoundReport report;
    report.push_back(direct("stationary_lcd", Rational(lcd_of_vector(pi)), bound, binding));

    const auto k = static_cast<unsigned long>(std::min(stats.nondeterministic_rows, n - 1));
    report.push_back(direct("stationary_k_relaxation", Rational(bound),
                            Integer(static_cast<unsigned long>(n)) * pow(stats.global_lcd, k)));
    return report;
}

BoundReport check_absorption_bound(const StochasticMatrix& P, const ChainStructure& structure,
                                   const AbsorptionTable& psi) {
    const std::size_t n = P.size();
    auto stats = denominator_stats(P);
    std::string binding;
    Integer bound = absorption_bound(n, stats, structure, &binding);

    Integer lcd = 1;
    for (const auto& row : psi.values) {
        for (const auto& x : row) lcd = lcm(lcd, x.denominator());
    }
    BoundReport report;
    report.push_back(direct("absorption_lcd", Rational(lcd), bound, binding));
    const auto k = static_cast<unsigned long>(std::min<std::size_t>(structure.nondeterministic_transient_rows, exponent(n, 2)));
    report.push_back(direct("absorption_k_relaxation", Rational(bound), pow(stats.global_lcd, k)));
    return report;
}

BoundReport check_gain_bounds(const StochasticMatrix& P, const ChainStructure& structure, const GainVector& gain) {
    const std::size_t n = P.size();
    auto stats = denominator_stats(P);
    BoundReport report;

    if (gain.constant) {
        std::string binding;
        Integer bound = stationary_bound(n, stats, &binding);
        report.push_back(direct("gain_constant_denominator", Rational(gain.chi.front().denominator()), bound, binding));
    }

    const Integer lcd = lcd_of_vector(gain.chi);
    const Integer& D = stats.row_lcd_product;
    const auto s = static_cast<unsigned long>(structure.recurrent_count());
    report.push_back(squared("gain_lcd", Rational(lcd), pow(Integer(3), s) * D * D));

    Integer class_sizes = 1;
    for (const auto& C : structure.recurrent_classes) class_sizes *= static_cast<unsigned long>(C.size());
    report.push_back(direct("gain_lcd_class_product", Rational(lcd), class_sizes * D));
    return report;
}

Rational sup_norm(const std::vector<Rational>& u) {
    Rational best;
    for (const auto& x : u) best = std::max(best, x.abs());
    return best;
}

Rational hilbert_seminorm(const std::vector<Rational>& u) {
    if (u.empty()) return Rational(0);
    auto [lo, hi] = std::minmax_element(u.begin(), u.end());
    return *hi - *lo;
}

BoundCheck check_bias_bound(const StochasticMatrix& P, const RewardVector& r, const BiasVector& u) {
    const std::size_t n = P.size();
    auto stats = denominator_stats(P);
    Integer by_product = stats.row_lcd_product;
    Integer by_power = pow(stats.global_lcd, exponent(n, 1));
    std::string binding = by_product <= by_power ? "D" : "M^(n-1)";
    const unsigned long factor = u.normalization == BiasNormalization::Anchored ? 2 : 4;
    Integer bound = Integer(factor) * r.max_abs() * static_cast<unsigned long>(n) * std::min(by_product, by_power);
    return direct(std::string("bias_sup_norm_") + std::string(to_string(u.normalization)), sup_norm(u.u), bound,
                  binding);
}

BoundReport check_visit_bound(const StochasticMatrix& P, const FundamentalMatrix& N) {
    auto stats = denominator_stats(P);
    Integer product = row_lcd_product(stats, N.open_set);
    Rational largest;
    for (std::size_t i = 0; i < N.values.rows(); ++i) {
        for (std::size_t j = 0; j < N.values.cols(); ++j) largest = std::max(largest, N.values(i, j));
    }
    BoundReport report;
    report.push_back(direct("visits_max_entry", largest, product));
    const std::size_t n = P.size();
    Integer outer = std::min(stats.row_lcd_product, pow(stats.global_lcd, exponent(n, 1)));
    report.push_back(direct("visits_open_product", Rational(product), outer));
    return report;
}

BoundReport hadamard_comparison(std::size_t n, const DenominatorStats& stats) {
    Integer ours = stationary_bound(n, stats);
    const auto nn = static_cast<unsigned long>(n);
    BoundReport report;

    // (n^(n/2) M^n)^2 = n^n M^(2n)
    Integer hadamard_squared = pow(Integer(nn), nn) * pow(stats.global_lcd, 2 * nn);
    BoundCheck h;
    h.name = "hadamard_n_half";
    h.quantity = Rational(ours);
    h.bound_squared = hadamard_squared;
    h.bound = ceil_sqrt(hadamard_squared);
    h.pass = Rational(ours) * Rational(ours) <= Rational(hadamard_squared);
    report.push_back(std::move(h));

    const auto k = static_cast<unsigned long>(stats.nondeterministic_rows);
    if (k == 0) {
        BoundCheck skipped;
        skipped.name = "hadamard_k";
        skipped.quantity = Rational(ours);
        skipped.bound = 0;
        skipped.skipped = true;
        skipped.note = "deterministic chain (k = 0)";
        report.push_back(std::move(skipped));
    } else {
        Integer prior = Integer(k) * nn * pow(2 * stats.global_lcd, k + 1);
        report.push_back(direct("hadamard_k", Rational(ours), prior));
    }
    return report;
}

std::vector<LemmaCheck> check_denominator_lemmas(const StochasticMatrix& P, const ChainStructure& structure,
                                                 const EnumerationOptions& options) {
    const std::size_t n = P.size();
    auto stats = denominator_stats(P);
    const Rational D(stats.row_lcd_product);
    const Rational M_tree(pow(stats.global_lcd, exponent(n, 1)));

    LemmaCheck tree_D{"tree_weight_times_D_integer"};
    LemmaCheck tree_M{"tree_weight_times_M_pow_n_minus_1_integer"};
    LemmaCheck tree_cap{"tree_family_weight_at_most_1"};
    for (State v = 0; v < n; ++v) {
        auto family = enumerate_forests(P, {v}, options);
        for (const auto& f : family.forests) {
            ++tree_D.checked;
            ++tree_M.checked;
            if (!(f.weight * D).is_integer()) ++tree_D.failures;
            if (!(f.weight * M_tree).is_integer()) ++tree_M.failures;
        }
        ++tree_cap.checked;
        if (family.total_weight > Rational(1)) ++tree_cap.failures;
    }
    std::vector<LemmaCheck> out{tree_D, tree_M, tree_cap};

    if (structure.recurrent_count() >= 2) {
        const Rational DT(structure.transient_row_lcd_product);
        const Rational M_forest(pow(stats.global_lcd, exponent(n, 2)));
        LemmaCheck forest_DT{"forest_weight_times_D_T_integer"};
        LemmaCheck forest_M{"forest_weight_times_M_pow_n_minus_2_integer"};
        LemmaCheck forest_cap{"forest_family_weight_at_most_1"};
        auto family = enumerate_forests(P, structure.recurrent_states, options);
        for (const auto& f : family.forests) {
            ++forest_DT.checked;
            ++forest_M.checked;
            if (!(f.weight * DT).is_integer()) ++forest_DT.failures;
            if (!(f.weight * M_forest).is_integer()) ++forest_M.failures;
        }
        ++forest_cap.checked;
        if (family.total_weight > Rational(1)) ++forest_cap.failures;
        out.push_back(forest_DT);
        out.push_back(forest_M);
        out.push_back(forest_cap);
    }
    return out;
}

}  // namespace chainlcd
