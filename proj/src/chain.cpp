#include "chainlcd/chain.hpp"

#include <json.hpp>

namespace chainlcd {

using nlohmann::json;

StochasticMatrix::StochasticMatrix(std::vector<std::vector<Rational>> rows) : rows_(std::move(rows)) {
    const std::size_t n = rows_.size();
    if (n == 0) throw ParseError("matrix has no rows");
    for (std::size_t i = 0; i < n; ++i) {
        if (rows_[i].size() != n) {
            throw ParseError("non-square matrix: row " + std::to_string(i) + " has " +
                             std::to_string(rows_[i].size()) + " entries, expected " +
                             std::to_string(n));
        }
        Rational sum;
        for (std::size_t j = 0; j < n; ++j) {
            const auto& e = rows_[i][j];
            if (e < Rational(0) || e > Rational(1)) {
                throw ParseError("entry (" + std::to_string(i) + "," + std::to_string(j) + ") = " +
                                 e.to_string() + " is outside [0,1]");
            }
            sum += e;
        }
        if (sum != Rational(1)) {
            throw ParseError("row " + std::to_string(i) + " sums to " + sum.to_string() +
                             " (deficit " + (Rational(1) - sum).to_string() + ")");
        }
    }
}

StochasticMatrix StochasticMatrix::restrict_to_closed(const StateSet& states) const {
    std::vector<std::vector<Rational>> out;
    out.reserve(states.size());
    for (State i : states) {
        std::vector<Rational> row;
        row.reserve(states.size());
        for (State j : states) row.push_back(rows_[i][j]);
        out.push_back(std::move(row));
    }
    return StochasticMatrix(std::move(out));
}

Integer RewardVector::max_abs() const {
    Integer best = 0;
    for (const auto& r : entries) {
        Integer a = ::abs(r);
        if (a > best) best = a;
    }
    return best;
}

bool RewardVector::is_zero() const {
    for (const auto& r : entries) {
        if (r != 0) return false;
    }
    return true;
}

RewardVector parse_rewards(std::span<const std::string> entries, std::size_t n) {
    if (entries.size() != n) {
        throw ParseError("reward vector has " + std::to_string(entries.size()) +
                         " entries, expected " + std::to_string(n));
    }
    RewardVector r;
    for (const auto& e : entries) {
        try {
            r.entries.push_back(parse_integer(e));
        } catch (const std::invalid_argument& ex) {
            throw ParseError(ex.what());
        }
    }
    return r;
}

namespace {

std::string require_string(const json& j, const std::string& where) {
    if (!j.is_string()) throw ParseError(where + ": expected a string, got " + j.dump());
    return j.get<std::string>();
}

}  // namespace

Instance parse_instance(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("P")) throw ParseError("instance must be an object with key \"P\"");
    const json& grid = doc["P"];
    if (!grid.is_array()) throw ParseError("\"P\" must be an array of rows");

    std::vector<std::vector<Rational>> rows;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!grid[i].is_array()) throw ParseError("row " + std::to_string(i) + " is not an array");
        std::vector<Rational> row;
        for (std::size_t j = 0; j < grid[i].size(); ++j) {
            auto where = "P[" + std::to_string(i) + "][" + std::to_string(j) + "]";
            auto literal = require_string(grid[i][j], where);
            try {
                row.push_back(Rational::parse(literal));
            } catch (const std::invalid_argument& e) {
                throw ParseError(where + ": " + e.what());
            }
        }
        rows.push_back(std::move(row));
    }
    Instance out{StochasticMatrix(std::move(rows)), std::nullopt};

    if (doc.contains("r")) {
        const json& r = doc["r"];
        if (!r.is_array()) throw ParseError("\"r\" must be an array");
        std::vector<std::string> entries;
        for (std::size_t i = 0; i < r.size(); ++i) {
            entries.push_back(require_string(r[i], "r[" + std::to_string(i) + "]"));
        }
        out.rewards = parse_rewards(entries, out.matrix.size());
    }
    return out;
}

StochasticMatrix parse_matrix(std::string_view text) { return parse_instance(text).matrix; }

std::string serialize_instance(const Instance& instance) {
    json doc;
    json grid = json::array();
    for (const auto& row : instance.matrix.rows()) {
        json jr = json::array();
        for (const auto& e : row) jr.push_back(e.to_string());
        grid.push_back(std::move(jr));
    }
    doc["P"] = std::move(grid);
    if (instance.rewards) {
        json r = json::array();
        for (const auto& e : instance.rewards->entries) r.push_back(e.get_str());
        doc["r"] = std::move(r);
    }
    return doc.dump(2) + "\n";
}

DenominatorStats denominator_stats(const StochasticMatrix& P) {
    DenominatorStats stats;
    stats.global_lcd = 1;
    stats.row_lcd_product = 1;
    for (State i = 0; i < P.size(); ++i) {
        Integer mi = lcd_of_vector(P.row(i));
        stats.global_lcd = lcm(stats.global_lcd, mi);
        stats.row_lcd_product *= mi;
        stats.row_lcds.push_back(std::move(mi));
    }
    StateSet all(P.size());
    for (State i = 0; i < P.size(); ++i) all[i] = i;
    stats.nondeterministic_rows = count_nondeterministic(P, all);
    return stats;
}

Integer row_lcd_product(const DenominatorStats& stats, const StateSet& states) {
    Integer out = 1;
    for (State i : states) out *= stats.row_lcds[i];
    return out;
}

std::size_t count_nondeterministic(const StochasticMatrix& P, const StateSet& states) {
    std::size_t k = 0;
    for (State i : states) {
        std::size_t nonzero = 0;
        for (const auto& e : P.row(i)) nonzero += e.is_zero() ? 0 : 1;
        if (nonzero >= 2) ++k;
    }
    return k;
}

}  // namespace chainlcd
