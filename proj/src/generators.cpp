#include "chainlcd/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

namespace chainlcd {

using nlohmann::json;

std::vector<Integer> first_primes(std::size_t count) {
    std::vector<Integer> out;
    Integer candidate = 2;
    while (out.size() < count) {
        out.push_back(candidate);
        mpz_nextprime(candidate.get_mpz_t(), candidate.get_mpz_t());
    }
    return out;
}

namespace {

CycleInstance build_cycle(const std::vector<Integer>& p) {
    const std::size_t n = p.size();
    const Integer& M = p.back();
    std::vector<std::vector<Rational>> rows(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i + 1 < n; ++i) {
        Rational move(p[i], M);
        rows[i][i + 1] = move;
        rows[i][i] = Rational(1) - move;
    }
    rows[n - 1][0] = Rational(1);

    Integer product = 1;
    for (const auto& x : p) product *= x;
    std::vector<Integer> Q;
    Integer total = 0;
    for (const auto& x : p) {
        Q.push_back(product / x);
        total += Q.back();
    }
    CycleInstance out{StochasticMatrix(std::move(rows)), p, M, {}, total};
    for (const auto& q : Q) out.predicted_stationary.emplace_back(q, total);
    return out;
}

}  // namespace

CycleInstance gen_fig2(std::size_t n, std::size_t q, std::size_t max_bits) {
    if (n < 2) throw PreconditionError("fig2 construction needs n >= 2");
    if (q < n) throw PreconditionError("fig2 construction needs q >= n");
    auto primes = first_primes(q);
    Integer factorial = 1;
    for (Integer i = 2; i <= primes[q - 1]; ++i) {
        factorial *= i;
        if (mpz_sizeinbase(factorial.get_mpz_t(), 2) > max_bits) {
            throw PreconditionError("m_q! exceeds the " + std::to_string(max_bits) + "-bit cap");
        }
    }
    std::vector<Integer> p;
    for (std::size_t i = 0; i < n; ++i) p.push_back(factorial + primes[i]);
    return build_cycle(p);
}

CycleInstance gen_fig2_variant(const std::vector<Integer>& p) {
    if (p.size() < 2) throw PreconditionError("fig2 variant needs at least two parameters");
    const Integer& M = p.back();
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] < 1 || p[i] > M) throw PreconditionError("fig2 variant needs 1 <= p_i <= p_n");
        for (std::size_t j = i + 1; j < p.size(); ++j) {
            if (gcd(p[i], p[j]) != 1) {
                throw PreconditionError("fig2 variant parameters must be pairwise coprime (" + p[i].get_str() + ", " +
                                        p[j].get_str() + ")");
            }
        }
    }
    return build_cycle(p);
}

AbsorptionInstance gen_fig3(std::size_t n, const Integer& M) {
    if (n < 3) throw PreconditionError("fig3 construction needs n >= 3");
    if (M < 2) throw PreconditionError("fig3 construction needs M >= 2");
    std::vector<std::vector<Rational>> rows(n, std::vector<Rational>(n));
    const Rational forward(Integer(1), M);
    const State sink = n - 2;   // state n-1 (1-based)
    const State target = n - 1; // state n
    for (State i = 0; i + 2 < n; ++i) {
        State next = i + 3 < n ? i + 1 : target;
        rows[i][next] = forward;
        rows[i][sink] = Rational(1) - forward;
    }
    rows[sink][sink] = Rational(1);
    rows[target][target] = Rational(1);
    Integer power = pow(M, static_cast<unsigned long>(n - 2));
    return {StochasticMatrix(std::move(rows)), Rational(Integer(1), power), power};
}

namespace {

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

// Fisher-Yates on the first `count` positions.
void partial_shuffle(std::vector<State>& items, std::size_t count, std::mt19937_64& rng) {
    for (std::size_t i = 0; i < count && i + 1 < items.size(); ++i) {
        std::size_t j = i + uniform_below(rng, items.size() - i);
        std::swap(items[i], items[j]);
    }
}

std::vector<std::uint64_t> divisors(std::uint64_t m) {
    std::vector<std::uint64_t> small, large;
    for (std::uint64_t d = 1; d * d <= m; ++d) {
        if (m % d != 0) continue;
        small.push_back(d);
        if (d != m / d) large.push_back(m / d);
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

// Random composition of `total` into `parts` positive integers (Floyd
// sampling of the parts - 1 cut points in 1..total-1).
std::vector<std::uint64_t> composition(std::uint64_t total, std::size_t parts, std::mt19937_64& rng) {
    std::set<std::uint64_t> cuts;
    const std::uint64_t universe = total - 1;
    for (std::uint64_t j = universe - (parts - 1); j < universe; ++j) {
        std::uint64_t t = 1 + uniform_below(rng, j + 1);
        if (!cuts.insert(t).second) cuts.insert(j + 1);
    }
    std::vector<std::uint64_t> out;
    std::uint64_t previous = 0;
    for (auto c : cuts) {
        out.push_back(c - previous);
        previous = c;
    }
    out.push_back(total - previous);
    return out;
}

}  // namespace

StochasticMatrix gen_random(const RandomSpec& spec) {
    const std::size_t n = spec.n;
    if (n < 1) throw PreconditionError("random instance needs n >= 1");
    if (spec.M < 1) throw PreconditionError("random instance needs M >= 1");
    if (!(spec.density > 0.0 && spec.density <= 1.0)) throw PreconditionError("density must lie in (0, 1]");
    if (spec.closed_blocks == 1 || spec.closed_blocks > n) {
        throw PreconditionError("closed_blocks must be 0 or between 2 and n");
    }

    std::mt19937_64 rng(spec.seed);
    const auto support_size = static_cast<std::size_t>(
        std::clamp<long long>(std::llround(spec.density * static_cast<double>(n)), 1, static_cast<long long>(n)));

    // block[v] = b restricts row v to block b; n means unrestricted.
    std::vector<std::size_t> block(n, n);
    std::vector<StateSet> members;
    if (spec.closed_blocks >= 2) {
        std::vector<State> order(n);
        for (State v = 0; v < n; ++v) order[v] = v;
        partial_shuffle(order, n, rng);
        members.resize(spec.closed_blocks);
        for (std::size_t b = 0; b < spec.closed_blocks; ++b) {
            block[order[b]] = b;
            members[b].push_back(order[b]);
        }
        for (std::size_t i = spec.closed_blocks; i < n; ++i) {
            std::uint64_t choice = uniform_below(rng, spec.closed_blocks + 1);
            if (choice < spec.closed_blocks) {
                block[order[i]] = choice;
                members[choice].push_back(order[i]);
            }
        }
        for (auto& m : members) std::sort(m.begin(), m.end());
    }

    const auto all_divisors = divisors(spec.M);
    std::vector<std::vector<Rational>> rows(n, std::vector<Rational>(n));
    for (State v = 0; v < n; ++v) {
        std::vector<State> allowed;
        if (block[v] == n) {
            for (State w = 0; w < n; ++w) allowed.push_back(w);
        } else {
            allowed = members[block[v]];
        }
        std::size_t k = std::min(support_size, allowed.size());
        k = static_cast<std::size_t>(std::min<std::uint64_t>(k, spec.M));

        std::vector<std::uint64_t> eligible;
        for (auto d : all_divisors) {
            if (d >= k) eligible.push_back(d);
        }
        const std::uint64_t denominator = eligible[uniform_below(rng, eligible.size())];

        partial_shuffle(allowed, k, rng);
        std::vector<State> support(allowed.begin(), allowed.begin() + static_cast<std::ptrdiff_t>(k));
        std::sort(support.begin(), support.end());
        auto parts = composition(denominator, k, rng);
        for (std::size_t a = 0; a < k; ++a) {
            rows[v][support[a]] = Rational(Integer(static_cast<unsigned long>(parts[a])),
                                           Integer(static_cast<unsigned long>(denominator)));
        }
    }
    return StochasticMatrix(std::move(rows));
}

namespace {

std::vector<Integer> integers_from_json(const json& j) {
    std::vector<Integer> out;
    for (const auto& x : j) {
        if (x.is_string()) {
            out.push_back(parse_integer(x.get<std::string>()));
        } else if (x.is_number_integer()) {
            out.push_back(Integer(x.get<long>()));
        } else {
            throw PreconditionError("expected an integer, got " + x.dump());
        }
    }
    return out;
}

Integer integer_from_json(const json& j) {
    if (j.is_string()) return parse_integer(j.get<std::string>());
    if (j.is_number_integer()) return Integer(j.get<long>());
    throw PreconditionError("expected an integer, got " + j.dump());
}

json strings(const std::vector<Rational>& v) {
    json out = json::array();
    for (const auto& x : v) out.push_back(x.to_string());
    return out;
}

}  // namespace

GeneratorSpec generator_spec_from_json(const json& j) {
    GeneratorSpec spec;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "fig2") {
        spec.kind = GeneratorKind::Fig2;
        spec.n = j.at("n").get<std::size_t>();
        spec.q = j.at("q").get<std::size_t>();
        spec.max_bits = j.value("max_bits", spec.max_bits);
    } else if (kind == "fig2-variant") {
        spec.kind = GeneratorKind::Fig2Variant;
        spec.p = integers_from_json(j.at("p"));
        spec.n = spec.p.size();
    } else if (kind == "fig3") {
        spec.kind = GeneratorKind::Fig3;
        spec.n = j.at("n").get<std::size_t>();
        spec.M = integer_from_json(j.at("M"));
    } else if (kind == "random") {
        spec.kind = GeneratorKind::Random;
        spec.random.n = j.at("n").get<std::size_t>();
        spec.random.M = j.at("M").get<std::uint64_t>();
        spec.random.density = j.value("density", spec.random.density);
        spec.random.seed = j.value("seed", spec.random.seed);
        spec.random.closed_blocks = j.value("closed_blocks", spec.random.closed_blocks);
        spec.n = spec.random.n;
    } else {
        throw PreconditionError("unknown generator kind '" + kind + "'");
    }
    return spec;
}

json generator_spec_to_json(const GeneratorSpec& spec) {
    json j;
    switch (spec.kind) {
        case GeneratorKind::Fig2:
            j["kind"] = "fig2";
            j["n"] = spec.n;
            j["q"] = spec.q;
            j["max_bits"] = spec.max_bits;
            break;
        case GeneratorKind::Fig2Variant: {
            j["kind"] = "fig2-variant";
            json p = json::array();
            for (const auto& x : spec.p) p.push_back(x.get_str());
            j["p"] = p;
            break;
        }
        case GeneratorKind::Fig3:
            j["kind"] = "fig3";
            j["n"] = spec.n;
            j["M"] = spec.M.get_str();
            break;
        case GeneratorKind::Random:
            j["kind"] = "random";
            j["n"] = spec.random.n;
            j["M"] = spec.random.M;
            j["density"] = spec.random.density;
            j["seed"] = spec.random.seed;
            j["closed_blocks"] = spec.random.closed_blocks;
            break;
    }
    return j;
}

json generate_instance_json(const GeneratorSpec& spec) {
    json meta;
    meta["generator"] = generator_spec_to_json(spec);
    std::optional<StochasticMatrix> matrix;

    auto cycle_meta = [&](const CycleInstance& c) {
        meta["predicted"]["stationary"] = strings(c.predicted_stationary);
        meta["predicted"]["lcd"] = c.predicted_lcd.get_str();
        meta["M"] = c.M.get_str();
        matrix = c.matrix;
    };

    switch (spec.kind) {
        case GeneratorKind::Fig2: cycle_meta(gen_fig2(spec.n, spec.q, spec.max_bits)); break;
        case GeneratorKind::Fig2Variant: cycle_meta(gen_fig2_variant(spec.p)); break;
        case GeneratorKind::Fig3: {
            auto a = gen_fig3(spec.n, spec.M);
            meta["predicted"]["psi_1_last"] = a.predicted_psi_last.to_string();
            meta["predicted"]["D_T"] = a.predicted_transient_product.get_str();
            matrix = a.matrix;
            break;
        }
        case GeneratorKind::Random: matrix = gen_random(spec.random); break;
    }

    json doc = json::parse(serialize_instance({*matrix, std::nullopt}));
    doc["meta"] = std::move(meta);
    return doc;
}

}  // namespace chainlcd
