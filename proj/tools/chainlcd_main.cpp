// chainlcd: exact analysis of finite Markov chains and their denominator bounds.
//
//   chainlcd analyze  <instance.json> [--rewards 0,0,1|file] [--decimal] [-o out.json]
//   chainlcd verify   --count N --n-min a --n-max b --m-min c --m-max d [--seed s] [--jobs j]
//   chainlcd generate <fig2|fig2-variant|fig3|random> [kind flags] [-o out.json]
//
// Exit codes: 0 all checks pass, 1 usage / I/O / parse error, 2 theorem violation.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "chainlcd/generators.hpp"
#include "chainlcd/report.hpp"
#include "chainlcd/verify.hpp"

namespace {

using nlohmann::json;
using namespace chainlcd;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitViolation = 2;

std::string read_file(const std::string& path) {
    if (path == "-") {
        std::stringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
}

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

// --rewards takes either a path to a JSON array of integer strings or an
// inline comma-separated list.
RewardVector load_rewards(const std::string& arg, std::size_t n) {
    if (std::filesystem::exists(arg)) {
        json j;
        try {
            j = json::parse(read_file(arg));
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("rewards file: ") + e.what());
        }
        if (j.is_object() && j.contains("r")) j = j["r"];
        if (!j.is_array()) throw ParseError("rewards file must hold an array");
        std::vector<std::string> entries;
        for (const auto& x : j) entries.push_back(x.is_string() ? x.get<std::string>() : x.dump());
        return parse_rewards(entries, n);
    }
    return parse_rewards(split_commas(arg), n);
}

struct AnalyzeArgs {
    std::string input;
    std::string rewards;
    unsigned jobs = 1;
    std::string forest_budget = "10000000";
    bool decimal = false;
    std::uint64_t monte_carlo = 0;
    std::uint64_t seed = 20240101;
    std::string output;
};

int run_analyze(const AnalyzeArgs& args) {
    Instance instance = parse_instance(read_file(args.input));
    if (!args.rewards.empty()) instance.rewards = load_rewards(args.rewards, instance.matrix.size());

    AnalyzeOptions options;
    options.analysis.enumeration.jobs = args.jobs;
    options.analysis.enumeration.budget = parse_integer(args.forest_budget);
    options.monte_carlo_trajectories = args.monte_carlo;
    options.monte_carlo_seed = args.seed;

    AnalysisReport report = analyze(instance, options);
    write_output(args.output, to_json(report, {args.decimal}).dump(2) + "\n");
    for (const auto& v : report.violations) std::cerr << "theorem violation: " << v << "\n";
    return report.ok() ? kExitOk : kExitViolation;
}

struct VerifyArgs {
    VerifyConfig config;
    double density = 0.0;
    std::string forest_budget = "10000000";
    bool no_extremal = false;
    std::string output;
};

int run_verify_command(VerifyArgs args) {
    if (args.density > 0.0) args.config.density = args.density;
    args.config.extremal = !args.no_extremal;
    args.config.forest_budget = parse_integer(args.forest_budget);
    auto summary = run_verify(args.config);
    write_output(args.output, to_json(summary, args.config).dump(2) + "\n");
    for (const auto& f : summary.failure_details) std::cerr << "failure: " << f << "\n";
    return summary.failures == 0 ? kExitOk : kExitViolation;
}

struct GenerateArgs {
    std::string kind;
    std::string spec_file;
    std::size_t n = 0;
    std::size_t q = 0;
    std::string M;
    std::string p;
    double density = 0.5;
    std::uint64_t seed = 1;
    std::size_t closed_blocks = 0;
    std::size_t max_bits = 100000;
    std::string output;
};

int run_generate(const GenerateArgs& args) {
    json spec_json;
    if (!args.spec_file.empty()) {
        try {
            spec_json = json::parse(read_file(args.spec_file));
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("generator spec: ") + e.what());
        }
    } else {
        if (args.kind.empty()) throw PreconditionError("generate needs a kind or --spec");
        spec_json["kind"] = args.kind;
        if (args.kind == "fig2") {
            spec_json["n"] = args.n;
            spec_json["q"] = args.q;
            spec_json["max_bits"] = args.max_bits;
        } else if (args.kind == "fig2-variant") {
            spec_json["p"] = split_commas(args.p);
        } else if (args.kind == "fig3") {
            spec_json["n"] = args.n;
            spec_json["M"] = args.M;
        } else if (args.kind == "random") {
            spec_json["n"] = args.n;
            spec_json["M"] = args.M.empty() ? 0 : std::stoull(args.M);
            spec_json["density"] = args.density;
            spec_json["seed"] = args.seed;
            spec_json["closed_blocks"] = args.closed_blocks;
        }
    }
    GeneratorSpec spec;
    try {
        spec = generator_spec_from_json(spec_json);
    } catch (const json::exception& e) {
        throw PreconditionError(std::string("generator spec: ") + e.what());
    }
    write_output(args.output, generate_instance_json(spec).dump(2) + "\n");
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact analysis of finite Markov chains with rational transition probabilities"};
    app.require_subcommand(1);

    AnalyzeArgs analyze_args;
    auto* analyze_cmd = app.add_subcommand("analyze", "Analyze one instance and check every bound");
    analyze_cmd->add_option("file", analyze_args.input, "Instance JSON ('-' for stdin)")->required();
    analyze_cmd->add_option("--rewards", analyze_args.rewards, "Rewards: comma list or JSON file");
    analyze_cmd->add_option("--jobs", analyze_args.jobs, "Threads for forest enumeration")->check(CLI::PositiveNumber);
    analyze_cmd->add_option("--forest-budget", analyze_args.forest_budget, "Enumeration cap");
    analyze_cmd->add_flag("--decimal", analyze_args.decimal, "Add decimal approximations");
    analyze_cmd->add_option("--monte-carlo", analyze_args.monte_carlo, "Trajectories per transient state (0 = off)");
    analyze_cmd->add_option("--seed", analyze_args.seed, "Monte Carlo seed");
    analyze_cmd->add_option("-o,--output", analyze_args.output, "Report destination");

    VerifyArgs verify_args;
    auto* verify_cmd = app.add_subcommand("verify", "Run the bound-verification harness");
    verify_cmd->add_option("--count", verify_args.config.count, "Random instances");
    verify_cmd->add_option("--n-min", verify_args.config.n_min);
    verify_cmd->add_option("--n-max", verify_args.config.n_max);
    verify_cmd->add_option("--m-min", verify_args.config.m_min);
    verify_cmd->add_option("--m-max", verify_args.config.m_max);
    verify_cmd->add_option("--density", verify_args.density, "Row support density in (0,1]; mixed when unset")
        ->check(CLI::Range(0.0, 1.0));
    verify_cmd->add_option("--seed", verify_args.config.seed);
    verify_cmd->add_option("--jobs", verify_args.config.jobs)->check(CLI::PositiveNumber);
    verify_cmd->add_option("--forest-budget", verify_args.forest_budget, "Enumeration cap");
    verify_cmd->add_flag("--no-extremal", verify_args.no_extremal, "Skip the fig2/fig3 constructions");
    verify_cmd->add_option("-o,--output", verify_args.output, "Summary destination");

    GenerateArgs generate_args;
    auto* generate_cmd = app.add_subcommand("generate", "Emit an instance");
    generate_cmd->add_option("kind", generate_args.kind, "fig2 | fig2-variant | fig3 | random")
        ->check(CLI::IsMember({"fig2", "fig2-variant", "fig3", "random"}));
    generate_cmd->add_option("--spec", generate_args.spec_file, "Generator spec as a JSON file");
    generate_cmd->add_option("--n", generate_args.n, "States");
    generate_cmd->add_option("--q", generate_args.q, "Prime index (fig2)");
    generate_cmd->add_option("--m", generate_args.M, "Denominator (fig3, random)");
    generate_cmd->add_option("--p", generate_args.p, "Comma list p_1..p_n (fig2-variant)");
    generate_cmd->add_option("--density", generate_args.density);
    generate_cmd->add_option("--seed", generate_args.seed);
    generate_cmd->add_option("--closed-blocks", generate_args.closed_blocks);
    generate_cmd->add_option("--max-bits", generate_args.max_bits, "Bit cap for m_q! (fig2)");
    generate_cmd->add_option("-o,--output", generate_args.output, "Instance destination");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*analyze_cmd) return run_analyze(analyze_args);
        if (*verify_cmd) return run_verify_command(verify_args);
        if (*generate_cmd) return run_generate(generate_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
