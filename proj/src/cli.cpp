#include <cstdint>
#include <iostream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kpz1d/config.hpp"
#include "kpz1d/fractal_set.hpp"
#include "kpz1d/harness.hpp"
#include "kpz1d/weights.hpp"

namespace kpz1d {

namespace {

unsigned parse_threads(const std::string& text) {
    if (text == "auto") return 0;
    try {
        std::size_t pos = 0;
        const unsigned long value = std::stoul(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return static_cast<unsigned>(value);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad thread count '" + text +
                                    "' (want a number or 'auto')");
    }
}

std::uint64_t parse_count(const std::string& text, const std::string& what) {
    try {
        std::size_t pos = 0;
        const unsigned long long value = std::stoull(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw std::invalid_argument("bad value for " + what + ": '" + text + "'");
    }
}

double parse_number(const std::string& text, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double value = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw std::invalid_argument("bad value for " + what + ": '" + text + "'");
    }
}

bool parse_bool(const std::string& text, const std::string& what) {
    if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
    if (text == "0" || text == "false" || text == "no" || text == "off") return false;
    throw std::invalid_argument("bad boolean for " + what + ": '" + text + "'");
}

// Per-command replicate defaults, used when replicates is not given.
std::uint64_t default_replicates(const std::string& command) {
    static const std::map<std::string, std::uint64_t> table{
        {"validate-weights", 1}, {"dim-euclid", 1},     {"kpz-solve", 1},
        {"simulate", 8},         {"dim-quantum", 50},   {"kpz-experiment", 50},
        {"diagnostics", 200},    {"energy", 100}};
    return table.at(command);
}

/// Settings as text, filled from the config file first and command-line
/// flags second, so flags override the file.
struct CliSettings {
    std::string model = "family=lognormal sigma2=0.6931471805599453";
    std::string set = "set=full";
    std::string seed = "1";
    std::string seeds_file;
    std::string out_dir;
    std::string threads = "auto";
    std::uint64_t replicates = 0; // 0: per-command default
    std::uint32_t n_min = 8;
    std::uint32_t n_max = 16;
    std::uint32_t tail_depth = 0;
    double s = 0.5;
    double zeta0 = 0.0;
    bool zeta0_given = false;
    bool root_of_mean = false;
    bool compact = false;
};

void apply_config_file(const std::string& path, CliSettings& out) {
    for (const auto& [key, value] : parse_key_value_file(path)) {
        if (key == "model") out.model = value;
        else if (key == "set") out.set = value;
        else if (key == "seed") out.seed = value;
        else if (key == "seeds-file") out.seeds_file = value;
        else if (key == "out-dir") out.out_dir = value;
        else if (key == "threads") out.threads = value;
        else if (key == "replicates")
            out.replicates = parse_count(value, "replicates");
        else if (key == "nmin")
            out.n_min = std::uint32_t(parse_count(value, "nmin"));
        else if (key == "nmax")
            out.n_max = std::uint32_t(parse_count(value, "nmax"));
        else if (key == "tail-depth")
            out.tail_depth = std::uint32_t(parse_count(value, "tail-depth"));
        else if (key == "s") out.s = parse_number(value, "s");
        else if (key == "zeta0") {
            out.zeta0 = parse_number(value, "zeta0");
            out.zeta0_given = true;
        } else if (key == "root-of-mean")
            out.root_of_mean = parse_bool(value, "root-of-mean");
        else if (key == "json") out.compact = parse_bool(value, "json");
        else throw std::invalid_argument("unknown config key '" + key + "'");
    }
}

/// The config file path comes from argv before CLI11 runs, so its values can
/// seed the option defaults that flags then override.
std::string find_config_path(int argc, const char* const* argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config") {
            if (i + 1 >= argc)
                throw std::invalid_argument("--config needs a file path");
            return argv[i + 1];
        }
        if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
    }
    return "";
}

} // namespace

int cli_main(int argc, const char* const* argv) {
    CliSettings settings;
    std::string config_path;
    try {
        config_path = find_config_path(argc, argv);
        if (!config_path.empty()) apply_config_file(config_path, settings);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    CLI::App app{"multiplicative-cascade dimension experiments"};
    app.require_subcommand(1);

    app.add_option("--config", config_path,
                   "key=value settings file; # starts a comment; "
                   "flags given on the command line win");
    app.add_option("--model", settings.model,
                   "weight model, e.g. 'family=twopoint sigma=0.5' or "
                   "'family=lognormal sigma2=0.25'")
        ->capture_default_str();
    app.add_option("--set", settings.set,
                   "digit-restriction set: 'set=full', 'set=point', or "
                   "'b=2 allow=00,11'")
        ->capture_default_str();
    app.add_option("--seed", settings.seed, "master seed (decimal or 0x hex)")
        ->capture_default_str();
    app.add_option("--seeds-file", settings.seeds_file,
                   "file with one seed per line; overrides --seed/--replicates");
    app.add_option("--replicates", settings.replicates,
                   "number of replicate seeds derived from the master seed "
                   "(default depends on the command)");
    app.add_option("--nmin", settings.n_min, "coarsest level of the fit window")
        ->capture_default_str();
    app.add_option("--nmax", settings.n_max, "finest level of the fit window")
        ->capture_default_str();
    app.add_option("-s,--s", settings.s, "moment/tilt exponent")
        ->capture_default_str();
    auto* zeta0_opt =
        app.add_option("--zeta0", settings.zeta0,
                       "target Euclidean dimension (default: the set's own)");
    app.add_option("--tail-depth", settings.tail_depth,
                   "extra subtree depth appended to each partition cell (0 = off)")
        ->capture_default_str();
    app.add_flag("--root-of-mean", settings.root_of_mean,
                 "also solve on the replicate-averaged partition function");
    app.add_option("--out-dir", settings.out_dir, "directory for CSV table output");
    app.add_option("--threads", settings.threads, "worker threads, or 'auto'")
        ->capture_default_str();
    app.add_flag("--json", settings.compact, "print the report as compact JSON");

    // Fallthrough lets global options appear after the subcommand name too.
    app.add_subcommand("validate-weights", "check the weight-model hypotheses")
        ->fallthrough();
    app.add_subcommand("simulate", "generate cascade replicates and summarize them")
        ->fallthrough();
    app.add_subcommand("dim-euclid", "box dimension of the digit-restriction set")
        ->fallthrough();
    app.add_subcommand("dim-quantum", "quantum dimension under the cascade metric")
        ->fallthrough();
    app.add_subcommand("kpz-solve", "invert the dimension relation analytically")
        ->fallthrough();
    app.add_subcommand("kpz-experiment",
                       "measured quantum dimension vs the analytic prediction")
        ->fallthrough();
    app.add_subcommand("diagnostics", "martingale, atom, and recursion diagnostics")
        ->fallthrough();
    app.add_subcommand("energy", "Frostman energy growth for the lower bound")
        ->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();

    ExperimentConfig config;
    try {
        config.model = parse_weight_model(settings.model);
        config.set = parse_digit_set(settings.set);
        if (!settings.seeds_file.empty()) {
            config.seeds = read_seeds_file(settings.seeds_file);
        } else {
            const std::uint64_t master = parse_seed(settings.seed);
            const std::uint64_t count = settings.replicates == 0
                                            ? default_replicates(command)
                                            : settings.replicates;
            config.seeds = count == 1 ? std::vector<std::uint64_t>{master}
                                      : expand_seeds(master, count);
        }
        config.n_min = settings.n_min;
        config.n_max = settings.n_max;
        config.s = settings.s;
        if (settings.zeta0_given || zeta0_opt->count() > 0)
            config.zeta0 = settings.zeta0;
        config.tail_depth = settings.tail_depth;
        config.root_of_mean = settings.root_of_mean;
        config.threads = parse_threads(settings.threads);
        config.out_dir = settings.out_dir;
        if (command != "validate-weights") config.validate();
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    try {
        ExperimentReport report;
        if (command == "validate-weights") report = run_validate_weights(config);
        else if (command == "simulate") report = run_simulate(config);
        else if (command == "dim-euclid") report = run_dim_euclid(config);
        else if (command == "dim-quantum") report = run_dim_quantum(config);
        else if (command == "kpz-solve") report = run_kpz_solve(config);
        else if (command == "kpz-experiment") report = run_kpz_experiment(config);
        else if (command == "diagnostics") report = run_diagnostics(config);
        else if (command == "energy") report = run_energy(config);
        else throw std::logic_error("unhandled command " + command);

        std::cout << (settings.compact ? report.summary.dump()
                                       : report.summary.dump(2))
                  << "\n";
        return report.passed() ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace kpz1d
