#include "kpz1d/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "kpz1d/cascade.hpp"
#include "kpz1d/config.hpp"
#include "kpz1d/csv.hpp"
#include "kpz1d/frostman.hpp"
#include "kpz1d/kpz.hpp"
#include "kpz1d/stats.hpp"
#include "kpz1d/version.hpp"

namespace kpz1d {

namespace {

unsigned resolve_threads(unsigned threads) {
    if (threads != 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t hash = 1469598103934665603ull;
    for (const unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    return hash;
}

std::string hex64(std::uint64_t v) {
    static const char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[std::size_t(i)] = digits[v & 0xF];
        v >>= 4;
    }
    return out;
}

ordered_json stat_block(std::span<const double> values) {
    const double m = mean(values);
    const double se = standard_error(values);
    return ordered_json{{"mean", m},
                        {"stderr", se},
                        {"ci95", {m - 1.96 * se, m + 1.96 * se}}};
}

ordered_json estimate_json(const DimensionEstimate& e) {
    return ordered_json{{"value", e.value},     {"stderr", e.stderr_},
                        {"n_min", e.n_min},     {"n_max", e.n_max},
                        {"r2", e.fit_r2},       {"method", e.method}};
}

ordered_json checks_json(const std::vector<CheckResult>& checks) {
    ordered_json arr = ordered_json::array();
    for (const auto& c : checks)
        arr.push_back(ordered_json{{"name", c.name},
                                   {"pass", c.pass},
                                   {"margin", c.margin},
                                   {"detail", c.detail}});
    return arr;
}

ExperimentReport finish_report(const char* command, const ExperimentConfig& config,
                               ordered_json quantities,
                               std::vector<CheckResult> checks) {
    ExperimentReport report;
    report.summary["command"] = command;
    report.summary["provenance"] = provenance(config);
    for (auto& [key, value] : quantities.items())
        report.summary[key] = std::move(value);
    report.summary["checks"] = checks_json(checks);
    report.checks = std::move(checks);
    report.summary["pass"] = report.passed();
    return report;
}

void write_csv(const std::string& dir, const std::string& name,
               std::span<const std::string> header,
               const std::vector<std::vector<std::string>>& rows) {
    std::filesystem::create_directories(dir);
    const auto path = std::filesystem::path(dir) / name;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    CsvWriter csv(out, header);
    for (const auto& row : rows) csv.row(row);
}

// Replicate levels for the appendix diagnostics, clipped to the config cap.
std::vector<std::uint32_t> clip_levels(std::initializer_list<std::uint32_t> levels,
                                       std::uint32_t n_max) {
    std::vector<std::uint32_t> out;
    for (const std::uint32_t n : levels)
        if (n <= n_max) out.push_back(n);
    return out;
}

using DiagCore = std::pair<ordered_json, std::vector<CheckResult>>;

DiagCore diag_mean_ell_core(const ExperimentConfig& config) {
    const std::uint32_t n = config.n_max;
    std::vector<double> totals(config.seeds.size());
    parallel_for(config.seeds.size(), resolve_threads(config.threads),
                 [&](std::size_t i) {
                     const CascadeRealization real(config.model, config.seeds[i], n);
                     totals[i] = real.ell(n);
                 });
    const double m = mean(totals);
    const double se = standard_error(totals);
    const double dev = std::abs(m - 1.0);

    ordered_json q;
    q["mean_ell"] = ordered_json{{"level", n},
                                 {"total", stat_block(totals)},
                                 {"deviation", dev}};
    CheckResult check{"mean_ell_is_one", dev <= 4.0 * se, 4.0 * se - dev,
                      "|mean - 1| = " + format_double(dev) + " vs 4*stderr = " +
                          format_double(4.0 * se)};
    return {std::move(q), {std::move(check)}};
}

DiagCore diag_atoms_core(const ExperimentConfig& config) {
    const auto levels = clip_levels({4, 8, 12, 16}, config.n_max);
    if (levels.size() < 2)
        throw std::invalid_argument("diag_atoms needs n_max >= 8");

    std::vector<std::vector<double>> atoms(levels.size());
    for (auto& row : atoms) row.resize(config.seeds.size());
    parallel_for(config.seeds.size(), resolve_threads(config.threads),
                 [&](std::size_t i) {
                     const CascadeRealization real(config.model, config.seeds[i],
                                                   levels.back());
                     for (std::size_t k = 0; k < levels.size(); ++k)
                         atoms[k][i] = real.max_atom(levels[k]);
                 });

    std::vector<double> medians;
    ordered_json table = ordered_json::array();
    for (std::size_t k = 0; k < levels.size(); ++k) {
        medians.push_back(median(atoms[k]));
        table.push_back(ordered_json{{"level", levels[k]},
                                     {"median_max_atom", medians.back()},
                                     {"max_atom", stat_block(atoms[k])}});
    }

    bool decreasing = true;
    double min_drop = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < medians.size(); ++k) {
        min_drop = std::min(min_drop, medians[k] - medians[k + 1]);
        if (!(medians[k + 1] < medians[k])) decreasing = false;
    }

    ordered_json q;
    q["atoms"] = ordered_json{{"levels", levels}, {"table", table}};
    if (config.seeds.size() == 1)
        q["atoms"]["warning"] = "median taken over a single replicate";
    CheckResult check{"max_atom_median_decreasing", decreasing, min_drop,
                      "smallest successive drop of the median is " +
                          format_double(min_drop)};
    return {std::move(q), {std::move(check)}};
}

DiagCore diag_neg_moments_core(const ExperimentConfig& config) {
    const double r = config.s;
    if (!(r >= 0.0)) throw std::invalid_argument("negative-moment order must be >= 0");
    const auto levels = clip_levels({4, 8, 12}, config.n_max);
    if (levels.size() < 2)
        throw std::invalid_argument("diag_neg_moments needs n_max >= 8");

    std::vector<std::vector<double>> values(levels.size());
    for (auto& row : values) row.resize(config.seeds.size());
    parallel_for(config.seeds.size(), resolve_threads(config.threads),
                 [&](std::size_t i) {
                     const CascadeRealization real(config.model, config.seeds[i],
                                                   levels.back());
                     for (std::size_t k = 0; k < levels.size(); ++k)
                         values[k][i] = std::pow(real.ell(levels[k]), -r);
                 });

    ordered_json table = ordered_json::array();
    std::vector<double> means;
    for (std::size_t k = 0; k < levels.size(); ++k) {
        means.push_back(mean(values[k]));
        table.push_back(ordered_json{{"level", levels[k]},
                                     {"neg_moment", stat_block(values[k])}});
    }
    const auto [lo_it, hi_it] = std::minmax_element(means.begin(), means.end());
    const double ratio = *hi_it / *lo_it;

    ordered_json q;
    q["neg_moments"] = ordered_json{{"order", r}, {"table", table}, {"ratio", ratio}};
    const double w_neg = config.model.neg_moment(r);
    if (!std::isfinite(w_neg))
        q["neg_moments"]["warning"] =
            "E[W^-r] is infinite; the finiteness hypothesis holds only in relaxed form";
    CheckResult check{"neg_moment_bounded", ratio <= 4.0, 4.0 - ratio,
                      "max/min of the level means is " + format_double(ratio)};
    return {std::move(q), {std::move(check)}};
}

DiagCore diag_recursion_core(const ExperimentConfig& config) {
    const auto levels = clip_levels({1, 4, 8}, config.n_max);
    std::vector<std::vector<double>> residuals(levels.size());
    for (auto& row : residuals) row.resize(config.seeds.size());
    parallel_for(config.seeds.size(), resolve_threads(config.threads),
                 [&](std::size_t i) {
                     const CascadeRealization real(config.model, config.seeds[i],
                                                   levels.back());
                     for (std::size_t k = 0; k < levels.size(); ++k)
                         residuals[k][i] = real.recursion_residual(levels[k]);
                 });

    double worst = 0.0;
    ordered_json table = ordered_json::array();
    for (std::size_t k = 0; k < levels.size(); ++k) {
        const double level_worst =
            *std::max_element(residuals[k].begin(), residuals[k].end());
        worst = std::max(worst, level_worst);
        table.push_back(
            ordered_json{{"level", levels[k]}, {"max_residual", level_worst}});
    }

    ordered_json q;
    q["recursion"] = ordered_json{{"table", table}, {"max_residual", worst}};
    CheckResult check{"recursion_identity", worst <= 1e-11, 1e-11 - worst,
                      "max relative residual is " + format_double(worst)};
    return {std::move(q), {std::move(check)}};
}

} // namespace

void ExperimentConfig::validate() const {
    if (seeds.empty()) throw std::invalid_argument("at least one seed is required");
    std::unordered_set<std::uint64_t> seen;
    for (const std::uint64_t s_ : seeds)
        if (!seen.insert(s_).second)
            throw std::invalid_argument("replicate seeds must be distinct");
    if (n_min >= n_max)
        throw std::invalid_argument("need n_min < n_max");
    if (n_max + tail_depth > 48)
        throw std::invalid_argument("n_max + tail_depth exceeds the generation cap of 48");
    if (!(s >= 0.0)) throw std::invalid_argument("s must be >= 0");
    if (zeta0 && !(*zeta0 >= 0.0 && *zeta0 <= 1.0))
        throw std::invalid_argument("zeta0 must lie in [0, 1]");
    const ValidationReport r = model.validate();
    if (!r.valid())
        throw std::invalid_argument("weight model fails its hypotheses: " + r.message);
}

std::string config_hash(const ExperimentConfig& config) {
    std::string text = config.model.describe() + "\n" + config.set.describe() + "\nseeds=";
    for (const std::uint64_t s_ : config.seeds) {
        text += std::to_string(s_);
        text += ',';
    }
    text += "\nn_min=" + std::to_string(config.n_min) +
            " n_max=" + std::to_string(config.n_max) + " s=" + format_double(config.s) +
            " zeta0=" + (config.zeta0 ? format_double(*config.zeta0) : "auto") +
            " tail_depth=" + std::to_string(config.tail_depth) +
            " root_of_mean=" + (config.root_of_mean ? "1" : "0");
    return hex64(fnv1a(text));
}

ordered_json provenance(const ExperimentConfig& config) {
    ordered_json p;
    p["version"] = kVersion;
    p["config_hash"] = config_hash(config);
    p["model"] = config.model.describe();
    p["set"] = config.set.describe();
    p["n_min"] = config.n_min;
    p["n_max"] = config.n_max;
    p["s"] = config.s;
    if (config.zeta0) p["zeta0"] = *config.zeta0;
    else p["zeta0"] = nullptr;
    p["tail_depth"] = config.tail_depth;
    p["root_of_mean"] = config.root_of_mean;
    p["replicates"] = config.seeds.size();
    p["seeds"] = config.seeds;
    return p;
}

bool ExperimentReport::passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.pass; });
}

ExperimentReport run_validate_weights(const ExperimentConfig& config) {
    const ValidationReport v = config.model.validate();

    ordered_json moments = ordered_json::array();
    for (const double s : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const MomentReport m = config.model.moment_report(s);
        ordered_json row{{"s", m.s}, {"m", m.m}, {"phi", m.phi}, {"psi", m.psi}};
        if (std::isfinite(m.neg_m)) row["neg_m"] = m.neg_m;
        else row["neg_m"] = "infinite";
        moments.push_back(std::move(row));
    }

    ordered_json q;
    q["validation"] = ordered_json{{"mean", v.mean},
                                   {"w_log2w", v.w_log2w},
                                   {"mean_one_ok", v.mean_one_ok},
                                   {"positive_ok", v.positive_ok},
                                   {"cascade_ok", v.cascade_ok},
                                   {"message", v.message}};
    q["moments"] = std::move(moments);

    std::vector<CheckResult> checks{
        {"mean_one", v.mean_one_ok, -std::abs(v.mean - 1.0),
         "E[W] = " + format_double(v.mean)},
        {"strictly_positive", v.positive_ok, v.positive_ok ? 0.0 : -1.0,
         v.positive_ok ? "W > 0" : "W can reach 0 or below"},
        {"cascade_condition", v.cascade_ok, 1.0 - v.w_log2w,
         "E[W log2 W] = " + format_double(v.w_log2w) + " (must stay below 1)"}};
    return finish_report("validate-weights", config, std::move(q), std::move(checks));
}

ExperimentReport run_simulate(const ExperimentConfig& config) {
    config.validate();
    const std::uint32_t n = config.n_max;

    std::vector<double> totals(config.seeds.size());
    std::vector<double> atoms(config.seeds.size());
    std::vector<double> residuals(config.seeds.size());
    parallel_for(config.seeds.size(), resolve_threads(config.threads),
                 [&](std::size_t i) {
                     const CascadeRealization real(config.model, config.seeds[i], n);
                     totals[i] = real.ell(n);
                     atoms[i] = real.max_atom(n);
                     residuals[i] = real.recursion_residual(n);
                 });
    const double worst_residual = *std::max_element(residuals.begin(), residuals.end());

    ordered_json q;
    q["simulation"] = ordered_json{{"level", n},
                                   {"total", stat_block(totals)},
                                   {"max_atom", stat_block(atoms)},
                                   {"max_recursion_residual", worst_residual}};

    if (!config.out_dir.empty()) {
        const std::uint32_t dump_level = std::min(n, 16u);
        std::filesystem::create_directories(config.out_dir);
        const auto path = std::filesystem::path(config.out_dir) / "cells.csv";
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        const CascadeRealization real(config.model, config.seeds.front(), n);
        real.dump_cells(dump_level, out);

        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < config.seeds.size(); ++i)
            rows.push_back({std::to_string(config.seeds[i]), format_double(totals[i]),
                            format_double(atoms[i]), format_double(residuals[i])});
        const std::string header[] = {"seed", "ell", "max_atom", "recursion_residual"};
        write_csv(config.out_dir, "replicates.csv", header, rows);
    }

    std::vector<CheckResult> checks{{"recursion_identity", worst_residual <= 1e-11,
                                     1e-11 - worst_residual,
                                     "max relative residual is " +
                                         format_double(worst_residual)}};
    return finish_report("simulate", config, std::move(q), std::move(checks));
}

ExperimentReport run_dim_euclid(const ExperimentConfig& config) {
    config.validate();
    const DimensionEstimate est =
        euclid_dimension(config.set, config.n_min, config.n_max);
    const double exact = config.set.zeta0();
    const double dev = std::abs(est.value - exact);

    ordered_json q;
    q["euclid"] = estimate_json(est);
    q["zeta0_exact"] = exact;
    std::vector<CheckResult> checks{
        {"matches_exact_dimension", dev <= 1e-9, 1e-9 - dev,
         "|slope - zeta0| = " + format_double(dev)}};
    return finish_report("dim-euclid", config, std::move(q), std::move(checks));
}

namespace {

ordered_json quantum_json(const QuantumDimensionResult& result) {
    ordered_json q;
    q["estimate"] = estimate_json(result.estimate);
    q["replicates"] = result.outcomes.size();
    q["failed"] = result.failed;
    q["clamped"] = result.clamped;
    q["failed_fraction"] =
        double(result.failed) / double(result.outcomes.size());
    if (result.mean_slope_root) q["mean_slope_root"] = *result.mean_slope_root;
    return q;
}

void write_quantum_csv(const ExperimentConfig& config,
                       const QuantumDimensionResult& result) {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < result.outcomes.size(); ++i) {
        const auto& out = result.outcomes[i];
        if (out.failed) continue;
        const CascadeRealization real(config.model, out.seed,
                                      config.n_max + config.tail_depth);
        for (std::uint32_t n = config.n_min; n <= config.n_max; ++n) {
            if (n % config.set.block() != 0) continue;
            const double z =
                partition_function(real, config.set, out.root, n, config.tail_depth);
            rows.push_back({std::to_string(n), format_double(out.root),
                            format_double(std::log2(z)), std::to_string(i)});
        }
    }
    const std::string header[] = {"n", "s", "log2_Z", "realization_id"};
    write_csv(config.out_dir, "quantum_levels.csv", header, rows);
}

QuantumDimensionOptions quantum_options(const ExperimentConfig& config) {
    QuantumDimensionOptions opt;
    opt.n_min = config.n_min;
    opt.n_max = config.n_max;
    opt.tail_depth = config.tail_depth;
    opt.root_of_mean = config.root_of_mean;
    opt.threads = resolve_threads(config.threads);
    return opt;
}

} // namespace

ExperimentReport run_dim_quantum(const ExperimentConfig& config) {
    config.validate();
    const QuantumDimensionResult result =
        quantum_dimension(config.model, config.set, config.seeds,
                          quantum_options(config));
    if (!config.out_dir.empty()) write_quantum_csv(config, result);

    const double failed_fraction =
        double(result.failed) / double(result.outcomes.size());
    ordered_json q;
    q["quantum"] = quantum_json(result);
    std::vector<CheckResult> checks{
        {"estimator_errors", failed_fraction <= 0.2, 0.2 - failed_fraction,
         std::to_string(result.failed) + " of " +
             std::to_string(result.outcomes.size()) + " realizations failed"}};
    return finish_report("dim-quantum", config, std::move(q), std::move(checks));
}

ExperimentReport run_kpz_solve(const ExperimentConfig& config) {
    config.validate();
    const double target = config.zeta0 ? *config.zeta0 : config.set.zeta0();
    const KpzSolution sol = solve_zeta(config.model, target, 1e-12);

    ordered_json q;
    q["zeta"] = sol.zeta;
    q["residual"] = sol.residual;
    q["iterations"] = sol.iterations;
    q["zeta0"] = target;
    q["phi_prime_at_zeta"] = kpz_phi_prime(config.model, sol.zeta);
    std::vector<CheckResult> checks{{"solver_residual", sol.residual <= 1e-9,
                                     1e-9 - sol.residual,
                                     "|phi(zeta) - zeta0| = " +
                                         format_double(sol.residual)}};
    return finish_report("kpz-solve", config, std::move(q), std::move(checks));
}

ExperimentReport run_kpz_experiment(const ExperimentConfig& config) {
    config.validate();
    const DimensionEstimate euclid =
        euclid_dimension(config.set, config.n_min, config.n_max);
    const QuantumDimensionResult quantum =
        quantum_dimension(config.model, config.set, config.seeds,
                          quantum_options(config));
    if (!config.out_dir.empty()) write_quantum_csv(config, quantum);

    const double target = config.zeta0 ? *config.zeta0 : config.set.zeta0();
    const KpzSolution predicted = solve_zeta(config.model, target, 1e-12);
    const double gap = std::abs(quantum.estimate.value - predicted.zeta);
    const double z_score =
        quantum.estimate.stderr_ > 0.0 ? gap / quantum.estimate.stderr_ : 0.0;
    const double zeta0_from_measured = config.model.phi(quantum.estimate.value);
    const double failed_fraction =
        double(quantum.failed) / double(quantum.outcomes.size());

    ordered_json q;
    q["euclid"] = estimate_json(euclid);
    q["quantum"] = quantum_json(quantum);
    q["prediction"] = ordered_json{{"zeta0_target", target},
                                   {"zeta", predicted.zeta},
                                   {"residual", predicted.residual},
                                   {"iterations", predicted.iterations}};
    q["comparison"] = ordered_json{{"gap", gap},
                                   {"z_score", z_score},
                                   {"zeta0_from_measured", zeta0_from_measured},
                                   {"zeta0_gap", std::abs(zeta0_from_measured - target)}};

    std::vector<CheckResult> checks{
        {"estimator_errors", failed_fraction <= 0.2, 0.2 - failed_fraction,
         std::to_string(quantum.failed) + " of " +
             std::to_string(quantum.outcomes.size()) + " realizations failed"}};
    return finish_report("kpz-experiment", config, std::move(q), std::move(checks));
}

ExperimentReport diag_mean_ell(const ExperimentConfig& config) {
    config.validate();
    auto [q, checks] = diag_mean_ell_core(config);
    if (!config.out_dir.empty()) {
        // re-run per replicate to list totals; cheap relative to the stats pass
        std::vector<std::vector<std::string>> rows;
        for (const std::uint64_t seed : config.seeds) {
            const CascadeRealization real(config.model, seed, config.n_max);
            rows.push_back(
                {std::to_string(seed), format_double(real.ell(config.n_max))});
        }
        const std::string header[] = {"seed", "ell"};
        write_csv(config.out_dir, "mean_ell.csv", header, rows);
    }
    return finish_report("diag-mean-ell", config, std::move(q), std::move(checks));
}

ExperimentReport diag_atoms(const ExperimentConfig& config) {
    config.validate();
    auto [q, checks] = diag_atoms_core(config);
    return finish_report("diag-atoms", config, std::move(q), std::move(checks));
}

ExperimentReport diag_neg_moments(const ExperimentConfig& config) {
    config.validate();
    auto [q, checks] = diag_neg_moments_core(config);
    return finish_report("diag-neg-moments", config, std::move(q), std::move(checks));
}

ExperimentReport diag_recursion(const ExperimentConfig& config) {
    config.validate();
    auto [q, checks] = diag_recursion_core(config);
    return finish_report("diag-recursion", config, std::move(q), std::move(checks));
}

ExperimentReport run_diagnostics(const ExperimentConfig& config) {
    config.validate();
    ordered_json q;
    std::vector<CheckResult> checks;
    for (auto* core : {&diag_mean_ell_core, &diag_atoms_core, &diag_neg_moments_core,
                       &diag_recursion_core}) {
        auto [part, part_checks] = (*core)(config);
        for (auto& [key, value] : part.items()) q[key] = std::move(value);
        for (auto& c : part_checks) checks.push_back(std::move(c));
    }
    if (!config.out_dir.empty()) {
        // one long-format table covering all four blocks
        std::vector<std::vector<std::string>> rows;
        const auto add = [&rows](const std::string& block, const std::string& level,
                                 const std::string& stat, const ordered_json& v) {
            rows.push_back({block, level, stat, format_double(v.get<double>())});
        };
        const std::string top = std::to_string(q["mean_ell"]["level"].get<std::uint32_t>());
        add("mean_ell", top, "mean", q["mean_ell"]["total"]["mean"]);
        add("mean_ell", top, "stderr", q["mean_ell"]["total"]["stderr"]);
        for (const auto& row : q["atoms"]["table"]) {
            const std::string level = std::to_string(row["level"].get<std::uint32_t>());
            add("atoms", level, "median_max_atom", row["median_max_atom"]);
            add("atoms", level, "mean", row["max_atom"]["mean"]);
            add("atoms", level, "stderr", row["max_atom"]["stderr"]);
        }
        for (const auto& row : q["neg_moments"]["table"]) {
            const std::string level = std::to_string(row["level"].get<std::uint32_t>());
            add("neg_moments", level, "mean", row["neg_moment"]["mean"]);
            add("neg_moments", level, "stderr", row["neg_moment"]["stderr"]);
        }
        add("neg_moments", "", "ratio", q["neg_moments"]["ratio"]);
        for (const auto& row : q["recursion"]["table"])
            add("recursion", std::to_string(row["level"].get<std::uint32_t>()),
                "max_residual", row["max_residual"]);
        const std::string header[] = {"block", "level", "statistic", "value"};
        write_csv(config.out_dir, "diagnostics.csv", header, rows);
    }
    return finish_report("diagnostics", config, std::move(q), std::move(checks));
}

ExperimentReport run_energy(const ExperimentConfig& config) {
    config.validate();
    if (!(config.s > 0.0 && config.s < 1.0))
        throw std::invalid_argument("energy runs want s in (0, 1)");

    const LowerBoundEvidence ev = lower_bound_evidence(
        config.model, config.set, config.s, config.n_min, config.n_max,
        config.seeds, 8.0, resolve_threads(config.threads));
    const EnergyGrowth euclid =
        euclid_energy_growth(config.set, config.s, config.n_min, config.n_max);

    ordered_json q;
    ordered_json table = ordered_json::array();
    for (std::size_t k = 0; k < ev.levels.size(); ++k)
        table.push_back(ordered_json{{"n", ev.levels[k]},
                                     {"mean_energy", ev.mean_energy[k]},
                                     {"stderr", ev.energy_stderr[k]}});
    q["quantum_energy"] = ordered_json{{"s", ev.s},
                                       {"phi_s", ev.phi_s},
                                       {"zeta0", ev.zeta0},
                                       {"hypothesis_ok", ev.hypothesis_ok},
                                       {"neg_moment_finite", ev.neg_moment_finite},
                                       {"table", table},
                                       {"ratio_upper_half", ev.ratio},
                                       {"ratio_threshold", ev.ratio_threshold},
                                       {"bounded", ev.bounded}};
    if (!ev.warning.empty()) q["quantum_energy"]["warning"] = ev.warning;
    q["euclid_energy"] = ordered_json{{"t", config.s},
                                      {"levels", euclid.levels},
                                      {"energies", euclid.energies},
                                      {"max_ratio", euclid.max_ratio},
                                      {"last_ratio", euclid.last_ratio}};

    if (!config.out_dir.empty()) {
        std::vector<std::vector<std::string>> rows;
        for (std::size_t k = 0; k < ev.levels.size(); ++k)
            rows.push_back({std::to_string(ev.levels[k]), format_double(ev.s),
                            format_double(ev.mean_energy[k]),
                            format_double(ev.energy_stderr[k]),
                            std::to_string(ev.replicates)});
        const std::string header[] = {"n", "s", "mean_energy", "stderr", "replicates"};
        write_csv(config.out_dir, "energy.csv", header, rows);
    }

    std::vector<CheckResult> checks;
    if (ev.hypothesis_ok) {
        checks.push_back({"quantum_energy_bounded", ev.bounded,
                          ev.ratio_threshold - ev.ratio,
                          "upper-half max/min ratio is " + format_double(ev.ratio)});
    } else {
        checks.push_back({"hypothesis_gate", true, 0.0,
                          "phi(s) >= zeta0; boundedness not asserted at this s"});
    }
    return finish_report("energy", config, std::move(q), std::move(checks));
}

EnumeratedMoments enumerate_oracle(const WeightModel& model, std::uint32_t depth,
                                   double s) {
    if (depth == 0 || depth > 3)
        throw std::invalid_argument("enumeration depth must be in [1, 3]");

    std::vector<std::pair<double, double>> support; // (value, probability)
    if (const auto* tp = model.as_two_point()) {
        support = {{1.0 - tp->sigma, 0.5}, {1.0 + tp->sigma, 0.5}};
    } else if (const auto* e = model.as_empirical()) {
        for (std::size_t i = 0; i < e->values.size(); ++i)
            support.emplace_back(e->values[i], e->probs[i]);
    } else {
        throw std::invalid_argument("enumeration needs a finite-support model");
    }

    const std::uint32_t nodes = (1u << depth) - 1;
    const std::uint32_t leaves = 1u << depth;
    std::uint64_t outcomes = 1;
    for (std::uint32_t i = 0; i < nodes; ++i) {
        outcomes *= support.size();
        if (outcomes > 2'000'000)
            throw std::invalid_argument("enumeration outcome space too large");
    }

    EnumeratedMoments result;
    result.outcomes = outcomes;
    std::vector<std::size_t> digit(nodes, 0);
    std::vector<double> w(nodes);
    for (std::uint64_t idx = 0; idx < outcomes; ++idx) {
        double prob = 1.0;
        for (std::uint32_t i = 0; i < nodes; ++i) {
            w[i] = support[digit[i]].first;
            prob *= support[digit[i]].second;
        }

        double total = 0.0;
        double cell0 = 0.0;
        for (std::uint32_t leaf = 0; leaf < leaves; ++leaf) {
            double prod = 1.0;
            for (std::uint32_t l = 0; l < depth; ++l)
                prod *= w[(1u << l) - 1 + (leaf >> (depth - l))];
            const double m = std::ldexp(prod, -int(depth));
            total += m;
            if (leaf == 0) cell0 = m;
        }
        result.cell_moment += prob * std::pow(cell0, s);
        result.total_moment += prob * std::pow(total, s);
        result.total_neg_moment += prob * std::pow(total, -s);

        // mixed-radix increment over the node assignments
        for (std::uint32_t i = 0; i < nodes; ++i) {
            if (++digit[i] < support.size()) break;
            digit[i] = 0;
        }
    }
    return result;
}

} // namespace kpz1d
