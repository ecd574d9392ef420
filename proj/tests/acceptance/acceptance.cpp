// Release gate: every numbered criterion below must print PASS within its
// time budget.  Run all with no arguments, or a single one with --only N.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "kpz1d/cascade.hpp"
#include "kpz1d/config.hpp"
#include "kpz1d/dimension.hpp"
#include "kpz1d/fractal_set.hpp"
#include "kpz1d/frostman.hpp"
#include "kpz1d/harness.hpp"
#include "kpz1d/kpz.hpp"
#include "kpz1d/stats.hpp"
#include "kpz1d/weights.hpp"

namespace {

using namespace kpz1d;

constexpr double kLn2 = 0.6931471805599453;

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool condition, const std::string& message) {
    if (!condition) throw Failure(message);
}

std::string fmt(double x) {
    std::ostringstream out;
    out.precision(6);
    out << x;
    return out.str();
}

unsigned worker_threads() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

std::vector<WeightModel> acceptance_models() {
    return {WeightModel::log_normal(0.1), WeightModel::log_normal(kLn2),
            WeightModel::log_normal(1.2), WeightModel::two_point(0.2),
            WeightModel::two_point(0.6),  WeightModel::two_point(0.9)};
}

// 1. Structure function: phi(0) = 0 and phi(1) = 1 to 1e-12, strictly
//    increasing across a 101-point grid, for every acceptance model.
void criterion_endpoints() {
    for (const WeightModel& model : acceptance_models()) {
        const std::string name = model.describe();
        require(std::abs(kpz_phi(model, 0.0)) <= 1e-12, name + ": phi(0) != 0");
        require(std::abs(kpz_phi(model, 1.0) - 1.0) <= 1e-12,
                name + ": phi(1) != 1");
        double prev = kpz_phi(model, 0.0);
        for (int i = 1; i <= 100; ++i) {
            const double cur = kpz_phi(model, i / 100.0);
            require(cur > prev, name + ": phi not strictly increasing at s=" +
                                    fmt(i / 100.0));
            prev = cur;
        }
    }
}

// 2. Closed forms for both families agree with the generic moment-based phi
//    to 1e-12 on a 21-point grid; log-normal moments cross-check against
//    numerical quadrature to 1e-10.
void criterion_closed_forms() {
    for (const double sigma2 : {0.1, kLn2, 1.2}) {
        const WeightModel model = WeightModel::log_normal(sigma2);
        for (int i = 0; i <= 20; ++i) {
            const double z = i / 20.0;
            const double gap =
                std::abs(gaussian_zeta0(sigma2, z) - kpz_phi(model, z));
            require(gap <= 1e-12, "gaussian closed form off by " + fmt(gap) +
                                      " at zeta=" + fmt(z));
            const double quad_gap = std::abs(
                lognormal_moment_quadrature(sigma2, z) - model.moment(z));
            require(quad_gap <= 1e-10, "quadrature gap " + fmt(quad_gap) +
                                           " at s=" + fmt(z) +
                                           ", sigma2=" + fmt(sigma2));
        }
    }
    for (const double sigma : {0.2, 0.6, 0.9}) {
        const WeightModel model = WeightModel::two_point(sigma);
        for (int i = 0; i <= 20; ++i) {
            const double z = i / 20.0;
            const double gap =
                std::abs(twopoint_zeta0(sigma, z) - kpz_phi(model, z));
            require(gap <= 1e-12, "two-point closed form off by " + fmt(gap) +
                                      " at zeta=" + fmt(z));
        }
    }
}

// 3. Solver roundtrip: |solve_zeta(phi(z)) - z| <= 1e-9 across the grid.
void criterion_roundtrip() {
    for (const WeightModel& model : acceptance_models()) {
        for (int i = 0; i <= 20; ++i) {
            const double z = i / 20.0;
            const double back =
                solve_zeta(model, predict_zeta0(model, z).zeta0).zeta;
            require(std::abs(back - z) <= 1e-9,
                    model.describe() + ": roundtrip error " +
                        fmt(std::abs(back - z)) + " at zeta=" + fmt(z));
        }
    }
}

// 4. Exhaustive depth-3 enumeration of the two-point cascade (128 outcomes)
//    matches the closed-form cell moments to 1e-12 and a 1e5-replicate
//    Monte Carlo partition moment to 4 standard errors.
void criterion_exact_oracle() {
    const WeightModel model = WeightModel::two_point(0.5);
    const DigitRestrictionSet full = DigitRestrictionSet::full();
    const auto seeds = expand_seeds(404, 100000);
    for (const double s : {0.5, 1.0, 2.0}) {
        const EnumeratedMoments oracle = enumerate_oracle(model, 3, s);
        require(oracle.outcomes == 128,
                "expected 128 outcomes, saw " + std::to_string(oracle.outcomes));
        const double closed = std::pow(2.0, -3.0 * s) *
                              std::pow(model.moment(s), 3.0);
        require(std::abs(oracle.cell_moment - closed) <= 1e-12,
                "enumerated cell moment off at s=" + fmt(s));
        const PartitionMomentCheck mc =
            partition_moment_check(model, full, s, 3, seeds);
        require(std::abs(mc.expected - 8.0 * oracle.cell_moment) <= 1e-12,
                "streamed expectation disagrees with enumeration at s=" + fmt(s));
        const double gap = std::abs(mc.sample_mean - mc.expected);
        require(gap <= 4.0 * mc.sample_stderr,
                "MC partition moment off by " + fmt(gap) + " (4se=" +
                    fmt(4.0 * mc.sample_stderr) + ") at s=" + fmt(s));
    }
}

// 5. Mean-one total mass: LogNormal(ln 2), level 10, 2e4 replicates.
void criterion_mean_ell() {
    ExperimentConfig config;
    config.model = WeightModel::log_normal(kLn2);
    config.seeds = expand_seeds(505, 20000);
    config.n_min = 4;
    config.n_max = 10;
    config.threads = worker_threads();
    const ExperimentReport report = diag_mean_ell(config);
    const auto& block = report.summary["mean_ell"]["total"];
    require(report.passed(),
            "mean total " + fmt(block["mean"].get<double>()) + " +/- " +
                fmt(block["stderr"].get<double>()) + " not within 4 stderr of 1");
}

// 6. Distance-moment bound E[rho(x,y)^s] <= 8 |x-y|^phi(s): the upper 95%
//    confidence end stays below the bound for s in {0.3, 0.7} and pairs
//    (0, 2^-k), k in {2, 4, 6}, at truncation depth 14.
void criterion_rho_bound() {
    const WeightModel model = WeightModel::log_normal(kLn2);
    const std::vector<std::pair<double, double>> pairs{
        {0.0, 0.25}, {0.0, 0.0625}, {0.0, 0.015625}};
    const auto seeds = expand_seeds(606, 10000);
    for (const double s : {0.3, 0.7}) {
        const RhoMomentReport report =
            rho_moment_check(model, s, pairs, 14, seeds, worker_threads());
        for (const RhoMomentEntry& entry : report.entries) {
            require(!entry.violated,
                    "bound violated at s=" + fmt(s) + ", |x-y|=" +
                        fmt(entry.y - entry.x) + ": upper CI " +
                        fmt(entry.upper_ci) + " > " + fmt(entry.bound));
        }
    }
}

// 7. End-to-end dimension relation.  LogNormal(ln 2) on the {00, 11} digit
//    set (Euclidean dimension exactly 1/2): measured quantum dimension within
//    0.05 of the predicted root (3 - sqrt 5)/2.  Full set: within 0.02 of 1.
//    Degenerate sigma = 0: exact equality.
void criterion_kpz_validation() {
    const WeightModel model = WeightModel::log_normal(kLn2);
    const DigitRestrictionSet half = parse_digit_set("set=digits b=2 allow=00,11");
    const auto seeds = expand_seeds(707, 50);
    QuantumDimensionOptions opt;
    opt.n_min = 8;
    opt.n_max = 16;
    opt.tail_depth = 2; // damp the level-truncation bias of the cell masses
    opt.threads = worker_threads();

    const double predicted = solve_zeta(model, 0.5).zeta;
    require(std::abs(predicted - (3.0 - std::sqrt(5.0)) / 2.0) <= 1e-9,
            "analytic prediction drifted from (3 - sqrt 5)/2");
    const QuantumDimensionResult measured =
        quantum_dimension(model, half, seeds, opt);
    require(measured.failed == 0, "estimator failed on " +
                                      std::to_string(measured.failed) +
                                      " replicates");
    const double gap = std::abs(measured.estimate.value - predicted);
    require(gap <= 0.05, "half set: measured " + fmt(measured.estimate.value) +
                             " vs predicted " + fmt(predicted) + " (gap " +
                             fmt(gap) + " > 0.05)");

    // The full set sits at the fixed point phi(1) = 1, where per-replicate
    // roots are clipped from above; solve on the replicate-averaged partition
    // function with a deeper tail instead.
    QuantumDimensionOptions full_opt = opt;
    full_opt.tail_depth = 4;
    full_opt.root_of_mean = true;
    const QuantumDimensionResult full_measured = quantum_dimension(
        model, DigitRestrictionSet::full(), seeds, full_opt);
    const double full_value = full_measured.mean_slope_root.value();
    const double full_gap = std::abs(full_value - 1.0);
    require(full_gap <= 0.02, "full set: measured " + fmt(full_value) +
                                  " (gap " + fmt(full_gap) + " > 0.02)");

    const WeightModel flat = WeightModel::two_point(0.0);
    const QuantumDimensionResult exact =
        quantum_dimension(flat, half, seeds, opt);
    require(exact.estimate.value == solve_zeta(flat, 0.5).zeta &&
                exact.estimate.stderr_ == 0.0,
            "degenerate model should reproduce the Euclidean dimension exactly");
}

// 8. Appendix diagnostics: atom medians strictly decreasing over levels
//    4/8/12/16 (200 replicates), negative moments bounded (ratio <= 4 at
//    r = 0.5), recursion residual <= 1e-11.
void criterion_diagnostics() {
    ExperimentConfig config;
    config.model = WeightModel::log_normal(kLn2);
    config.seeds = expand_seeds(808, 200);
    config.n_min = 8;
    config.n_max = 16;
    config.s = 0.5;
    config.threads = worker_threads();

    const ExperimentReport atoms = diag_atoms(config);
    require(atoms.passed(), "atom medians not strictly decreasing");
    const ExperimentReport neg = diag_neg_moments(config);
    require(neg.passed(),
            "negative-moment ratio " +
                fmt(neg.summary["neg_moments"]["ratio"].get<double>()) + " > 4");
    const ExperimentReport rec = diag_recursion(config);
    require(rec.passed(),
            "recursion residual " +
                fmt(rec.summary["recursion"]["max_residual"].get<double>()) +
                " > 1e-11");
}

// 9. Frostman machinery: the tilted-measure total is a mean-one martingale
//    (1e4 replicates, 4 stderr), and the lower-bound energies stay bounded
//    for s = 0.3 (phi(s) = 0.405 < 1/2) on the {00, 11} set at levels <= 10.
void criterion_frostman() {
    const WeightModel model = WeightModel::log_normal(kLn2);
    const DigitRestrictionSet half = parse_digit_set("b=2 allow=00,11");
    const CellMeasure nu0 = frostman_measure(half, 8);
    const TiltParams tilt = make_tilt(model, 0.3);

    const auto seeds = expand_seeds(909, 10000);
    std::vector<double> totals(seeds.size());
    parallel_for(seeds.size(), worker_threads(), [&](std::size_t i) {
        const CascadeRealization real(model, seeds[i]);
        totals[i] = tilted_measure(real, nu0, tilt, 8).total;
    });
    const double m = mean(totals);
    const double se = standard_error(totals);
    require(std::abs(m - 1.0) <= 4.0 * se,
            "tilted total " + fmt(m) + " +/- " + fmt(se) +
                " not within 4 stderr of 1");

    const auto energy_seeds = expand_seeds(910, 200);
    const LowerBoundEvidence evidence = lower_bound_evidence(
        model, half, 0.3, 4, 10, energy_seeds, 8.0, worker_threads());
    require(std::abs(evidence.phi_s - 0.405) <= 1e-12,
            "phi(0.3) drifted from 0.405");
    require(evidence.hypothesis_ok, "hypothesis phi(s) < zeta0 not detected");
    require(evidence.bounded, "energy ratio " + fmt(evidence.ratio) +
                                  " exceeded threshold " +
                                  fmt(evidence.ratio_threshold));
}

// 10. Determinism: re-running a report with a different thread count yields
//     byte-identical JSON.
void criterion_determinism() {
    ExperimentConfig config;
    config.model = WeightModel::log_normal(kLn2);
    config.set = parse_digit_set("b=2 allow=00,11");
    config.seeds = expand_seeds(1010, 12);
    config.n_min = 8;
    config.n_max = 12;
    config.s = 0.3;

    const auto dump_with = [&config](unsigned threads,
                                     ExperimentReport (*run)(
                                         const ExperimentConfig&)) {
        ExperimentConfig c = config;
        c.threads = threads;
        return run(c).summary.dump();
    };
    for (auto* run : {&run_kpz_experiment, &run_diagnostics, &run_energy,
                      &run_simulate}) {
        const std::string serial = dump_with(1, run);
        const std::string threaded = dump_with(worker_threads(), run);
        require(serial == threaded,
                "summary bytes differ between 1 and " +
                    std::to_string(worker_threads()) + " threads for " +
                    ordered_json::parse(serial)["command"].get<std::string>());
    }
}

struct Criterion {
    int id;
    const char* title;
    double budget_seconds;
    void (*run)();
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> table{
        {1, "structure-function endpoints and monotonicity", 1.0,
         criterion_endpoints},
        {2, "closed forms against the generic moment path", 1.0,
         criterion_closed_forms},
        {3, "dimension-relation solver roundtrip", 1.0, criterion_roundtrip},
        {4, "depth-3 enumeration vs streamed and sampled moments", 10.0,
         criterion_exact_oracle},
        {5, "mean-one total mass at level 10", 60.0, criterion_mean_ell},
        {6, "distance-moment upper bound", 120.0, criterion_rho_bound},
        {7, "end-to-end dimension relation", 600.0, criterion_kpz_validation},
        {8, "appendix diagnostics", 300.0, criterion_diagnostics},
        {9, "tilt martingale and energy boundedness", 300.0, criterion_frostman},
        {10, "thread-count determinism", 600.0, criterion_determinism},
    };
    return table;
}

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--only" && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else if (arg == "--help" || arg == "-h") {
            std::printf("usage: acceptance_tests [--only N]\n");
            return 0;
        } else {
            std::fprintf(stderr, "unknown argument: %s\n", arg.c_str());
            return 2;
        }
    }

    int failures = 0;
    int ran = 0;
    for (const Criterion& c : criteria()) {
        if (only != 0 && c.id != only) continue;
        ++ran;
        const auto start = std::chrono::steady_clock::now();
        std::string error;
        try {
            c.run();
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start)
                .count();
        if (error.empty() && elapsed > c.budget_seconds) {
            std::ostringstream over;
            over << "exceeded " << c.budget_seconds << "s budget";
            error = over.str();
        }
        std::printf("%s criterion %d (%.2fs): %s%s%s\n",
                    error.empty() ? "PASS" : "FAIL", c.id, elapsed, c.title,
                    error.empty() ? "" : " -- ", error.c_str());
        std::fflush(stdout);
        if (!error.empty()) ++failures;
    }
    if (ran == 0) {
        std::fprintf(stderr, "no criterion matched --only %d\n", only);
        return 2;
    }
    std::printf("%d/%d criteria passed\n", ran - failures, ran);
    return failures == 0 ? 0 : 1;
}
