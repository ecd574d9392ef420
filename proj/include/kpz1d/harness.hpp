#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kpz1d/dimension.hpp"
#include "kpz1d/fractal_set.hpp"
#include "kpz1d/weights.hpp"

namespace kpz1d {

using ordered_json = nlohmann::ordered_json;

/** Everything an experiment run depends on. Reports are pure functions of it. */
struct ExperimentConfig {
    WeightModel model = WeightModel::two_point(0.0);
    DigitRestrictionSet set = DigitRestrictionSet::full();
    std::vector<std::uint64_t> seeds = {1};
    std::uint32_t n_min = 8;
    std::uint32_t n_max = 16;
    double s = 0.5;
    std::optional<double> zeta0; ///< target for the solver; defaults to set.zeta0()
    std::uint32_t tail_depth = 0;
    bool root_of_mean = false;
    unsigned threads = 1;     ///< execution detail; never enters reports
    std::string out_dir;      ///< empty: skip CSV detail files

    /// Throws std::invalid_argument on inconsistent settings (empty or
    /// duplicate seeds, n_min >= n_max, depth beyond the generation cap).
    void validate() const;
};

/**
 * Hash of the report-relevant configuration (model, set, seeds, levels,
 * exponents).  Thread count and output paths are excluded so the hash — and
 * any report embedding it — is identical however the run is executed.
 */
std::string config_hash(const ExperimentConfig& config);

/// Provenance block embedded in every report: version, config hash, config echo.
ordered_json provenance(const ExperimentConfig& config);

struct CheckResult {
    std::string name;
    bool pass = false;
    double margin = 0.0; ///< signed slack in the check's own units; >= 0 passes
    std::string detail;
};

struct ExperimentReport {
    ordered_json summary; ///< stable key order; serialize with dump()
    std::vector<CheckResult> checks;

    bool passed() const;
};

/// Model hypothesis checks and a moment table; check fails for invalid models.
ExperimentReport run_validate_weights(const ExperimentConfig& config);

/// Per-replicate totals, max atoms and recursion residuals at n_max;
/// dumps (level, index, mass) rows for the first seed when out_dir is set.
ExperimentReport run_simulate(const ExperimentConfig& config);

ExperimentReport run_dim_euclid(const ExperimentConfig& config);

/// Quantum-dimension estimate; per-level log2 Z detail CSV when out_dir set.
ExperimentReport run_dim_quantum(const ExperimentConfig& config);

/// Inverse dimension map at config.zeta0 (or the set's exact value).
ExperimentReport run_kpz_solve(const ExperimentConfig& config);

/**
 * The headline experiment: Euclidean estimate, quantum estimate, predicted
 * quantum exponent from the dimension relation, gap and z-score.  The check
 * fails when more than 20% of realizations produce estimator errors.
 */
ExperimentReport run_kpz_experiment(const ExperimentConfig& config);

/// Replicate mean of the level-n total mass; pass iff within 4 stderr of 1.
ExperimentReport diag_mean_ell(const ExperimentConfig& config);

/// Median max cell mass at levels 4/8/12/16; pass iff strictly decreasing.
ExperimentReport diag_atoms(const ExperimentConfig& config);

/// Mean of total^{-r} (r = config.s) at levels 4/8/12; pass iff max/min <= 4.
ExperimentReport diag_neg_moments(const ExperimentConfig& config);

/// Max relative recursion residual at n in {1, 4, 8}; pass iff <= 1e-11.
ExperimentReport diag_recursion(const ExperimentConfig& config);

/// All four appendix diagnostics in one report.
ExperimentReport run_diagnostics(const ExperimentConfig& config);

/// Energy growth tables in both metrics plus the lower-bound boundedness flag.
ExperimentReport run_energy(const ExperimentConfig& config);

/**
 * Exact finite-depth moments by enumerating every weight assignment of the
 * depth-level tree (outcome count |support|^(2^depth - 1)).  Ground truth for
 * the sampled cascade.  Requires a finite-support model; depth <= 3.
 */
struct EnumeratedMoments {
    double cell_moment = 0.0;    ///< E[mu_depth(I)^s], identical for every I
    double total_moment = 0.0;   ///< E[(level-depth total)^s]
    double total_neg_moment = 0.0; ///< E[(level-depth total)^{-s}]
    std::uint64_t outcomes = 0;
};

EnumeratedMoments enumerate_oracle(const WeightModel& model, std::uint32_t depth,
                                   double s);

/**
 * Entry point behind the `kpz1d` binary.  Exit 0 on success, 1 when a
 * report's checks fail, 2 on usage or configuration errors.
 */
int cli_main(int argc, const char* const* argv);

} // namespace kpz1d
