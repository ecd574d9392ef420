#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kpz1d/cascade.hpp"
#include "kpz1d/fractal_set.hpp"

namespace kpz1d {

/** One dimension estimate with the fit window it came from. */
struct DimensionEstimate {
    double value = 0.0;
    double stderr_ = 0.0; ///< standard error across realizations (0 if exact)
    std::uint32_t n_min = 0;
    std::uint32_t n_max = 0;
    double fit_r2 = 1.0;
    std::string method;
};

/**
 * Euclidean (box-counting) dimension of a digit-restriction set:
 * least-squares slope of log2 N_n against n over levels [n_min, n_max].
 *
 * For these sets the count law is exact, so the slope converges to
 * log2|A| / b up to the periodic remainder term.
 */
DimensionEstimate euclid_dimension(const DigitRestrictionSet& set,
                                   std::uint32_t n_min, std::uint32_t n_max);

/**
 * Cascade partition function Z_n(s) = sum over surviving level-n cells of
 * mu(I)^s.  With tail_depth > 0 each cell mass is extended by its subtree
 * total mass down `tail_depth` further levels before raising to the power s.
 */
double partition_function(const CascadeRealization& real,
                          const DigitRestrictionSet& set, double s,
                          std::uint32_t n, std::uint32_t tail_depth = 0);

struct QuantumDimensionOptions {
    std::uint32_t n_min = 8;
    std::uint32_t n_max = 16;
    double tol = 1e-3;           ///< bisection width on s
    std::uint32_t tail_depth = 0;
    bool root_of_mean = false;   ///< solve on the replicate-averaged slope instead
    unsigned threads = 1;
};

/**
 * Per-realization outcome of the critical-exponent search.  `failed` marks
 * realizations whose slope is already negative at s = 0 (no admissible
 * root); `clamped` marks realizations whose slope is still positive at
 * s = 1, where the root is truncated to 1.
 */
struct QuantumRealizationOutcome {
    std::uint64_t seed = 0;
    double root = 0.0; ///< meaningful when !failed
    double fit_r2 = 1.0;
    bool clamped = false;
    bool failed = false;
    std::string error; ///< failure reason when failed
};

struct QuantumDimensionResult {
    DimensionEstimate estimate;
    std::vector<QuantumRealizationOutcome> outcomes; ///< seed order
    std::size_t failed = 0;
    std::size_t clamped = 0;
    std::optional<double> mean_slope_root; ///< set when root_of_mean requested
};

/**
 * Critical exponent of a partition-function table: the value of s where the
 * least-squares slope of log2 Z_n(s) over the level window changes sign,
 * found by bisection on [0, 1].
 *
 * levels[i] pairs with log2_z(s)[i]; `log2_z` maps s to the per-level
 * log2 Z_n(s) values.  Throws std::runtime_error when the slope is negative
 * already at s = 0.  Sets *clamped when the slope at s = 1 is nonnegative
 * and the root is truncated to 1.
 */
double critical_exponent(
    std::span<const double> levels,
    const std::function<std::vector<double>(double)>& log2_z, double tol,
    bool* clamped = nullptr);

/**
 * Quantum dimension of a digit-restriction set under the cascade metric:
 * the measure exponent s* where the mass scaling of the cover changes sign,
 * estimated independently on each replicate and averaged.
 */
QuantumDimensionResult quantum_dimension(
    const WeightModel& model, const DigitRestrictionSet& set,
    std::span<const std::uint64_t> seeds, const QuantumDimensionOptions& opt);

/**
 * Ratio E[Z_n(s)] / (2^{-n} ell(n-th level count law)) style moment check:
 * sample average of Z_n(s) over replicates together with its exact expectation
 * N_n 2^{-ns} m(s)^n for independent cells.
 */
struct PartitionMomentCheck {
    double sample_mean = 0.0;
    double sample_stderr = 0.0;
    double expected = 0.0;
};

PartitionMomentCheck partition_moment_check(
    const WeightModel& model, const DigitRestrictionSet& set, double s,
    std::uint32_t n, std::span<const std::uint64_t> seeds);

/**
 * Monte Carlo check of the distance-moment bound
 * E[rho(x, y)^s] <= 8 |x - y|^{phi(s)} for a list of dyadic point pairs.
 * Each replicate evaluates rho at truncation depth `depth`; the comparison
 * uses the upper end of the 95% confidence interval.
 */
struct RhoMomentEntry {
    double x = 0.0;
    double y = 0.0;
    double mc_mean = 0.0;
    double mc_stderr = 0.0;
    double upper_ci = 0.0; ///< mc_mean + 1.96 * mc_stderr
    double bound = 0.0;    ///< 8 |x - y|^{phi(s)}
    bool violated = false;
};

struct RhoMomentReport {
    double s = 0.0;
    std::uint32_t depth = 0;
    std::size_t replicates = 0;
    std::vector<RhoMomentEntry> entries;
    bool pass = true; ///< no entry violated
};

RhoMomentReport rho_moment_check(
    const WeightModel& model, double s,
    std::span<const std::pair<double, double>> pairs, std::uint32_t depth,
    std::span<const std::uint64_t> seeds, unsigned threads = 1);

} // namespace kpz1d
