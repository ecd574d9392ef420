#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kpz1d/cascade.hpp"
#include "kpz1d/fractal_set.hpp"

namespace kpz1d {

/** A measure supported on a fixed family of dyadic cells of one level. */
struct CellMeasure {
    std::uint32_t level = 0;
    std::vector<DyadicIndex> cells;
    std::vector<double> masses; ///< one value per cell, same order
    double total = 0.0;
};

/**
 * Uniform probability measure on the level-n cover of a digit-restriction
 * set: every surviving cell carries 1 / N_n.
 */
CellMeasure frostman_measure(const DigitRestrictionSet& set, std::uint32_t n);

/** Exponential tilt of the weight model at exponent s. */
struct TiltParams {
    double s = 1.0;
    double a = 1.0; ///< normaliser E[W^s]
};

TiltParams make_tilt(const WeightModel& model, double s);

/**
 * Push a base measure through the tilted cascade: each cell mass is
 * multiplied by prod_{j<depth} Z_{I_j} over its ancestor path, with
 * Z_I = W_I^s / a.  `depth` defaults to nu0.level and must not exceed it.
 * The total of the result is the tilt martingale evaluated against nu0,
 * with expectation nu0.total at every depth.
 */
CellMeasure tilted_measure(const CascadeRealization& real, const CellMeasure& nu0,
                           const TiltParams& tilt,
                           std::uint32_t depth = UINT32_MAX);

/// Largest support size the O(N^2) energy sums accept.
inline constexpr std::size_t kMaxEnergyCells = 4096;

/**
 * Truncated Euclidean t-energy of a cell measure:
 * diagonal cells contribute mass^2 / |I|^t (an upper-bias stand-in for the
 * within-cell integral), distinct pairs contribute
 * mass_i mass_j / dist(mid_i, mid_j)^t.  Throws for supports larger than
 * kMaxEnergyCells.
 */
double euclid_energy(const CellMeasure& nu, double t);

/**
 * Truncated quantum s-energy of a cell measure against the cascade metric:
 * diagonal cells contribute mass^2 / mu(I)^s, distinct pairs contribute
 * mass_i mass_j / rho_trunc(mid_i, mid_j)^s with the cascade's truncated
 * distance at the measure's level.  Throws for supports larger than
 * kMaxEnergyCells.
 */
double quantum_energy(const CascadeRealization& real, const CellMeasure& nu,
                      double s);

/**
 * Growth record for one energy functional over a range of cover levels,
 * used to probe whether the energy stays bounded (finite-energy regime,
 * dimension >= exponent) or blows up geometrically.
 */
struct EnergyGrowth {
    std::vector<std::uint32_t> levels;
    std::vector<double> energies;
    double max_ratio = 0.0;  ///< max successive ratio energies[i+1]/energies[i]
    double last_ratio = 0.0;
};

EnergyGrowth euclid_energy_growth(const DigitRestrictionSet& set, double t,
                                  std::uint32_t n_min, std::uint32_t n_max);

EnergyGrowth quantum_energy_growth(const CascadeRealization& real,
                                   const DigitRestrictionSet& set, double s,
                                   std::uint32_t n_min, std::uint32_t n_max);

/**
 * Replicate-averaged quantum energies of the tilted Frostman measure over a
 * level range, with the hypothesis checks of the lower-bound argument:
 * the exponent must satisfy phi(s) < zeta0 of the set, and E[W^{-s}] should
 * be finite.  Violations populate `warning` instead of failing.
 *
 * `bounded` reports whether the max/min ratio of the mean energies over the
 * upper half of the level range stays below `ratio_threshold`.
 */
struct LowerBoundEvidence {
    double s = 0.0;
    double phi_s = 0.0;
    double zeta0 = 0.0;
    bool hypothesis_ok = false;
    bool neg_moment_finite = false;
    std::vector<std::uint32_t> levels;
    std::vector<double> mean_energy;
    std::vector<double> energy_stderr;
    std::size_t replicates = 0;
    double ratio = 0.0;
    double ratio_threshold = 8.0;
    bool bounded = false;
    std::string warning;
};

LowerBoundEvidence lower_bound_evidence(const WeightModel& model,
                                        const DigitRestrictionSet& set, double s,
                                        std::uint32_t n_min, std::uint32_t n_max,
                                        std::span<const std::uint64_t> seeds,
                                        double ratio_threshold = 8.0,
                                        unsigned threads = 1);

} // namespace kpz1d
