#include "kpz1d/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kpz1d/csv.hpp"
#include "kpz1d/stats.hpp"

namespace kpz1d {

namespace {

// Slopes this close to zero are treated as an exact root; genuine Monte
// Carlo slopes near the critical point sit orders of magnitude above it,
// while degenerate (sigma = 0) cascades land at zero up to rounding.
constexpr double kExactSlope = 1e-12;

std::vector<double> aligned_levels(const DigitRestrictionSet& set,
                                   std::uint32_t n_min, std::uint32_t n_max) {
    std::vector<double> levels;
    for (std::uint32_t n = n_min; n <= n_max; ++n)
        if (n % set.block() == 0) levels.push_back(double(n));
    return levels;
}

std::vector<double> cover_masses(const CascadeRealization& real,
                                 const DigitRestrictionSet& set, std::uint32_t n,
                                 std::uint32_t tail_depth) {
    std::vector<double> masses;
    masses.reserve(set.cover_count(n));
    set.cover(n, [&](DyadicIndex cell) {
        double m = real.mass(cell);
        if (tail_depth > 0) m *= real.tail_factor(cell, tail_depth);
        masses.push_back(m);
    });
    return masses;
}

double log2_power_sum(const std::vector<double>& masses, double s,
                      std::vector<double>& scratch) {
    scratch.resize(masses.size());
    for (std::size_t i = 0; i < masses.size(); ++i)
        scratch[i] = std::pow(masses[i], s);
    return std::log2(pairwise_sum(scratch));
}

double slope_of(std::span<const double> levels, const std::vector<double>& log2z) {
    return LinearFit::fit(levels, log2z).slope;
}

} // namespace

DimensionEstimate euclid_dimension(const DigitRestrictionSet& set,
                                   std::uint32_t n_min, std::uint32_t n_max) {
    if (n_min >= n_max || n_max > 62)
        throw std::invalid_argument("euclid_dimension wants 0 <= n_min < n_max <= 62");
    const std::vector<double> levels = aligned_levels(set, n_min, n_max);
    if (levels.size() < 2)
        throw std::invalid_argument("fewer than 2 block-aligned levels in the window");

    std::vector<double> counts(levels.size());
    for (std::size_t i = 0; i < levels.size(); ++i)
        counts[i] = std::log2(double(set.cover_count(std::uint32_t(levels[i]))));
    const LinearFit fit = LinearFit::fit(levels, counts);

    DimensionEstimate est;
    est.value = fit.slope;
    est.stderr_ = fit.slope_stderr;
    est.n_min = std::uint32_t(levels.front());
    est.n_max = std::uint32_t(levels.back());
    est.fit_r2 = fit.r2;
    est.method = "euclid_boxcount";
    return est;
}

double partition_function(const CascadeRealization& real,
                          const DigitRestrictionSet& set, double s,
                          std::uint32_t n, std::uint32_t tail_depth) {
    if (!(s >= 0.0)) throw std::invalid_argument("partition_function wants s >= 0");
    const std::vector<double> masses = cover_masses(real, set, n, tail_depth);
    std::vector<double> scratch;
    scratch.resize(masses.size());
    for (std::size_t i = 0; i < masses.size(); ++i)
        scratch[i] = std::pow(masses[i], s);
    return pairwise_sum(scratch);
}

double critical_exponent(std::span<const double> levels,
                         const std::function<std::vector<double>(double)>& log2_z,
                         double tol, bool* clamped) {
    if (levels.size() < 2)
        throw std::invalid_argument("critical_exponent needs at least two levels");
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (clamped) *clamped = false;

    const double at0 = slope_of(levels, log2_z(0.0));
    if (std::abs(at0) <= kExactSlope) return 0.0;
    if (at0 < 0.0) {
        const double at1 = slope_of(levels, log2_z(1.0));
        throw std::runtime_error("partition slope has no sign change on [0,1]: slope(0)=" +
                                 format_double(at0) + ", slope(1)=" + format_double(at1));
    }

    const double at1 = slope_of(levels, log2_z(1.0));
    if (std::abs(at1) <= kExactSlope) return 1.0;
    if (at1 > 0.0) {
        if (clamped) *clamped = true;
        return 1.0;
    }

    double lo = 0.0, hi = 1.0;
    for (int iter = 0; iter < 60 && hi - lo > tol; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double at_mid = slope_of(levels, log2_z(mid));
        if (std::abs(at_mid) <= kExactSlope) return mid;
        (at_mid > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

QuantumDimensionResult quantum_dimension(
    const WeightModel& model, const DigitRestrictionSet& set,
    std::span<const std::uint64_t> seeds, const QuantumDimensionOptions& opt) {
    if (seeds.empty())
        throw std::invalid_argument("quantum_dimension needs at least one seed");
    const std::vector<double> levels = aligned_levels(set, opt.n_min, opt.n_max);
    if (levels.size() < 2)
        throw std::invalid_argument("fewer than 2 block-aligned levels in the window");

    QuantumDimensionResult result;
    result.outcomes.resize(seeds.size());

    parallel_for(seeds.size(), opt.threads, [&](std::size_t i) {
        QuantumRealizationOutcome out;
        out.seed = seeds[i];
        try {
            const CascadeRealization real(model, seeds[i], opt.n_max + opt.tail_depth);
            std::vector<std::vector<double>> masses(levels.size());
            for (std::size_t k = 0; k < levels.size(); ++k)
                masses[k] = cover_masses(real, set, std::uint32_t(levels[k]),
                                         opt.tail_depth);
            std::vector<double> scratch;
            const auto log2z = [&](double s) {
                std::vector<double> vals(levels.size());
                for (std::size_t k = 0; k < levels.size(); ++k)
                    vals[k] = log2_power_sum(masses[k], s, scratch);
                return vals;
            };
            bool clamped = false;
            out.root = critical_exponent(levels, log2z, opt.tol, &clamped);
            out.clamped = clamped;
            out.fit_r2 = LinearFit::fit(levels, log2z(out.root)).r2;
        } catch (const std::exception& e) {
            out.failed = true;
            out.error = e.what();
        }
        result.outcomes[i] = std::move(out);
    });

    std::vector<double> roots, r2s;
    for (const auto& out : result.outcomes) {
        if (out.failed) {
            ++result.failed;
            continue;
        }
        if (out.clamped) ++result.clamped;
        roots.push_back(out.root);
        r2s.push_back(out.fit_r2);
    }
    if (roots.empty())
        throw std::runtime_error("every realization failed the critical-exponent search");

    result.estimate.value = mean(roots);
    result.estimate.stderr_ = standard_error(roots);
    result.estimate.n_min = std::uint32_t(levels.front());
    result.estimate.n_max = std::uint32_t(levels.back());
    result.estimate.fit_r2 = mean(r2s);
    result.estimate.method = "quantum_partition";

    if (opt.root_of_mean) {
        // Root of the replicate-averaged curve, for comparison with the
        // mean-of-roots default. Masses are regenerated per evaluation; the
        // generator is pure, so this costs time but no memory.
        const auto combined = [&](double s) {
            std::vector<double> vals(levels.size());
            std::vector<double> per_seed(seeds.size());
            std::vector<double> scratch;
            for (std::size_t k = 0; k < levels.size(); ++k) {
                for (std::size_t i = 0; i < seeds.size(); ++i) {
                    const CascadeRealization real(model, seeds[i],
                                                  opt.n_max + opt.tail_depth);
                    const auto masses = cover_masses(
                        real, set, std::uint32_t(levels[k]), opt.tail_depth);
                    per_seed[i] = log2_power_sum(masses, s, scratch);
                }
                vals[k] = mean(per_seed);
            }
            return vals;
        };
        bool clamped = false;
        result.mean_slope_root = critical_exponent(levels, combined, opt.tol, &clamped);
    }
    return result;
}

PartitionMomentCheck partition_moment_check(
    const WeightModel& model, const DigitRestrictionSet& set, double s,
    std::uint32_t n, std::span<const std::uint64_t> seeds) {
    if (seeds.empty()) throw std::invalid_argument("need at least one seed");
    std::vector<double> values(seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        const CascadeRealization real(model, seeds[i], std::max(n, 1u));
        values[i] = partition_function(real, set, s, n);
    }
    PartitionMomentCheck check;
    check.sample_mean = mean(values);
    check.sample_stderr = standard_error(values);
    check.expected = double(set.cover_count(n)) * std::exp2(-double(n) * s) *
                     std::pow(model.moment(s), double(n));
    return check;
}

RhoMomentReport rho_moment_check(
    const WeightModel& model, double s,
    std::span<const std::pair<double, double>> pairs, std::uint32_t depth,
    std::span<const std::uint64_t> seeds, unsigned threads) {
    if (!(s > 0.0 && s <= 1.0))
        throw std::invalid_argument("rho_moment_check wants s in (0, 1]");
    if (seeds.empty()) throw std::invalid_argument("need at least one seed");

    std::vector<std::vector<double>> samples(pairs.size());
    for (auto& row : samples) row.resize(seeds.size());
    parallel_for(seeds.size(), threads, [&](std::size_t i) {
        const CascadeRealization real(model, seeds[i], depth);
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            const double d = real.rho(depth, pairs[p].first, pairs[p].second);
            samples[p][i] = std::pow(d, s);
        }
    });

    RhoMomentReport report;
    report.s = s;
    report.depth = depth;
    report.replicates = seeds.size();
    const double phi_s = model.phi(s);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        RhoMomentEntry entry;
        entry.x = pairs[p].first;
        entry.y = pairs[p].second;
        entry.mc_mean = mean(samples[p]);
        entry.mc_stderr = standard_error(samples[p]);
        entry.upper_ci = entry.mc_mean + 1.96 * entry.mc_stderr;
        entry.bound = 8.0 * std::pow(std::abs(entry.x - entry.y), phi_s);
        entry.violated = entry.upper_ci > entry.bound;
        if (entry.violated) report.pass = false;
        report.entries.push_back(entry);
    }
    return report;
}

} // namespace kpz1d
