#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace kpz1d {

/**
 * Sum with fixed pairwise (balanced-tree) association.
 *
 * The grouping depends only on the length of the range, never on how the
 * values were produced, so sums over the same data agree bit-for-bit across
 * runs and thread counts.
 */
double pairwise_sum(std::span<const double> values);

double mean(std::span<const double> values);

/// Sample standard deviation (n-1 denominator); 0 for fewer than two values.
double sample_stddev(std::span<const double> values);

/// Standard error of the mean; 0 for fewer than two values.
double standard_error(std::span<const double> values);

/// Median (average of the middle pair for even lengths).
double median(std::vector<double> values);

/** Ordinary least squares fit of y against x. */
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0; ///< standard error of the slope; 0 for two points
    double r2 = 1.0;           ///< coefficient of determination

    static LinearFit fit(std::span<const double> x, std::span<const double> y);
};

/**
 * Run `body(i)` for i in [0, count) on up to `threads` worker threads.
 *
 * Work is assigned by index, not by thread, so any quantity accumulated
 * per-index and combined in index order is independent of the thread count.
 * threads <= 1 runs inline.
 */
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

} // namespace kpz1d
