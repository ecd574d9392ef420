#include "kpz1d/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

namespace kpz1d {

namespace {

// Splitting at the midpoint gives the same association as summing a perfect
// binary tree bottom-up, so for 2^k values this matches a recursive
// two-subtree reduction bit for bit.
double pairwise(const double* v, std::size_t n) {
    if (n == 0) return 0.0;
    if (n == 1) return v[0];
    const std::size_t half = n / 2;
    return pairwise(v, half) + pairwise(v + half, n - half);
}

} // namespace

double pairwise_sum(std::span<const double> values) {
    return pairwise(values.data(), values.size());
}

double mean(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("mean of empty range");
    return pairwise_sum(values) / double(values.size());
}

double sample_stddev(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) return 0.0;
    const double m = mean(values);
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = values[i] - m;
        sq[i] = d * d;
    }
    return std::sqrt(pairwise_sum(sq) / double(n - 1));
}

double standard_error(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) return 0.0;
    return sample_stddev(values) / std::sqrt(double(n));
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median of empty range");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

LinearFit LinearFit::fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("fit: length mismatch");
    const std::size_t n = x.size();
    if (n < 2) throw std::invalid_argument("fit: need at least two points");

    const double xb = mean(x);
    const double yb = mean(y);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - xb) * (x[i] - xb);
        sxy += (x[i] - xb) * (y[i] - yb);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit: degenerate abscissa");

    LinearFit out;
    out.slope = sxy / sxx;
    out.intercept = yb - out.slope * xb;

    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (out.intercept + out.slope * x[i]);
        ss_res += r * r;
        ss_tot += (y[i] - yb) * (y[i] - yb);
    }
    out.r2 = ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
    out.slope_stderr =
        n > 2 ? std::sqrt(ss_res / (double(n - 2) * sxx)) : 0.0;
    return out;
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body) {
    if (count == 0) return;
    const std::size_t workers =
        std::min<std::size_t>(std::max(1u, threads), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
                if (i >= count) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace kpz1d
