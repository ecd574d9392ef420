#include "kpz1d/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "kpz1d/csv.hpp"

namespace kpz1d {

namespace {
constexpr std::uint32_t kHardMaxLevel = 48;
}

CascadeRealization::CascadeRealization(WeightModel model, std::uint64_t seed,
                                       std::uint32_t max_level)
    : model_(std::move(model)), seed_(seed), max_level_(max_level) {
    if (max_level_ == 0 || max_level_ > kHardMaxLevel)
        throw std::invalid_argument("max_level must be in [1, " +
                                    std::to_string(kHardMaxLevel) + "]");
}

void CascadeRealization::require_depth(std::uint32_t n) const {
    if (n > max_level_)
        throw std::out_of_range("level " + std::to_string(n) +
                                " exceeds max_level " + std::to_string(max_level_));
}

double CascadeRealization::cell_weight(DyadicIndex cell) const {
    if (cell.level > max_level_)
        throw std::out_of_range("cell level exceeds max_level");
    if (cell.level < 64 && (cell.index >> cell.level) != 0)
        throw std::out_of_range("cell index out of range for its level");
    return model_.sample_at(seed_, cell.level, cell.index);
}

double CascadeRealization::mass(DyadicIndex cell) const {
    require_depth(cell.level);
    double prod = 1.0;
    for (std::uint32_t j = 0; j < cell.level; ++j)
        prod *= cell_weight({j, cell.index >> (cell.level - j)});
    return std::ldexp(prod, -int(cell.level));
}

double CascadeRealization::range_sum(DyadicIndex node, double prod, std::uint32_t target,
                                     std::uint64_t k_lo, std::uint64_t k_hi) const {
    const std::uint32_t shift = target - node.level;
    const std::uint64_t lo = node.index << shift;
    const std::uint64_t hi = lo + ((std::uint64_t(1) << shift) - 1);
    if (hi < k_lo || lo > k_hi) return 0.0;
    if (node.level == target) return std::ldexp(prod, -int(target));
    const double p = prod * cell_weight(node);
    return range_sum(node.child(0), p, target, k_lo, k_hi) +
           range_sum(node.child(1), p, target, k_lo, k_hi);
}

double CascadeRealization::ell(std::uint32_t n) const {
    require_depth(n);
    if (n == 0) return 1.0;
    return range_sum({0, 0}, 1.0, n, 0, (std::uint64_t(1) << n) - 1);
}

std::uint64_t CascadeRealization::grid_coordinate(std::uint32_t n, double x) const {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::invalid_argument("coordinate outside [0,1]");
    const double scaled = std::ldexp(x, int(n));
    const double k = std::floor(scaled);
    if (k != scaled)
        throw std::invalid_argument("coordinate is not a level-" + std::to_string(n) +
                                    " grid point");
    return std::uint64_t(k);
}

double CascadeRealization::cdf(std::uint32_t n, double x) const {
    require_depth(n);
    const std::uint64_t k = grid_coordinate(n, x);
    if (k == 0) return 0.0;
    return range_sum({0, 0}, 1.0, n, 0, k - 1);
}

double CascadeRealization::prefix_measure(std::uint32_t n, double x) const {
    const double clamped = std::clamp(x, 0.0, 1.0);
    if (clamped == 1.0) return ell(n);
    const double scaled = std::ldexp(clamped, int(n));
    const double whole = std::floor(scaled);
    const double frac = scaled - whole;
    const std::uint64_t k = std::uint64_t(whole);
    double total = k > 0 ? range_sum({0, 0}, 1.0, n, 0, k - 1) : 0.0;
    if (frac > 0.0) total += frac * mass({n, k});
    return total;
}

double CascadeRealization::rho(std::uint32_t n, double x, double y) const {
    require_depth(n);
    if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0))
        throw std::invalid_argument("rho wants points in [0,1]");
    const double a = std::min(x, y);
    const double b = std::max(x, y);
    if (a == b) return 0.0;
    return prefix_measure(n, b) - prefix_measure(n, a);
}

DyadicIndex CascadeRealization::cell_at(std::uint32_t n, double x) const {
    require_depth(n);
    if (!(x >= 0.0 && x <= 1.0))
        throw std::invalid_argument("coordinate outside [0,1]");
    const double scaled = std::ldexp(x, int(n));
    const double whole = std::floor(scaled);
    // at a grid point the convention picks the cell whose maximum is x
    if (whole == scaled)
        return {n, whole == 0.0 ? 0 : std::uint64_t(whole) - 1};
    return {n, std::uint64_t(whole)};
}

double CascadeRealization::rho_trunc(std::uint32_t n, double x, double y) const {
    const double d = rho(n, x, y);
    const double mx = mass(cell_at(n, x));
    const double my = mass(cell_at(n, y));
    return std::max({d, mx, my});
}

double CascadeRealization::subtree_max(DyadicIndex node, double prod,
                                       std::uint32_t target) const {
    if (node.level == target) return std::ldexp(prod, -int(target));
    const double p = prod * cell_weight(node);
    return std::max(subtree_max(node.child(0), p, target),
                    subtree_max(node.child(1), p, target));
}

double CascadeRealization::max_atom(std::uint32_t n) const {
    require_depth(n);
    return subtree_max({0, 0}, 1.0, n);
}

double CascadeRealization::subtree_total(DyadicIndex node, double prod,
                                         std::uint32_t target) const {
    if (node.level == target) return prod;
    const double p = prod * cell_weight(node);
    return subtree_total(node.child(0), p, target) +
           subtree_total(node.child(1), p, target);
}

double CascadeRealization::tail_factor(DyadicIndex cell, std::uint32_t depth) const {
    require_depth(cell.level + depth);
    if (depth == 0) return 1.0;
    return std::ldexp(subtree_total(cell, 1.0, cell.level + depth), -int(depth));
}

double CascadeRealization::recursion_residual(std::uint32_t n) const {
    require_depth(n);
    if (n == 0) return 0.0;
    const double lhs = ell(n);
    const double rhs = cell_weight({0, 0}) *
                       (tail_factor({1, 0}, n - 1) + tail_factor({1, 1}, n - 1)) / 2.0;
    return std::abs(lhs - rhs) / lhs;
}

void CascadeRealization::dump_cells(std::uint32_t n, std::ostream& out) const {
    require_depth(n);
    if (n > 16)
        throw std::invalid_argument("cell dumps are limited to levels <= 16");
    const std::string header[] = {"level", "index", "mass"};
    CsvWriter csv(out, header);
    level_masses(n, [&](std::uint64_t index, double m) {
        const std::string row[] = {std::to_string(n), std::to_string(index),
                                   format_double(m)};
        csv.row(row);
    });
}

} // namespace kpz1d
