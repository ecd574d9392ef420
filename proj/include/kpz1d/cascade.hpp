#pragma once

#include <cstdint>
#include <iosfwd>

#include "kpz1d/weights.hpp"

namespace kpz1d {

/// One dyadic cell [index * 2^-level, (index+1) * 2^-level].
struct DyadicIndex {
    std::uint32_t level = 0;
    std::uint64_t index = 0;

    double left() const { return std::ldexp(double(index), -int(level)); }
    double right() const { return std::ldexp(double(index + 1), -int(level)); }
    double mid() const { return std::ldexp(double(2 * index + 1), -int(level) - 1); }
    double width() const { return std::ldexp(1.0, -int(level)); }

    DyadicIndex parent() const { return {level - 1, index >> 1}; }
    DyadicIndex child(int side) const { return {level + 1, (index << 1) | std::uint64_t(side & 1)}; }

    friend bool operator==(const DyadicIndex&, const DyadicIndex&) = default;
};

/**
 * A seeded realization of the multiplicative cascade, generated lazily on
 * the dyadic tree down to `max_level`.
 *
 * The weight attached to a cell is a pure function of (seed, level, index),
 * so nothing is stored: any cell can be queried in any order and a full
 * level is streamed depth-first in O(level) memory.  Level-n cell masses are
 *
 *     mass(I) = 2^-n * prod_{j=0}^{n-1} W_{I_j},
 *
 * the product running over the ancestors of I from the root down to I's
 * parent.  All level sums (totals, CDF prefixes) accumulate left to right
 * through the same binary tree, which makes them bit-reproducible and
 * independent of thread count.
 */
class CascadeRealization {
public:
    static constexpr std::uint32_t kDefaultMaxLevel = 24;

    CascadeRealization(WeightModel model, std::uint64_t seed,
                       std::uint32_t max_level = kDefaultMaxLevel);

    const WeightModel& model() const { return model_; }
    std::uint64_t seed() const { return seed_; }
    std::uint32_t max_level() const { return max_level_; }

    /// The i.i.d. weight W_I attached to cell I.
    double cell_weight(DyadicIndex cell) const;

    /// mu_n(I) for I at level n: strictly positive.
    double mass(DyadicIndex cell) const;

    /// ell_n = mu_n[0,1], the level-n total.
    double ell(std::uint32_t n) const;

    /// F_n(x) = mu_n[0,x] for x = k * 2^-n (throws on non-dyadic x).
    double cdf(std::uint32_t n, double x) const;

    /// Depth-n distance mu_n[x,y]; a path metric: additive along the line.
    double rho(std::uint32_t n, double x, double y) const;

    /// max(rho(x,y), mass(I_n(x)), mass(I_n(y))): strictly positive even on
    /// the diagonal.  Boundary points resolve to the cell whose maximum is x.
    double rho_trunc(std::uint32_t n, double x, double y) const;

    /// Largest level-n cell mass (atom-decay diagnostic).
    double max_atom(std::uint32_t n) const;

    /// Relative residual of the exact tree identity
    /// ell_n = W_root * (ell'_{n-1} + ell''_{n-1}) / 2, where ell' and ell''
    /// are the depth-(n-1) totals of the two half subcascades rescaled to
    /// [0,1].  Zero up to accumulation rounding.
    double recursion_residual(std::uint32_t n) const;

    /// Depth-m total of the subcascade hanging below `cell`, rescaled to
    /// [0,1]; distributed as an independent copy of ell_m.  Multiplying
    /// mass(I) by tail_factor(I, m) over level n reproduces ell(n + m).
    double tail_factor(DyadicIndex cell, std::uint32_t depth) const;

    /// The level-n cell whose ancestor path the paper assigns to x (ties at
    /// dyadic boundaries go to the cell whose maximum is x).
    DyadicIndex cell_at(std::uint32_t n, double x) const;

    /// Stream every level-n cell mass left to right: visit(index, mass).
    /// One depth-first pass, O(n) memory.
    template <typename Visitor>
    void level_masses(std::uint32_t n, Visitor&& visit) const {
        require_depth(n);
        walk_masses(DyadicIndex{0, 0}, 1.0, n, visit);
    }

    /// CSV dump "level,index,mass" of one full level; levels above 16 are
    /// refused (the row count doubles per level).
    void dump_cells(std::uint32_t n, std::ostream& out) const;

private:
    void require_depth(std::uint32_t n) const;
    double range_sum(DyadicIndex node, double prod, std::uint32_t target,
                     std::uint64_t k_lo, std::uint64_t k_hi) const;
    double subtree_max(DyadicIndex node, double prod, std::uint32_t target) const;
    double subtree_total(DyadicIndex node, double prod, std::uint32_t target) const;
    /// mu_n[0, x] for arbitrary x in [0,1] (fractional end cell included).
    double prefix_measure(std::uint32_t n, double x) const;

    template <typename Visitor>
    void walk_masses(DyadicIndex node, double prod, std::uint32_t target,
                     Visitor& visit) const {
        if (node.level == target) {
            visit(node.index, std::ldexp(prod, -int(target)));
            return;
        }
        const double p = prod * cell_weight(node);
        walk_masses(node.child(0), p, target, visit);
        walk_masses(node.child(1), p, target, visit);
    }
    /// Dyadic coordinate k of x on the level-n grid; throws if x is not
    /// representable there.
    std::uint64_t grid_coordinate(std::uint32_t n, double x) const;

    WeightModel model_;
    std::uint64_t seed_;
    std::uint32_t max_level_;
};

}  // namespace kpz1d
