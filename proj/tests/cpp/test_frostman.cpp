#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "kpz1d/config.hpp"
#include "kpz1d/frostman.hpp"
#include "kpz1d/stats.hpp"

using namespace kpz1d;

namespace {
const WeightModel kLogNormal = WeightModel::log_normal(std::numbers::ln2);
const WeightModel kFlat = WeightModel::two_point(0.0);
const DigitRestrictionSet kHalfSet{2, {0b00, 0b11}};
}

TEST_CASE("frostman measure is uniform on the cover") {
    const CellMeasure nu = frostman_measure(kHalfSet, 4);
    CHECK(nu.level == 4);
    CHECK(nu.cells.size() == 4);
    for (const double m : nu.masses) CHECK(m == 0.25);
    CHECK(nu.total == 1.0);
}

TEST_CASE("euclid energy by hand on the two-cell measure") {
    const CellMeasure nu = frostman_measure(DigitRestrictionSet::full(), 1);
    // diagonal: 2 * (1/4) / (1/2)^t; cross (both orders): 2 * (1/4) / (1/2)^t
    // at t = 1/2 the total is 4 * (1/4) * sqrt(2) = sqrt(2)
    CHECK(euclid_energy(nu, 0.5) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    // t = 0: plain (total mass)^2
    CHECK(euclid_energy(nu, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(euclid_energy(nu, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(euclid_energy(nu, -0.1), std::invalid_argument);
}

TEST_CASE("quantum energy by hand on the degenerate cascade") {
    const CascadeRealization real(kFlat, 1, 4);
    const CellMeasure nu = frostman_measure(DigitRestrictionSet::full(), 1);
    // metric distances and cell masses are all 1/2:
    // diagonal 2 * (1/4)/(1/2) + cross 2 * (1/4)/(1/2) = 2
    CHECK(quantum_energy(real, nu, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK_THROWS_AS(quantum_energy(real, nu, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(quantum_energy(real, nu, 1.5), std::invalid_argument);
}

TEST_CASE("degenerate quantum energy equals euclid energy at the same exponent") {
    const CascadeRealization real(kFlat, 3, 10);
    for (const std::uint32_t n : {2u, 4u, 8u}) {
        const CellMeasure nu = frostman_measure(kHalfSet, n);
        CHECK(quantum_energy(real, nu, 0.5) == euclid_energy(nu, 0.5));
    }
}

TEST_CASE("energy guards") {
    const CellMeasure big = frostman_measure(DigitRestrictionSet::full(), 13);
    CHECK_THROWS_AS(euclid_energy(big, 0.5), std::length_error);

    const CascadeRealization real(kFlat, 1, 4);
    CellMeasure shuffled = frostman_measure(DigitRestrictionSet::full(), 2);
    std::swap(shuffled.cells[0], shuffled.cells[1]);
    CHECK_THROWS_AS(quantum_energy(real, shuffled, 0.5), std::invalid_argument);
}

TEST_CASE("tilting by the degenerate model is the identity") {
    const CascadeRealization real(kFlat, 9, 8);
    const CellMeasure nu0 = frostman_measure(kHalfSet, 8);
    const TiltParams tilt = make_tilt(kFlat, 0.3);
    CHECK(tilt.a == 1.0);
    const CellMeasure nu = tilted_measure(real, nu0, tilt);
    CHECK(nu.masses == nu0.masses);
    CHECK(nu.total == nu0.total);
}

TEST_CASE("tilt guards") {
    const CascadeRealization real(kLogNormal, 5, 8);
    const CellMeasure nu0 = frostman_measure(kHalfSet, 4);
    CHECK_THROWS_AS(tilted_measure(real, nu0, make_tilt(kLogNormal, 0.3), 6),
                    std::invalid_argument);
    CHECK_THROWS_AS(tilted_measure(real, nu0, TiltParams{0.3, 0.0}),
                    std::invalid_argument);
}

TEST_CASE("tilted total is a mean-one martingale in the tilt depth") {
    const CellMeasure nu0 = frostman_measure(kHalfSet, 8);
    const TiltParams tilt = make_tilt(kLogNormal, 0.3);
    const auto seeds = expand_seeds(29, 400);

    for (const std::uint32_t depth : {0u, 4u, 8u}) {
        std::vector<double> totals;
        for (const std::uint64_t seed : seeds) {
            const CascadeRealization real(kLogNormal, seed, 8);
            totals.push_back(tilted_measure(real, nu0, tilt, depth).total);
        }
        const double m = mean(totals);
        const double se = standard_error(totals);
        if (depth == 0) {
            CHECK(m == 1.0); // no tilt applied at depth zero
        } else {
            CHECK(std::abs(m - 1.0) <= 4.0 * se);
            CHECK(se > 0.0);
        }
    }
}

TEST_CASE("euclid energy growth saturates below dimension") {
    const EnergyGrowth g = euclid_energy_growth(kHalfSet, 0.3, 4, 12);
    REQUIRE(g.levels.size() == 5); // 4, 6, 8, 10, 12
    CHECK(g.levels.front() == 4);
    CHECK(g.levels.back() == 12);
    for (const double e : g.energies) CHECK(e > 0.0);
    CHECK(g.last_ratio < 1.3); // approaching the finite limit integral
    CHECK(g.max_ratio >= g.last_ratio);
}

TEST_CASE("lower-bound evidence below the critical exponent") {
    const auto seeds = expand_seeds(31, 30);
    const LowerBoundEvidence ev =
        lower_bound_evidence(kLogNormal, kHalfSet, 0.3, 4, 10, seeds, 8.0, 2);
    CHECK(ev.phi_s == doctest::Approx(0.405).epsilon(1e-12));
    CHECK(ev.zeta0 == 0.5);
    CHECK(ev.hypothesis_ok);
    CHECK(ev.neg_moment_finite);
    CHECK(ev.warning.empty());
    CHECK(ev.levels.size() == 4); // 4, 6, 8, 10
    CHECK(ev.replicates == 30);
    CHECK(ev.bounded);
    CHECK(ev.ratio >= 1.0);
}

TEST_CASE("lower-bound evidence flags an inapplicable exponent") {
    const auto seeds = expand_seeds(37, 10);
    const LowerBoundEvidence ev =
        lower_bound_evidence(kLogNormal, kHalfSet, 0.7, 4, 10, seeds);
    CHECK_FALSE(ev.hypothesis_ok);
    CHECK_FALSE(ev.warning.empty());

    CHECK_THROWS_AS(lower_bound_evidence(kLogNormal, kHalfSet, 1.5, 4, 10, seeds),
                    std::invalid_argument);
}
