#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "kpz1d/kpz.hpp"

using namespace kpz1d;

namespace {
constexpr double kLn2 = std::numbers::ln2;

const std::vector<WeightModel>& all_models() {
    static const std::vector<WeightModel> models{
        WeightModel::log_normal(0.1),  WeightModel::log_normal(kLn2),
        WeightModel::log_normal(1.2),  WeightModel::two_point(0.2),
        WeightModel::two_point(0.6),   WeightModel::two_point(0.9),
        WeightModel::empirical({0.5, 1.5}, {0.5, 0.5}),
    };
    return models;
}
} // namespace

TEST_CASE("phi fixes both endpoints and increases in between") {
    for (const WeightModel& w : all_models()) {
        CHECK(std::abs(kpz_phi(w, 0.0)) <= 1e-12);
        CHECK(std::abs(kpz_phi(w, 1.0) - 1.0) <= 1e-12);
        double prev = kpz_phi(w, 0.0);
        for (int k = 1; k <= 100; ++k) {
            const double cur = kpz_phi(w, k / 100.0);
            CHECK(cur > prev);
            prev = cur;
        }
    }
}

TEST_CASE("phi matches the family closed forms") {
    for (const double zeta : {0.0, 0.05, 0.25, 0.5, 0.75, 1.0}) {
        for (const double sigma2 : {0.1, kLn2, 1.2}) {
            CHECK(kpz_phi(WeightModel::log_normal(sigma2), zeta) ==
                  doctest::Approx(gaussian_zeta0(sigma2, zeta)).epsilon(1e-12));
        }
        for (const double sigma : {0.2, 0.6, 0.9}) {
            CHECK(kpz_phi(WeightModel::two_point(sigma), zeta) ==
                  doctest::Approx(twopoint_zeta0(sigma, zeta)).epsilon(1e-12));
        }
    }
}

TEST_CASE("phi_prime matches a central difference") {
    const double h = 1e-6;
    for (const WeightModel& w : all_models()) {
        for (const double s : {0.1, 0.5, 0.9}) {
            const double numeric = (kpz_phi(w, s + h) - kpz_phi(w, s - h)) / (2 * h);
            CHECK(kpz_phi_prime(w, s) == doctest::Approx(numeric).epsilon(1e-6));
        }
    }
}

TEST_CASE("solve_zeta round-trips predict_zeta0") {
    for (const WeightModel& w : all_models()) {
        for (int k = 0; k <= 20; ++k) {
            const double z = k / 20.0;
            const double z0 = predict_zeta0(w, z).zeta0;
            const KpzSolution back = solve_zeta(w, z0, 1e-12);
            CHECK(std::abs(back.zeta - z) <= 1e-9);
            CHECK(back.residual <= 1e-9);
        }
    }
}

TEST_CASE("known solution of the gaussian relation at zeta0 = 1/2") {
    // zeta + zeta(1-zeta)/2 = 1/2  =>  zeta^2 - 3 zeta + 1 = 0
    const double exact = (3.0 - std::sqrt(5.0)) / 2.0;
    const KpzSolution sol = solve_zeta(WeightModel::log_normal(kLn2), 0.5, 1e-12);
    CHECK(sol.zeta == doctest::Approx(exact).epsilon(1e-11));
    CHECK(gaussian_zeta(kLn2, 0.5) == doctest::Approx(exact).epsilon(1e-14));
    CHECK(sol.iterations > 0);
}

TEST_CASE("degenerate model collapses the relation to the identity") {
    const WeightModel flat = WeightModel::two_point(0.0);
    for (const double z0 : {0.0, 0.3, 1.0}) {
        CHECK(solve_zeta(flat, z0).zeta == doctest::Approx(z0).epsilon(1e-11));
    }
    CHECK(gaussian_zeta(0.0, 0.7) == 0.7);
}

TEST_CASE("out-of-range targets are rejected") {
    CHECK_THROWS_AS(solve_zeta(WeightModel::log_normal(kLn2), 1.2),
                    std::domain_error);
    CHECK_THROWS_AS(solve_zeta(WeightModel::log_normal(kLn2), -0.1),
                    std::domain_error);
    CHECK_THROWS_AS(predict_zeta0(WeightModel::log_normal(kLn2), 2.0),
                    std::domain_error);
}

TEST_CASE("central charge parametrisation inverts") {
    for (const double sigma2 : {0.2, kLn2, 1.0}) {
        CHECK(sigma2_from_central_charge(central_charge(sigma2)) ==
              doctest::Approx(sigma2).epsilon(1e-14));
    }
    // sigma2 = ln 4 corresponds to k = -1, the cascade-condition edge
    CHECK(central_charge(2.0 * kLn2) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK_THROWS_AS(central_charge(0.0), std::domain_error);
    CHECK_THROWS_AS(sigma2_from_central_charge(-2.0), std::domain_error);
}
