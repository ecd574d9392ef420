#pragma once

#include "kpz1d/weights.hpp"

namespace kpz1d {

/**
 * The dimension relation for a mean-one weight model:
 *
 *   phi(s) = s - log2 E[W^s],
 *
 * mapping a quantum (measure) exponent s to the Euclidean exponent phi(s).
 * phi(0) = 0, phi(1) = 1, and phi is strictly increasing on [0, 1] whenever
 * the cascade condition E[W log2 W] < 1 holds.
 */
double kpz_phi(const WeightModel& model, double s);

/// Derivative phi'(s) = 1 - m'(s) / (m(s) ln 2), by closed form where available.
double kpz_phi_prime(const WeightModel& model, double s);

struct KpzSolution {
    double zeta = 0.0;     ///< quantum exponent in [0, 1]
    double zeta0 = 0.0;    ///< Euclidean exponent phi(zeta)
    double residual = 0.0; ///< |phi(zeta) - zeta0| at return
    int iterations = 0;
};

/// Forward map: zeta0 = phi(zeta).
KpzSolution predict_zeta0(const WeightModel& model, double zeta);

/**
 * Inverse map: solve phi(zeta) = zeta0 for the root in [0, 1] with phi' > 0
 * (the increasing branch, which carries the dimension relation).  Bisection
 * to `tol` on zeta.  Throws std::domain_error when zeta0 is outside [0, max phi].
 */
KpzSolution solve_zeta(const WeightModel& model, double zeta0, double tol = 1e-12);

/**
 * Gaussian-family closed form: for log-normal weights with variance sigma2,
 *
 *   zeta0 - zeta = (sigma2 / ln 4) zeta (1 - zeta).
 */
double gaussian_zeta0(double sigma2, double zeta);

/// Quadratic-formula inverse of gaussian_zeta0 on the increasing branch.
double gaussian_zeta(double sigma2, double zeta0);

/**
 * Two-point-family closed form: for weights 1 +/- sigma,
 *
 *   zeta0 = 1 + zeta - log2((1 - sigma)^zeta + (1 + sigma)^zeta).
 */
double twopoint_zeta0(double sigma, double zeta);

/**
 * Central charge of the Gaussian family in the usual parametrisation:
 * k = ln 4 / sigma2 - 2, so sigma2 = ln 4 / (k + 2).
 */
double central_charge(double sigma2);

/// Inverse of central_charge.
double sigma2_from_central_charge(double k);

} // namespace kpz1d
