#include "kpz1d/kpz.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kpz1d {

double kpz_phi(const WeightModel& model, double s) { return model.phi(s); }

double kpz_phi_prime(const WeightModel& model, double s) {
    if (const auto* ln = model.as_log_normal())
        return 1.0 - ln->sigma2 * (2.0 * s - 1.0) / (2.0 * std::numbers::ln2);
    double m_prime = 0.0;
    if (const auto* tp = model.as_two_point()) {
        const double lo = 1.0 - tp->sigma, hi = 1.0 + tp->sigma;
        m_prime = 0.5 * (std::pow(lo, s) * std::log(lo) + std::pow(hi, s) * std::log(hi));
    } else {
        const auto& e = *model.as_empirical();
        if (s <= 0.0)
            for (std::size_t i = 0; i < e.values.size(); ++i)
                if (e.values[i] == 0.0 && e.probs[i] > 0.0)
                    throw std::domain_error("phi' undefined at s <= 0 with mass at 0");
        for (std::size_t i = 0; i < e.values.size(); ++i)
            if (e.values[i] > 0.0)
                m_prime += e.probs[i] * std::pow(e.values[i], s) * std::log(e.values[i]);
    }
    return 1.0 - m_prime / (model.moment(s) * std::numbers::ln2);
}

KpzSolution predict_zeta0(const WeightModel& model, double zeta) {
    if (!(zeta >= 0.0 && zeta <= 1.0))
        throw std::domain_error("zeta must lie in [0, 1]");
    KpzSolution sol;
    sol.zeta = zeta;
    sol.zeta0 = model.phi(zeta);
    return sol;
}

KpzSolution solve_zeta(const WeightModel& model, double zeta0, double tol) {
    if (!(zeta0 >= 0.0 && zeta0 <= 1.0))
        throw std::domain_error("zeta0 must lie in [0, 1]; the dimension map is "
                                "only monotone there");
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");

    KpzSolution sol;
    double lo = 0.0, hi = 1.0;
    double f_lo = model.phi(lo) - zeta0;
    double f_hi = model.phi(hi) - zeta0;
    // 1e-9 of slack absorbs endpoint rounding for near-mean-one empirical
    // laws, where phi(1) can miss 1 by an ulp.
    if (f_lo >= 0.0 && f_lo <= 1e-9) {
        sol.zeta = lo;
    } else if (f_hi <= 0.0 && f_hi >= -1e-9) {
        sol.zeta = hi;
    } else {
        if (f_lo > 0.0 || f_hi < 0.0)
            throw std::domain_error("zeta0 outside the range of the dimension map");
        int iter = 0;
        while (hi - lo > tol && iter < 200) {
            const double mid = 0.5 * (lo + hi);
            const double f = model.phi(mid) - zeta0;
            ++iter;
            if (f == 0.0) {
                lo = hi = mid;
                break;
            }
            (f < 0.0 ? lo : hi) = mid;
        }
        sol.zeta = 0.5 * (lo + hi);
        sol.iterations = iter;
    }
    sol.zeta0 = zeta0;
    sol.residual = std::abs(model.phi(sol.zeta) - zeta0);
    return sol;
}

double gaussian_zeta0(double sigma2, double zeta) {
    return zeta + sigma2 / std::log(4.0) * zeta * (1.0 - zeta);
}

double gaussian_zeta(double sigma2, double zeta0) {
    const double c = sigma2 / std::log(4.0);
    if (c == 0.0) return zeta0;
    // increasing branch of c z^2 - (1+c) z + zeta0 = 0
    const double disc = (1.0 + c) * (1.0 + c) - 4.0 * c * zeta0;
    return ((1.0 + c) - std::sqrt(disc)) / (2.0 * c);
}

double twopoint_zeta0(double sigma, double zeta) {
    return 1.0 + zeta -
           std::log2(std::pow(1.0 - sigma, zeta) + std::pow(1.0 + sigma, zeta));
}

double central_charge(double sigma2) {
    if (!(sigma2 > 0.0)) throw std::domain_error("central charge needs sigma2 > 0");
    return std::log(4.0) / sigma2 - 2.0;
}

double sigma2_from_central_charge(double k) {
    if (!(k > -2.0)) throw std::domain_error("central charge must exceed -2");
    return std::log(4.0) / (k + 2.0);
}

} // namespace kpz1d
