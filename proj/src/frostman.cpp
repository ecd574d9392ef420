#include "kpz1d/frostman.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kpz1d/stats.hpp"

namespace kpz1d {

CellMeasure frostman_measure(const DigitRestrictionSet& set, std::uint32_t n) {
    CellMeasure nu;
    nu.level = n;
    nu.cells = set.cover_cells(n);
    const double m = 1.0 / double(nu.cells.size());
    nu.masses.assign(nu.cells.size(), m);
    nu.total = pairwise_sum(nu.masses);
    return nu;
}

TiltParams make_tilt(const WeightModel& model, double s) {
    return TiltParams{s, model.moment(s)};
}

CellMeasure tilted_measure(const CascadeRealization& real, const CellMeasure& nu0,
                           const TiltParams& tilt, std::uint32_t depth) {
    if (depth == UINT32_MAX) depth = nu0.level;
    if (depth > nu0.level)
        throw std::invalid_argument("tilt depth exceeds the measure's level");
    if (!(tilt.a > 0.0)) throw std::invalid_argument("tilt normaliser must be positive");

    CellMeasure nu;
    nu.level = nu0.level;
    nu.cells = nu0.cells;
    nu.masses.resize(nu0.masses.size());
    const double an = std::pow(tilt.a, double(depth));
    for (std::size_t i = 0; i < nu.cells.size(); ++i) {
        const DyadicIndex cell = nu.cells[i];
        double prod = 1.0;
        for (std::uint32_t j = 0; j < depth; ++j)
            prod *= std::pow(real.cell_weight({j, cell.index >> (cell.level - j)}),
                             tilt.s);
        nu.masses[i] = nu0.masses[i] * prod / an;
    }
    nu.total = pairwise_sum(nu.masses);
    return nu;
}

double euclid_energy(const CellMeasure& nu, double t) {
    if (!(t >= 0.0 && t < 1.0))
        throw std::invalid_argument("euclid_energy wants t in [0, 1)");
    if (nu.cells.size() > kMaxEnergyCells)
        throw std::length_error("energy support exceeds 4096 cells");

    const double width = std::ldexp(1.0, -int(nu.level));
    const double diag_scale = std::pow(width, -t);
    std::vector<double> rows(nu.cells.size());
    for (std::size_t i = 0; i < nu.cells.size(); ++i) {
        double row = nu.masses[i] * nu.masses[i] * diag_scale;
        const double mid_i = nu.cells[i].mid();
        for (std::size_t j = 0; j < nu.cells.size(); ++j) {
            if (j == i) continue;
            row += nu.masses[i] * nu.masses[j] *
                   std::pow(std::abs(mid_i - nu.cells[j].mid()), -t);
        }
        rows[i] = row;
    }
    return pairwise_sum(rows);
}

double quantum_energy(const CascadeRealization& real, const CellMeasure& nu,
                      double s) {
    if (!(s > 0.0 && s <= 1.0))
        throw std::invalid_argument("quantum_energy wants s in (0, 1]");
    const std::size_t count = nu.cells.size();
    if (count > kMaxEnergyCells)
        throw std::length_error("energy support exceeds 4096 cells");

    // One left-to-right pass over the level collects, per support cell, the
    // cascade mass of the cell and the measure of [0, mid]; distances between
    // midpoints then come out by subtraction instead of per-pair tree walks.
    std::vector<double> cell_mass(count), prefix_at_mid(count);
    std::size_t next = 0;
    double running = 0.0;
    real.level_masses(nu.level, [&](std::uint64_t index, double m) {
        if (next < count && nu.cells[next].index == index) {
            cell_mass[next] = m;
            prefix_at_mid[next] = running + 0.5 * m;
            ++next;
        }
        running += m;
    });
    if (next != count)
        throw std::invalid_argument("measure support does not lie on its level");

    std::vector<double> rows(count);
    for (std::size_t i = 0; i < count; ++i) {
        double row = nu.masses[i] * nu.masses[i] * std::pow(cell_mass[i], -s);
        for (std::size_t j = 0; j < count; ++j) {
            if (j == i) continue;
            const double gap = std::abs(prefix_at_mid[j] - prefix_at_mid[i]);
            const double dist = std::max({gap, cell_mass[i], cell_mass[j]});
            row += nu.masses[i] * nu.masses[j] * std::pow(dist, -s);
        }
        rows[i] = row;
    }
    return pairwise_sum(rows);
}

namespace {

EnergyGrowth growth_from(std::vector<std::uint32_t> levels, std::vector<double> energies) {
    EnergyGrowth g;
    g.levels = std::move(levels);
    g.energies = std::move(energies);
    for (std::size_t i = 0; i + 1 < g.energies.size(); ++i) {
        const double ratio = g.energies[i + 1] / g.energies[i];
        g.max_ratio = std::max(g.max_ratio, ratio);
        g.last_ratio = ratio;
    }
    return g;
}

std::vector<std::uint32_t> aligned_levels(const DigitRestrictionSet& set,
                                          std::uint32_t n_min, std::uint32_t n_max) {
    std::vector<std::uint32_t> levels;
    for (std::uint32_t n = n_min; n <= n_max; ++n)
        if (n % set.block() == 0) levels.push_back(n);
    if (levels.size() < 2)
        throw std::invalid_argument("fewer than 2 block-aligned levels in the window");
    return levels;
}

} // namespace

EnergyGrowth euclid_energy_growth(const DigitRestrictionSet& set, double t,
                                  std::uint32_t n_min, std::uint32_t n_max) {
    const auto levels = aligned_levels(set, n_min, n_max);
    std::vector<double> energies;
    energies.reserve(levels.size());
    for (const std::uint32_t n : levels)
        energies.push_back(euclid_energy(frostman_measure(set, n), t));
    return growth_from(levels, std::move(energies));
}

EnergyGrowth quantum_energy_growth(const CascadeRealization& real,
                                   const DigitRestrictionSet& set, double s,
                                   std::uint32_t n_min, std::uint32_t n_max) {
    const auto levels = aligned_levels(set, n_min, n_max);
    const TiltParams tilt = make_tilt(real.model(), s);
    std::vector<double> energies;
    energies.reserve(levels.size());
    for (const std::uint32_t n : levels) {
        const CellMeasure nu = tilted_measure(real, frostman_measure(set, n), tilt);
        energies.push_back(quantum_energy(real, nu, s));
    }
    return growth_from(levels, std::move(energies));
}

LowerBoundEvidence lower_bound_evidence(const WeightModel& model,
                                        const DigitRestrictionSet& set, double s,
                                        std::uint32_t n_min, std::uint32_t n_max,
                                        std::span<const std::uint64_t> seeds,
                                        double ratio_threshold, unsigned threads) {
    if (seeds.empty()) throw std::invalid_argument("need at least one seed");
    if (!(s > 0.0 && s < 1.0))
        throw std::invalid_argument("lower-bound exponent must lie in (0, 1)");

    LowerBoundEvidence ev;
    ev.s = s;
    ev.phi_s = model.phi(s);
    ev.zeta0 = set.zeta0();
    ev.hypothesis_ok = ev.phi_s < ev.zeta0;
    ev.neg_moment_finite = std::isfinite(model.neg_moment(s));
    if (!ev.hypothesis_ok)
        ev.warning = "phi(s) >= zeta0: the lower-bound argument does not apply at this s";
    else if (!ev.neg_moment_finite)
        ev.warning = "E[W^-s] is infinite: hypothesis holds only in relaxed form";

    ev.levels = aligned_levels(set, n_min, n_max);
    ev.replicates = seeds.size();
    ev.ratio_threshold = ratio_threshold;

    // Shared across replicates: the uniform base measure per level.
    std::vector<CellMeasure> bases;
    bases.reserve(ev.levels.size());
    for (const std::uint32_t n : ev.levels) bases.push_back(frostman_measure(set, n));
    const TiltParams tilt = make_tilt(model, s);

    std::vector<std::vector<double>> energy(ev.levels.size());
    for (auto& row : energy) row.resize(seeds.size());
    parallel_for(seeds.size(), threads, [&](std::size_t i) {
        const CascadeRealization real(model, seeds[i], n_max);
        for (std::size_t k = 0; k < ev.levels.size(); ++k) {
            const CellMeasure nu = tilted_measure(real, bases[k], tilt);
            energy[k][i] = quantum_energy(real, nu, s);
        }
    });

    for (std::size_t k = 0; k < ev.levels.size(); ++k) {
        ev.mean_energy.push_back(mean(energy[k]));
        ev.energy_stderr.push_back(standard_error(energy[k]));
    }

    // Boundedness is judged on the upper half of the level range, past the
    // pre-asymptotic regime.
    const std::size_t half = ev.levels.size() / 2;
    double lo = ev.mean_energy[half], hi = ev.mean_energy[half];
    for (std::size_t k = half; k < ev.mean_energy.size(); ++k) {
        lo = std::min(lo, ev.mean_energy[k]);
        hi = std::max(hi, ev.mean_energy[k]);
    }
    ev.ratio = hi / lo;
    ev.bounded = ev.ratio <= ratio_threshold;
    return ev;
}

} // namespace kpz1d
