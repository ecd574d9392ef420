#pragma once

#include <string>
#include <variant>
#include <vector>

#include "kpz1d/rng.hpp"

namespace kpz1d {

/// Outcome of checking a weight law against the standing assumptions:
/// mean one, strict positivity, and the cascade condition E[W log2 W] < 1.
struct ValidationReport {
    bool mean_one_ok = false;
    bool positive_ok = false;
    bool cascade_ok = false;
    double mean = 0.0;     // computed E[W]
    double w_log2w = 0.0;  // computed E[W log2 W]
    std::string message;   // failure summary, empty when valid

    bool valid() const { return mean_one_ok && positive_ok && cascade_ok; }
};

/// Moment bundle for one exponent s.
struct MomentReport {
    double s = 0.0;
    double m = 0.0;      // E[W^s]
    double phi = 0.0;    // s - log2 m
    double psi = 0.0;    // E[(W/2)^s] = m * 2^-s
    double neg_m = 0.0;  // E[W^-|s|], +inf when divergent
};

/**
 * The weight law W of the cascade: positive, mean one.
 *
 * Three families are built in.  LogNormal is W = exp(sigma*Y - sigma^2/2)
 * with Y standard Gaussian, so E[W] = 1 by construction.  TwoPoint is
 * W = 1 +- sigma with probability 1/2 each.  Empirical is a finite table of
 * (value, probability) pairs supplied by the user.
 *
 * Moments E[W^s] use closed forms for the first two families and exact
 * finite sums for Empirical.  A quadrature cross-check for LogNormal lives
 * in lognormal_moment_quadrature().
 *
 * Models are immutable; every member is pure and safe to call concurrently.
 */
class WeightModel {
public:
    struct LogNormal { double sigma2; };
    struct TwoPoint { double sigma; };
    struct Empirical {
        std::vector<double> values;
        std::vector<double> probs;
    };

    static WeightModel log_normal(double sigma2);
    static WeightModel two_point(double sigma);
    static WeightModel empirical(std::vector<double> values, std::vector<double> probs);

    bool is_log_normal() const { return std::holds_alternative<LogNormal>(law_); }
    bool is_two_point() const { return std::holds_alternative<TwoPoint>(law_); }
    bool is_empirical() const { return std::holds_alternative<Empirical>(law_); }
    const LogNormal* as_log_normal() const { return std::get_if<LogNormal>(&law_); }
    const TwoPoint* as_two_point() const { return std::get_if<TwoPoint>(&law_); }
    const Empirical* as_empirical() const { return std::get_if<Empirical>(&law_); }

    /// E[W^s].  Throws std::domain_error for an Empirical law with a zero
    /// value and s < 0 (the moment does not exist).
    double moment(double s) const;

    /// The structure function phi(s) = s - log2 E[W^s].
    double phi(double s) const;

    /// psi(s) = E[(W/2)^s] = moment(s) * 2^-s; convex and decreasing on [0,1].
    double psi(double s) const;

    /// E[W^-s] for s >= 0; +infinity when the law has mass at 0.
    double neg_moment(double s) const;

    /// E[W log2 W], the quantity the cascade condition bounds.
    double w_log2w() const;

    MomentReport moment_report(double s) const;

    /// Check mean one, positivity, and E[W log2 W] < 1.  Never throws on a
    /// bad law; the report carries the failures.
    ValidationReport validate() const;

    /// One draw of W from a sequential stream.
    double sample(RandomStream& stream) const;

    /// One draw of W attached to tree coordinate (level, index) of the keyed
    /// stream `seed`.  Pure: the same arguments always give the same value.
    double sample_at(std::uint64_t seed, std::uint32_t level, std::uint64_t index) const;

    /// Config-text form, e.g. "family=lognormal sigma2=0.6931471805599453".
    std::string describe() const;

private:
    explicit WeightModel(std::variant<LogNormal, TwoPoint, Empirical> law)
        : law_(std::move(law)) {}

    std::variant<LogNormal, TwoPoint, Empirical> law_;
};

/// E[W^s] for the LogNormal family by trapezoidal quadrature over the
/// Gaussian density.  Cross-check path only; the model itself uses the
/// closed form exp(sigma2*s*(s-1)/2).
double lognormal_moment_quadrature(double sigma2, double s);

/// Parse a model spec like "family=lognormal sigma2=0.6931" /
/// "family=twopoint sigma=0.5" / "family=empirical file=w.csv" (two-column
/// CSV: value, probability).  Throws std::invalid_argument on bad specs.
WeightModel parse_weight_model(const std::string& spec);

}  // namespace kpz1d
