#include "kpz1d/weights.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "kpz1d/csv.hpp"

namespace kpz1d {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double xlog2x(double v) { return v == 0.0 ? 0.0 : v * std::log2(v); }

// Split "key=value key=value ..." on whitespace.
std::vector<std::pair<std::string, std::string>> split_spec(const std::string& spec) {
    std::vector<std::pair<std::string, std::string>> out;
    std::istringstream in(spec);
    std::string token;
    while (in >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos || eq == 0)
            throw std::invalid_argument("bad spec token '" + token + "' (want key=value)");
        out.emplace_back(token.substr(0, eq), token.substr(eq + 1));
    }
    return out;
}

double parse_real(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("bad numeric value for " + what + ": '" + text + "'");
    }
}

} // namespace

WeightModel WeightModel::log_normal(double sigma2) {
    if (!(sigma2 >= 0.0))
        throw std::invalid_argument("lognormal sigma2 must be >= 0");
    return WeightModel{LogNormal{sigma2}};
}

WeightModel WeightModel::two_point(double sigma) {
    if (!(sigma >= 0.0))
        throw std::invalid_argument("twopoint sigma must be >= 0");
    return WeightModel{TwoPoint{sigma}};
}

WeightModel WeightModel::empirical(std::vector<double> values, std::vector<double> probs) {
    if (values.empty() || values.size() != probs.size())
        throw std::invalid_argument("empirical law needs matching nonempty value/probability lists");
    double psum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] >= 0.0) || !std::isfinite(values[i]))
            throw std::invalid_argument("empirical values must be finite and >= 0");
        if (!(probs[i] >= 0.0) || !std::isfinite(probs[i]))
            throw std::invalid_argument("empirical probabilities must be finite and >= 0");
        psum += probs[i];
    }
    if (!(psum > 0.0)) throw std::invalid_argument("empirical probabilities sum to zero");
    for (double& p : probs) p /= psum;
    return WeightModel{Empirical{std::move(values), std::move(probs)}};
}

double WeightModel::moment(double s) const {
    if (const auto* ln = as_log_normal())
        return std::exp(ln->sigma2 * s * (s - 1.0) / 2.0);
    if (const auto* tp = as_two_point())
        return 0.5 * (std::pow(1.0 - tp->sigma, s) + std::pow(1.0 + tp->sigma, s));
    const auto& e = *as_empirical();
    double sum = 0.0;
    for (std::size_t i = 0; i < e.values.size(); ++i) {
        if (e.values[i] == 0.0) {
            if (s < 0.0)
                throw std::domain_error("E[W^s] does not exist: mass at 0 with s < 0");
            if (s > 0.0) continue; // 0^s = 0
            sum += e.probs[i];     // 0^0 = 1 by convention here
            continue;
        }
        sum += e.probs[i] * std::pow(e.values[i], s);
    }
    return sum;
}

double WeightModel::phi(double s) const { return s - std::log2(moment(s)); }

double WeightModel::psi(double s) const { return moment(s) * std::exp2(-s); }

double WeightModel::neg_moment(double s) const {
    if (!(s >= 0.0)) throw std::invalid_argument("neg_moment wants s >= 0");
    if (const auto* ln = as_log_normal())
        return std::exp(ln->sigma2 * s * (s + 1.0) / 2.0);
    if (const auto* tp = as_two_point()) {
        if (tp->sigma >= 1.0) return kInf;
        return 0.5 * (std::pow(1.0 - tp->sigma, -s) + std::pow(1.0 + tp->sigma, -s));
    }
    const auto& e = *as_empirical();
    if (s == 0.0) return 1.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < e.values.size(); ++i) {
        if (e.values[i] == 0.0) {
            if (e.probs[i] > 0.0) return kInf;
            continue;
        }
        sum += e.probs[i] * std::pow(e.values[i], -s);
    }
    return sum;
}

double WeightModel::w_log2w() const {
    if (const auto* ln = as_log_normal())
        return ln->sigma2 / (2.0 * std::numbers::ln2);
    if (const auto* tp = as_two_point())
        return 0.5 * (xlog2x(1.0 - tp->sigma) + xlog2x(1.0 + tp->sigma));
    const auto& e = *as_empirical();
    double sum = 0.0;
    for (std::size_t i = 0; i < e.values.size(); ++i)
        sum += e.probs[i] * xlog2x(e.values[i]);
    return sum;
}

MomentReport WeightModel::moment_report(double s) const {
    MomentReport r;
    r.s = s;
    r.m = moment(s);
    r.phi = phi(s);
    r.psi = psi(s);
    r.neg_m = neg_moment(std::abs(s));
    return r;
}

ValidationReport WeightModel::validate() const {
    ValidationReport r;

    if (is_log_normal() || is_two_point()) {
        r.mean = 1.0; // both families are mean-one by construction
    } else {
        const auto& e = *as_empirical();
        double m = 0.0;
        for (std::size_t i = 0; i < e.values.size(); ++i) m += e.probs[i] * e.values[i];
        r.mean = m;
    }
    r.mean_one_ok = std::abs(r.mean - 1.0) <= 1e-9;

    if (const auto* tp = as_two_point()) {
        r.positive_ok = tp->sigma < 1.0;
    } else if (is_log_normal()) {
        r.positive_ok = true;
    } else {
        const auto& e = *as_empirical();
        r.positive_ok = true;
        for (std::size_t i = 0; i < e.values.size(); ++i)
            if (e.probs[i] > 0.0 && e.values[i] <= 0.0) r.positive_ok = false;
    }

    r.w_log2w = w_log2w();
    r.cascade_ok = std::isfinite(r.w_log2w) && r.w_log2w < 1.0;

    std::string msg;
    if (!r.mean_one_ok) msg += "E[W] != 1; ";
    if (!r.positive_ok) msg += "W not strictly positive; ";
    if (!r.cascade_ok) msg += "E[W log2 W] >= 1 (degenerate cascade limit); ";
    if (!msg.empty()) msg.resize(msg.size() - 2);
    r.message = msg;
    return r;
}

double WeightModel::sample(RandomStream& stream) const {
    if (const auto* ln = as_log_normal()) {
        const double sigma = std::sqrt(ln->sigma2);
        return std::exp(sigma * stream.next_gaussian() - ln->sigma2 / 2.0);
    }
    if (const auto* tp = as_two_point())
        return stream.next_uniform() <= 0.5 ? 1.0 - tp->sigma : 1.0 + tp->sigma;
    const auto& e = *as_empirical();
    const double u = stream.next_uniform();
    double cum = 0.0;
    for (std::size_t i = 0; i < e.values.size(); ++i) {
        cum += e.probs[i];
        if (u <= cum) return e.values[i];
    }
    return e.values.back(); // guard against accumulated rounding
}

double WeightModel::sample_at(std::uint64_t seed, std::uint32_t level,
                              std::uint64_t index) const {
    if (const auto* ln = as_log_normal()) {
        const double sigma = std::sqrt(ln->sigma2);
        const double g = rng_gaussian(seed, RngLane::cell_weight, level, index);
        return std::exp(sigma * g - ln->sigma2 / 2.0);
    }
    const double u = rng_uniform(seed, RngLane::cell_weight, level, index);
    if (const auto* tp = as_two_point())
        return u <= 0.5 ? 1.0 - tp->sigma : 1.0 + tp->sigma;
    const auto& e = *as_empirical();
    double cum = 0.0;
    for (std::size_t i = 0; i < e.values.size(); ++i) {
        cum += e.probs[i];
        if (u <= cum) return e.values[i];
    }
    return e.values.back();
}

std::string WeightModel::describe() const {
    if (const auto* ln = as_log_normal())
        return "family=lognormal sigma2=" + format_double(ln->sigma2);
    if (const auto* tp = as_two_point())
        return "family=twopoint sigma=" + format_double(tp->sigma);
    const auto& e = *as_empirical();
    std::string out = "family=empirical values=";
    for (std::size_t i = 0; i < e.values.size(); ++i) {
        if (i) out += ',';
        out += format_double(e.values[i]);
    }
    out += " probs=";
    for (std::size_t i = 0; i < e.probs.size(); ++i) {
        if (i) out += ',';
        out += format_double(e.probs[i]);
    }
    return out;
}

double lognormal_moment_quadrature(double sigma2, double s) {
    // E[W^s] = int exp(s*(sigma*y - sigma2/2)) dPhi(y); the integrand peaks
    // at y = s*sigma and decays like a Gaussian, so a +-14 window around the
    // peak holds everything above machine precision.
    const double sigma = std::sqrt(sigma2);
    const double center = s * sigma;
    const double h = 0.25;
    const double half_width = 14.0;
    const auto integrand = [&](double y) {
        return std::exp(s * (sigma * y - sigma2 / 2.0)) *
               std::exp(-y * y / 2.0) / std::sqrt(2.0 * std::numbers::pi);
    };
    const int steps = int(2.0 * half_width / h);
    double sum = 0.5 * (integrand(center - half_width) + integrand(center + half_width));
    for (int i = 1; i < steps; ++i) sum += integrand(center - half_width + h * i);
    return sum * h;
}

namespace {

WeightModel empirical_from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open empirical CSV: " + path);
    std::vector<double> values, probs;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string trimmed = line;
        trimmed.erase(0, trimmed.find_first_not_of(" \t"));
        if (trimmed.empty() || trimmed[0] == '#') continue;
        const auto comma = trimmed.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("empirical CSV row needs 'value,probability': " + line);
        const std::string a = trimmed.substr(0, comma);
        const std::string b = trimmed.substr(comma + 1);
        if (first) {
            first = false;
            // allow one header row
            try {
                parse_real(a, "value");
            } catch (const std::invalid_argument&) {
                continue;
            }
        }
        values.push_back(parse_real(a, "value"));
        probs.push_back(parse_real(b, "probability"));
    }
    return WeightModel::empirical(std::move(values), std::move(probs));
}

} // namespace

WeightModel parse_weight_model(const std::string& spec) {
    std::string family;
    double sigma2 = -1.0, sigma = -1.0;
    std::string file;
    for (const auto& [key, value] : split_spec(spec)) {
        if (key == "family") family = value;
        else if (key == "sigma2") sigma2 = parse_real(value, "sigma2");
        else if (key == "sigma") sigma = parse_real(value, "sigma");
        else if (key == "file") file = value;
        else throw std::invalid_argument("unknown model key '" + key + "'");
    }
    if (family == "lognormal") {
        if (sigma2 < 0.0) throw std::invalid_argument("lognormal model needs sigma2=");
        return WeightModel::log_normal(sigma2);
    }
    if (family == "twopoint") {
        if (sigma < 0.0) throw std::invalid_argument("twopoint model needs sigma=");
        return WeightModel::two_point(sigma);
    }
    if (family == "empirical") {
        if (file.empty()) throw std::invalid_argument("empirical model needs file=");
        return empirical_from_csv(file);
    }
    throw std::invalid_argument("model family must be lognormal, twopoint, or empirical");
}

} // namespace kpz1d
