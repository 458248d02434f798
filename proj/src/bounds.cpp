#include "qsl/bounds.hpp"

#include <cmath>
#include <sstream>

#include "qsl/error.hpp"

namespace qsl {

const char* to_string(BoundKind k) {
    switch (k) {
        case BoundKind::ML: return "ML";
        case BoundKind::MT: return "MT";
        case BoundKind::WML: return "WML";
        case BoundKind::WMT: return "WMT";
        case BoundKind::G: return "G";
    }
    return "?";
}

namespace {

constexpr double kHalfPi = M_PI / 2.0;
constexpr int kTauGrid = 2048;

void check_inputs(const EigenbasisState& state, const ShiftedSpectrum& spec, double t) {
    if (state.size() != spec.size())
        throw Error(ErrorKind::DimensionMismatch, "state and spectrum differ in size");
    if (!(t > 0)) throw Error(ErrorKind::InvalidArgument, "time must be positive");
}

double decay_denominator(const std::vector<double>& p, const ShiftedSpectrum& spec, double t) {
    double d = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) d += std::exp(-spec.gamma[n] * t) * p[n];
    if (!(d >= kUnderflowFloor))
        throw Error(ErrorKind::Underflow, "decay denominator underflows at t = " + std::to_string(t));
    return d;
}

[[noreturn]] void negative_radicand(const char* what, double radicand, double t, const MtComponents& c) {
    std::ostringstream os;
    os << what << " radicand " << radicand << " at t = " << t << " (variance " << c.variance << ", R "
       << c.r_value << ", denom " << c.denom << ", gamma_phi1 " << c.gamma_phi1 << ")";
    throw Error(ErrorKind::NegativeRadicand, os.str());
}

double clamp_radicand(double r) { return r < 0 && r >= -kRadicandClamp ? 0.0 : r; }

double mean_omega(const std::vector<double>& p, const ShiftedSpectrum& spec) {
    double m = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) m += spec.omega[n] * p[n];
    return m;
}

// F values used while scanning: negative radicands count as "not reached".
double scan_value(BoundKind kind, const EigenbasisState& state, const ShiftedSpectrum& spec, double t) {
    try {
        switch (kind) {
            case BoundKind::ML: return f_ml(state, spec, t).value;
            case BoundKind::MT: {
                const MtComponents c = mt_components(state, spec, t);
                return std::sqrt(std::max(0.0, mt_radicand(c, t))) / c.denom;
            }
            case BoundKind::WML: return f_weak(state, spec, t).wml.value;
            case BoundKind::WMT: return f_weak(state, spec, t).wmt.value;
            case BoundKind::G: break;
        }
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Underflow) return std::nan("");
        throw;
    }
    throw Error(ErrorKind::InvalidArgument, "G needs the two-level parameters; use tau_g");
}

}  // namespace

BoundEvaluation f_ml(const EigenbasisState& state, const ShiftedSpectrum& spec, double t) {
    check_inputs(state, spec, t);
    const auto p = state.populations();
    const double d = decay_denominator(p, spec, t);
    double num = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) num += spec.omega[n] * std::exp(-spec.gamma[n] * t) * p[n];
    return {BoundKind::ML, t, t * num / d};
}

MtComponents mt_components(const EigenbasisState& state, const ShiftedSpectrum& spec, double t) {
    check_inputs(state, spec, t);
    const auto p = state.populations();
    const std::size_t n = p.size();
    const double d = decay_denominator(p, spec, t);

    // pair form of the variance; no cancellation for nearly pure states
    double variance = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dw = spec.omega[i] - spec.omega[j];
            variance += dw * dw * p[i] * p[j];
        }

    double quartic = 0.0, weighted = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = std::exp(-spec.gamma[i] * t);
        quartic += spec.gamma[i] * e * e * p[i] * p[i];
        weighted += spec.gamma[i] * e * p[i];
    }
    const double r = 4.0 * quartic - 2.0 * weighted * d;
    return MtComponents{variance, r, d, spec.gamma_phi1()};
}

double mt_radicand(const MtComponents& c, double t) {
    return -c.r_value * t + c.variance * t * t * std::exp(-c.gamma_phi1 * t);
}

BoundEvaluation f_mt(const EigenbasisState& state, const ShiftedSpectrum& spec, double t) {
    const MtComponents c = mt_components(state, spec, t);
    const double rad = clamp_radicand(mt_radicand(c, t));
    if (rad < 0) negative_radicand("MT", rad, t, c);
    return {BoundKind::MT, t, std::sqrt(rad) / c.denom};
}

WeakBounds f_weak(const EigenbasisState& state, const ShiftedSpectrum& spec, double t) {
    const MtComponents c = mt_components(state, spec, t);
    const auto p = state.populations();
    const double gmax = spec.gamma_max();
    const double floor = std::exp(-gmax * t);
    if (!(floor >= kUnderflowFloor))
        throw Error(ErrorKind::Underflow, "e^{-gamma_max t} underflows at t = " + std::to_string(t));

    const double wml = mean_omega(p, spec) * t / floor;
    // -R t <= 2 gamma_max t, so this radicand dominates the MT one
    const double rad = clamp_radicand(c.variance * t * t * std::exp(-c.gamma_phi1 * t) + 2.0 * gmax * t);
    if (rad < 0) negative_radicand("weak MT", rad, t, c);
    return {{BoundKind::WML, t, wml}, {BoundKind::WMT, t, std::sqrt(rad) / floor}};
}

BoundEvaluation f_g_two_level(double mu, double nu, double alpha, double t) {
    if (!(alpha > 0 && alpha <= kHalfPi))
        throw Error(ErrorKind::InvalidArgument, "state angle outside (0, pi/2]");
    if (!(t >= 0)) throw Error(ErrorKind::InvalidArgument, "time must be nonnegative");
    const double rho = std::hypot(mu, nu);
    const double s = std::sin(alpha), c = std::cos(alpha);
    const double x = nu * t;
    double value;
    if (std::abs(x) < 1e-6) {
        // arctan(e^x tan a) - a = x s c + x^2 s c cos(2a) / 2 + O(x^3)
        const double sc = s * c;
        value = rho * t * sc * (1.0 + 0.5 * x * std::cos(2.0 * alpha));
    } else {
        value = (rho / nu) * (std::atan2(std::exp(x) * s, c) - alpha);
    }
    return {BoundKind::G, t, value};
}

std::optional<double> tau_bound(BoundKind kind, const EigenbasisState& state, const ShiftedSpectrum& spec,
                                double horizon) {
    if (state.size() != spec.size())
        throw Error(ErrorKind::DimensionMismatch, "state and spectrum differ in size");
    if (!(horizon > 0)) throw Error(ErrorKind::InvalidArgument, "horizon must be positive");
    if (kind == BoundKind::G) throw Error(ErrorKind::InvalidArgument, "G needs the two-level parameters; use tau_g");

    const double w = spec.omega_n();
    double t0 = w > 0 ? 1e-4 / w : 1e-8 * horizon;
    if (t0 >= horizon) t0 = 1e-8 * horizon;
    auto f = [&](double t) { return scan_value(kind, state, spec, t) - kHalfPi; };

    const double ratio = std::log(horizon / t0) / (kTauGrid - 1);
    double prev_t = t0, prev_f = f(t0);
    if (prev_f >= 0) return t0;
    for (int i = 1; i < kTauGrid; ++i) {
        const double t = i == kTauGrid - 1 ? horizon : t0 * std::exp(ratio * i);
        const double ft = f(t);
        if (std::isnan(ft)) return std::nullopt;
        if (!std::isnan(prev_f) && prev_f < 0 && ft >= 0)
            return find_root_bracketed(f, prev_t, t, 1e-14 * std::max(1.0, t));
        prev_t = t;
        prev_f = ft;
    }
    return std::nullopt;
}

std::optional<double> tau_comb(const EigenbasisState& state, const ShiftedSpectrum& spec, double horizon) {
    const auto ml = tau_bound(BoundKind::ML, state, spec, horizon);
    if (!ml) return std::nullopt;
    const auto mt = tau_bound(BoundKind::MT, state, spec, horizon);
    if (!mt) return std::nullopt;
    return std::max(*ml, *mt);
}

std::optional<double> tau_g(double mu, double nu, double alpha, double horizon) {
    if (!(horizon > 0)) throw Error(ErrorKind::InvalidArgument, "horizon must be positive");
    auto f = [&](double t) { return f_g_two_level(mu, nu, alpha, t).value - kHalfPi; };
    // F_G is increasing in t; walk the upper end outward until it crosses.
    double lo = 0.0, hi = std::min(horizon, 1.0 / std::max(std::hypot(mu, nu), 1e-300));
    while (f(hi) < 0) {
        if (hi >= horizon) return std::nullopt;
        lo = hi;
        hi = std::min(horizon, 2.0 * hi);
    }
    return find_root_bracketed(f, lo, hi, 1e-15);
}

std::optional<double> tau_g_closed_form(double mu, double nu, double alpha) {
    if (!(alpha > 0 && alpha <= kHalfPi))
        throw Error(ErrorKind::InvalidArgument, "state angle outside (0, pi/2]");
    const double rho = std::hypot(mu, nu);
    if (!(rho > 0)) return std::nullopt;
    if (alpha == kHalfPi) return std::nullopt;
    if (nu == 0.0) {
        const double s2 = std::sin(2.0 * alpha);
        return M_PI / (std::abs(mu) * s2);
    }
    const double arg = alpha + M_PI * nu / (2.0 * rho);
    if (!(arg > 0 && arg < kHalfPi)) return std::nullopt;
    // ln(tan(a+d)/tan a) split into sine and cosine ratios, each via log1p
    const double d = arg - alpha;
    const double h = -2.0 * std::pow(std::sin(0.5 * d), 2);
    const double sd = std::sin(d);
    const double num = std::log1p(h + sd / std::tan(alpha));
    const double den = std::log1p(h - sd * std::tan(alpha));
    return (num - den) / nu;
}

}  // namespace qsl
