#include "qsl/models.hpp"

#include <cmath>
#include <stdexcept>

#include "qsl/error.hpp"

namespace qsl {

namespace {

constexpr double kHalfPi = M_PI / 2.0;

void check_angles(const StateAngles& s) {
    if (!(s.alpha > 0 && s.alpha <= kHalfPi))
        throw Error(ErrorKind::InvalidArgument, "alpha outside (0, pi/2]");
    if (!std::isfinite(s.phi)) throw Error(ErrorKind::InvalidArgument, "phi must be finite");
}

bool agree(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)); }

}  // namespace

TwoLevelModel build_two_level(const TwoLevelParams& p) {
    if (!(p.xi > 0)) throw Error(ErrorKind::InvalidArgument, "xi must be positive");
    const cplx diag = std::cos(p.vartheta) * std::polar(1.0, p.varrho);
    const double sr = std::sin(p.varrho);
    TwoLevelModel m;
    m.h.resize(2, 2);
    m.h << diag, sr * std::sin(p.beta_angle), sr * std::cos(p.beta_angle), -diag;
    m.h *= p.xi;

    cplx root = std::sqrt(diag * diag + 0.5 * sr * sr * std::sin(2.0 * p.beta_angle));
    if (root.real() == 0.0 && root.imag() < 0) root = -root;
    const cplx kappa = -p.xi * root;
    const cplx lambda_plus = -2.0 * kappa;
    m.canonical = {lambda_plus.real(), lambda_plus.imag()};
    return m;
}

TwoLevelSystem two_level_system(const TwoLevelCanonical& c, const StateAngles& s) {
    check_angles(s);
    if (c.mu == 0.0 && c.nu == 0.0) throw Error(ErrorKind::InvalidArgument, "(mu, nu) = (0, 0)");
    // E = omega - i gamma: lambda_- = 0, lambda_+ = mu + i nu has gamma = -nu
    const bool plus_first = c.mu < 0 || (c.mu == 0.0 && c.nu < 0);
    const cplx cm = std::cos(s.alpha);
    const cplx cp = std::sin(s.alpha) * std::polar(1.0, s.phi);
    TwoLevelSystem sys;
    if (plus_first) {
        sys.spec = make_spectrum({c.mu, 0.0}, {-c.nu, 0.0});
        sys.state = make_state({cp, cm});
        sys.minus_index = 1;
    } else {
        sys.spec = make_spectrum({0.0, c.mu}, {0.0, -c.nu});
        sys.state = make_state({cm, cp});
        sys.minus_index = 0;
    }
    return sys;
}

// Both closed forms hold as printed on one half-plane; the relabelling
// (mu, nu, alpha) -> (-mu, -nu, pi/2 - alpha) maps the other half onto it.
double two_level_ml_closed(double mu, double nu, double alpha, double t) {
    if (mu < 0) return two_level_ml_closed(-mu, -nu, kHalfPi - alpha, t);
    const double s2 = std::pow(std::sin(alpha), 2), c2 = std::pow(std::cos(alpha), 2);
    const double e = std::exp(-nu * t);
    return s2 * mu * t / (c2 * e + s2);
}

double two_level_mt_closed(double mu, double nu, double alpha, double t) {
    if (nu > 0) return two_level_mt_closed(-mu, -nu, kHalfPi - alpha, t);
    const double s2 = std::pow(std::sin(alpha), 2), c2 = std::pow(std::cos(alpha), 2);
    const double e = std::exp(-nu * t);
    const double rad = 2 * nu * t * s2 * s2 - 2 * nu * t * e * s2 * c2 + mu * mu * t * t * s2 * c2 * e;
    return std::sqrt(rad) / (c2 * e + s2);
}

TwoLevelBounds two_level_bounds(const TwoLevelCanonical& c, const StateAngles& s, double t) {
    const TwoLevelSystem sys = two_level_system(c, s);
    TwoLevelBounds b;
    b.ml = f_ml(sys.state, sys.spec, t).value;
    b.mt = f_mt(sys.state, sys.spec, t).value;
    b.g = f_g_two_level(c.mu, c.nu, s.alpha, t).value;

    const double ml_cf = two_level_ml_closed(c.mu, c.nu, s.alpha, t);
    const double mt_cf = two_level_mt_closed(c.mu, c.nu, s.alpha, t);
    if (!agree(b.ml, ml_cf) || !agree(b.mt, mt_cf))
        throw std::logic_error("two-level pipeline disagrees with closed form at t = " + std::to_string(t));
    return b;
}

const char* to_string(WptRegime r) {
    switch (r) {
        case WptRegime::PTSymmetric: return "PTSymmetric";
        case WptRegime::ExceptionalPoint: return "ExceptionalPoint";
        case WptRegime::PTBroken: return "PTBroken";
    }
    return "?";
}

WptModel build_wpt(const WptParams& p) {
    if (!(p.eta >= 0) || !(p.kappa >= 0) || !std::isfinite(p.sigma_res))
        throw Error(ErrorKind::InvalidArgument, "eta and kappa must be nonnegative");
    const cplx i(0.0, 1.0);
    WptModel m;
    m.h.resize(3, 3);
    m.h << p.sigma_res + i * p.eta, p.kappa, 0.0,
           p.kappa, p.sigma_res, p.kappa,
           0.0, p.kappa, p.sigma_res - i * p.eta;
    const double two_k2 = 2.0 * p.kappa * p.kappa, e2 = p.eta * p.eta;
    if (std::abs(two_k2 - e2) <= 1e-12 * std::max({two_k2, e2, 1.0}))
        m.regime = WptRegime::ExceptionalPoint;
    else
        m.regime = two_k2 > e2 ? WptRegime::PTSymmetric : WptRegime::PTBroken;
    return m;
}

double wpt_tau_min(const WptParams& p) {
    const double gap2 = 2.0 * p.kappa * p.kappa - p.eta * p.eta;
    if (!(gap2 > 0)) throw Error(ErrorKind::InvalidArgument, "tau_min needs the PT-symmetric regime");
    return M_PI / (2.0 * std::sqrt(gap2));
}

}  // namespace qsl
