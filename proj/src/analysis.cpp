#include "qsl/analysis.hpp"

#include <cmath>

#include "qsl/error.hpp"

namespace qsl {

namespace {

constexpr double kHalfPi = M_PI / 2.0;

// dF_MT/d(delta) from first-order populations p + delta dp and phases x + delta dx.
double mt_slope(const std::array<double, 3>& x, const std::array<double, 3>& dx,
                const std::array<double, 3>& gamma, const std::array<double, 3>& p,
                const std::array<double, 3>& dp, double tau, double gamma_phi1) {
    double d = 0, dd = 0, g = 0, dg = 0, q = 0, dq = 0;
    for (int n = 0; n < 3; ++n) {
        const double e = std::exp(-gamma[n] * tau);
        d += e * p[n];
        dd += e * dp[n];
        g += gamma[n] * e * p[n];
        dg += gamma[n] * e * dp[n];
        q += gamma[n] * e * e * p[n] * p[n];
        dq += 2.0 * gamma[n] * e * e * p[n] * dp[n];
    }
    const double r = 4.0 * q - 2.0 * g * d;
    const double dr = 4.0 * dq - 2.0 * (dg * d + g * dd);

    double w = 0, dw = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            const double gap = x[i] - x[j];
            w += gap * gap * p[i] * p[j];
            dw += gap * gap * (dp[i] * p[j] + p[i] * dp[j]) + 2.0 * gap * (dx[i] - dx[j]) * p[i] * p[j];
        }
    const double damp = std::exp(-gamma_phi1 * tau);
    const double nrad = -r * tau + w * damp;
    const double dn = -dr * tau + dw * damp;
    const double root = std::sqrt(nrad);
    return dn / (2.0 * root * d) - root * dd / (d * d);
}

// Printed first-order coefficient, written for growth rates; callers pass -gamma'.
double b_printed_growth(double g0, double g2, double alpha, double tau) {
    const double th = M_PI * (1.0 - alpha) / (2.0 * alpha);
    const double e2 = std::exp(g2 * tau);
    const double k1 = 1.0 + e2;
    const double bracket =
        -(g0 - g2) * tau * e2 / (M_PI * k1) - 2.0 * g2 * tau * std::exp((2.0 * g2 - g0) * tau) / (M_PI * k1 * k1) -
        (g0 + g2) * tau * std::exp(-g0 * tau) / (M_PI * k1) +
        M_PI * std::exp(-g0 * tau) / (4.0 * k1) * (1.0 + 1.0 / (alpha * alpha)) -
        M_PI * std::exp((g2 - g0) * tau) / (k1 * k1) - M_PI * (1.0 - e2) * std::cos(th) / (2.0 * k1 * k1) -
        std::sin(th) / k1;
    return k1 / (2.0 * e2) * bracket;
}

}  // namespace

EigenbasisState fis(const ShiftedSpectrum& spec) {
    if (spec.size() < 2) throw Error(ErrorKind::InvalidArgument, "FIS needs at least two levels");
    const double w = spec.omega_n();
    if (!(w > 0)) throw Error(ErrorKind::ZeroBandwidth, "omega_N = 0");
    std::size_t lo = 0, hi = 0;
    for (std::size_t n = 0; n < spec.size(); ++n) {
        if (spec.omega[n] < spec.omega[lo]) lo = n;
        if (spec.omega[n] >= spec.omega[hi]) hi = n;
    }
    std::vector<cplx> c(spec.size(), 0.0);
    c[lo] = std::exp(M_PI * spec.gamma[lo] / (2.0 * w));
    c[hi] = std::exp(M_PI * spec.gamma[hi] / (2.0 * w));
    return make_state(std::move(c));
}

double alpha_ratio(const EigenbasisState& state, const ShiftedSpectrum& spec, double tau) {
    return f_mt(state, spec, tau).value / f_ml(state, spec, tau).value;
}

NearFisBelow near_fis_below_one(const std::array<double, 3>& gamma, double ratio_alpha, double delta,
                                double tau) {
    if (!(ratio_alpha > 0 && ratio_alpha < 1)) throw Error(ErrorKind::InvalidArgument, "ratio_alpha must lie in (0, 1)");
    if (!(delta >= 0 && delta < 0.2)) throw Error(ErrorKind::InvalidArgument, "delta must lie in [0, 0.2)");
    if (!(tau > 0)) throw Error(ErrorKind::InvalidArgument, "tau must be positive");
    if (!(gamma[1] == 0.0 && gamma[2] > 0 && gamma[0] > gamma[2]))
        throw Error(ErrorKind::BadOrdering, "need gamma1 = 0 < gamma2 < gamma0");

    NearFisBelow f;
    f.tau = tau;
    const double x1 = M_PI * (1.0 - ratio_alpha) / (2.0 * ratio_alpha);
    f.x = {0.0, x1, M_PI + x1 - delta * std::sin(x1)};
    f.spectrum = make_spectrum({0.0, f.x[1] / tau, f.x[2] / tau}, {gamma[0], gamma[1], gamma[2]});

    // exact populations: Re S = Im S = 0 at tau plus normalization
    std::array<double, 3> e{};
    for (int n = 0; n < 3; ++n) e[n] = std::exp(-gamma[n] * tau);
    Eigen::Matrix3d a;
    a << e[0], e[1] * std::cos(f.x[1]), e[2] * std::cos(f.x[2]),
         0.0, e[1] * std::sin(f.x[1]), e[2] * std::sin(f.x[2]),
         1.0, 1.0, 1.0;
    const Eigen::Vector3d p = a.fullPivLu().solve(Eigen::Vector3d(0.0, 0.0, 1.0));
    if (!(p.minCoeff() >= 0)) throw Error(ErrorKind::InvalidArgument, "construction leaves the simplex");
    f.state = make_state({std::sqrt(p(0)), std::sqrt(p(1)), std::sqrt(p(2))});

    // expansion with y_n = -gamma_n tau
    const double y2 = std::exp(-gamma[2] * tau);
    const double y20 = std::exp((gamma[0] - gamma[2]) * tau);
    const double kk = 1.0 + y2;
    const double c1 = std::cos(x1);
    const std::array<double, 3> p0{0.0, y2 / kk, 1.0 / kk};
    const std::array<double, 3> dp{y20 / kk, -y2 * (c1 + y20) / (kk * kk), -(y20 - y2 * c1) / (kk * kk)};
    for (int n = 0; n < 3; ++n) f.first_order[n] = p0[n] + delta * dp[n];

    const std::array<double, 3> x0{0.0, x1, M_PI + x1};
    const std::array<double, 3> dx{0.0, 0.0, -std::sin(x1)};
    f.b_coefficient = mt_slope(x0, dx, gamma, p0, dp, tau, f.spectrum.gamma_phi1());
    f.b_printed = b_printed_growth(-gamma[0], -gamma[2], ratio_alpha, tau);
    return f;
}

NearFisAbove near_fis_above_one(double gamma1, double gamma_top, int k, double ratio_alpha, double tau) {
    if (k < 1) throw Error(ErrorKind::InvalidArgument, "k must be at least 1");
    if (!(ratio_alpha > 1)) throw Error(ErrorKind::InvalidArgument, "ratio_alpha must exceed 1");
    if (!(tau > 0)) throw Error(ErrorKind::InvalidArgument, "tau must be positive");
    if (!(gamma1 > 0 && gamma_top > gamma1)) throw Error(ErrorKind::BadOrdering, "need 0 < gamma1 < gamma_{2k+1}");

    const int top = 2 * k + 1;
    const double e1 = std::exp(-gamma1 * tau), et = std::exp(-gamma_top * tau);
    const double a2 = ratio_alpha * ratio_alpha;
    const double den = 1.0 + 1.0 / e1 - (a2 / k) * et / e1;
    if (!(den > 0)) throw Error(ErrorKind::DenominatorSignFlip, "beta denominator is not positive; raise k");

    NearFisAbove f;
    f.tau = tau;
    f.k = k;
    f.beta = 0.25 * (a2 - 1.0) / den;
    const double b = f.beta / (static_cast<double>(k) * k);
    if (!(b < 1)) throw Error(ErrorKind::DenominatorSignFlip, "beta / k^2 reaches one; raise k");

    f.spectrum = make_spectrum({0.0, M_PI / tau, top * M_PI / tau}, {0.0, gamma1, gamma_top});
    // p0 - p1 e1 - p_top e_top = 0
    f.state = make_state({std::sqrt((1.0 - b) * e1 + b * et), std::sqrt(1.0 - b), std::sqrt(b)});

    f.f_ml_predicted = kHalfPi + M_PI * (a2 - 1.0) * (et / e1) / (4.0 * k * (1.0 + 1.0 / e1));
    f.f_mt_predicted = kHalfPi * std::sqrt(1.0 + 4.0 * f.beta * (1.0 + 1.0 / e1));
    return f;
}

const char* to_string(Region r) {
    switch (r) {
        case Region::A: return "A";
        case Region::B: return "B";
        case Region::C: return "C";
    }
    return "?";
}

bool g_no_solution(double mu, double nu, double alpha) {
    const double arg = alpha + M_PI * nu / (2.0 * std::hypot(mu, nu));
    return !(arg > 0 && arg < kHalfPi);
}

RegionScanCell scan_cell(double theta, double alpha, double horizon, double zeta) {
    const TwoLevelCanonical c{zeta * std::cos(theta), zeta * std::sin(theta)};
    const TwoLevelSystem sys = two_level_system(c, {alpha, 2.0 * M_PI});

    RegionScanCell cell{theta, alpha, std::nullopt, std::nullopt, std::nullopt, Region::C, true, true, false};
    double d = 0.0;
    const auto p = sys.state.populations();
    for (std::size_t n = 0; n < p.size(); ++n) d += std::exp(-sys.spec.gamma[n] * horizon) * p[n];
    cell.overflow = !(d >= kUnderflowFloor);

    cell.tau_comb = tau_comb(sys.state, sys.spec, horizon);
    cell.tau_g = tau_g_closed_form(c.mu, c.nu, alpha);
    cell.comb_absent = !cell.tau_comb.has_value();
    cell.g_absent = !cell.tau_g.has_value();
    if (cell.tau_comb && cell.tau_g) {
        cell.delta_tau = *cell.tau_comb - *cell.tau_g;
        cell.region = *cell.delta_tau < 0 ? Region::A : Region::B;
    }
    return cell;
}

std::vector<RegionScanCell> delta_tau_scan(const std::vector<double>& theta_grid,
                                           const std::vector<double>& alpha_grid, double horizon) {
    for (double th : theta_grid)
        if (!(th > 0 && th < M_PI)) throw Error(ErrorKind::InvalidArgument, "theta outside (0, pi)");
    for (double al : alpha_grid)
        if (!(al > 0 && al < kHalfPi)) throw Error(ErrorKind::InvalidArgument, "alpha outside (0, pi/2)");
    std::vector<RegionScanCell> cells;
    cells.reserve(theta_grid.size() * alpha_grid.size());
    for (double th : theta_grid)
        for (double al : alpha_grid) cells.push_back(scan_cell(th, al, horizon));
    return cells;
}

std::vector<double> midpoint_grid(int n, double upper) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "grid needs at least one cell");
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = upper * (i + 0.5) / n;
    return g;
}

}  // namespace qsl
