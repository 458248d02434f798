#include "qsl/dynamics.hpp"

#include <cmath>
#include <functional>

#include "qsl/error.hpp"

namespace qsl {

namespace {

constexpr double kZeroNorm = 1e-24;

void require_match(const EigenbasisState& state, const ShiftedSpectrum& spec) {
    if (state.size() != spec.size())
        throw Error(ErrorKind::DimensionMismatch, "state and spectrum differ in size");
}

// Unnormalized amplitude sum_n p_n e^{-(gamma_n + i omega_n) t}; also returns K^2.
cplx raw_amplitude(const std::vector<double>& p, const ShiftedSpectrum& spec, double t, double& k2) {
    cplx acc = 0.0;
    k2 = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) {
        const double decay = std::exp(-spec.gamma[n] * t);
        acc += p[n] * decay * std::polar(1.0, -spec.omega[n] * t);
        k2 += p[n] * decay * decay;
    }
    return acc;
}

}  // namespace

std::vector<double> EigenbasisState::populations() const {
    std::vector<double> p(coeffs.size());
    for (std::size_t n = 0; n < coeffs.size(); ++n) p[n] = std::norm(coeffs[n]);
    return p;
}

ComplexVector EigenbasisState::to_vector(const BiorthogonalSystem& sys) const {
    if (coeffs.size() != sys.dim()) throw Error(ErrorKind::DimensionMismatch, "state and system differ in size");
    ComplexVector psi = ComplexVector::Zero(static_cast<Eigen::Index>(sys.dim()));
    for (std::size_t n = 0; n < coeffs.size(); ++n) psi += coeffs[n] * sys.right.col(n);
    return psi;
}

EigenbasisState make_state(std::vector<cplx> coeffs) {
    double norm2 = 0.0;
    for (const auto& c : coeffs) norm2 += std::norm(c);
    if (!(norm2 >= kZeroNorm)) throw Error(ErrorKind::ZeroState, "coefficient norm vanishes");
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& c : coeffs) c *= inv;
    return EigenbasisState{std::move(coeffs)};
}

EigenbasisState decompose_state(const BiorthogonalSystem& sys, const ComplexVector& psi) {
    if (static_cast<std::size_t>(psi.size()) != sys.dim())
        throw Error(ErrorKind::DimensionMismatch, "state vector length differs from system");
    std::vector<cplx> c(sys.dim());
    for (std::size_t n = 0; n < sys.dim(); ++n) c[n] = sys.left.col(n).dot(psi);
    return make_state(std::move(c));
}

SurvivalSample survival_amplitude(const EigenbasisState& state, const ShiftedSpectrum& spec, double t) {
    require_match(state, spec);
    if (!(t >= 0)) throw Error(ErrorKind::InvalidArgument, "time must be nonnegative");
    double k2 = 0.0;
    const cplx raw = raw_amplitude(state.populations(), spec, t, k2);
    const double k = std::sqrt(k2);
    if (!(k >= kUnderflowFloor))
        throw Error(ErrorKind::Underflow, "K(t) underflows at t = " + std::to_string(t));
    return SurvivalSample{t, raw / k, k};
}

double default_horizon(const ShiftedSpectrum& spec) {
    const double w = spec.omega_n();
    if (!(w > 0)) throw Error(ErrorKind::InvalidArgument, "zero bandwidth needs an explicit horizon");
    return 8.0 * M_PI / w;
}

std::optional<double> orthogonality_time(const EigenbasisState& state, const ShiftedSpectrum& spec,
                                         double horizon, double eps) {
    require_match(state, spec);
    if (!(horizon > 0) || !(eps > 0))
        throw Error(ErrorKind::InvalidArgument, "horizon and eps must be positive");

    const std::vector<double> p = state.populations();
    // |S| with underflow mapped to NaN so the scan can stop there
    auto mag = [&](double t) {
        double k2 = 0.0;
        const cplx raw = raw_amplitude(p, spec, t, k2);
        const double k = std::sqrt(k2);
        return k >= kUnderflowFloor ? std::abs(raw) / k : std::nan("");
    };

    auto golden = [&](double a, double b) -> std::optional<double> {
        const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
        double c = b - invphi * (b - a), d = a + invphi * (b - a);
        double fc = mag(c), fd = mag(d);
        for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, b); ++it) {
            if (fc <= fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - invphi * (b - a);
                fc = mag(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + invphi * (b - a);
                fd = mag(d);
            }
        }
        const double tau = fc <= fd ? c : d;
        if (std::min(fc, fd) <= eps && tau > 0) return tau;
        return std::nullopt;
    };

    // Lower bound of |S| on [a, b]: |raw'| <= sum p (omega + gamma) e^{-gamma a} and K is decreasing.
    auto floor_on = [&](double a, double b) {
        double lip = 0.0, k2 = 0.0;
        for (std::size_t n = 0; n < p.size(); ++n) {
            const double e = std::exp(-spec.gamma[n] * a);
            lip += p[n] * (spec.omega[n] + spec.gamma[n]) * e;
            k2 += p[n] * e * e;
        }
        double unused = 0.0;
        const double mid = std::abs(raw_amplitude(p, spec, 0.5 * (a + b), unused));
        return (mid - 0.5 * (b - a) * lip) / std::sqrt(k2);
    };

    // Two zeros can share one grid cell; resample the bracket twice so the earlier one wins.
    std::function<std::optional<double>(double, double, int)> refine = [&](double a, double b, int depth) {
        if (floor_on(a, b) > eps) return std::optional<double>{};
        if (depth == 0) return golden(a, b);
        constexpr int kSub = 64;
        const double h = (b - a) / kSub;
        std::vector<double> f(kSub + 1);
        for (int j = 0; j <= kSub; ++j) f[j] = mag(a + j * h);
        for (int j = 0; j <= kSub; ++j) {
            const bool left_ok = j == 0 || f[j] <= f[j - 1];
            const bool right_ok = j == kSub || f[j] <= f[j + 1];
            if (!left_ok || !right_ok) continue;
            const double lo = a + std::max(0, j - 1) * h, hi = a + std::min(kSub, j + 1) * h;
            if (auto r = refine(lo, hi, depth - 1)) return r;
        }
        return std::optional<double>{};
    };

    const double w = spec.omega_n();
    const double step = w > 0 ? M_PI / (64.0 * w) : horizon / 4096.0;
    const auto count = static_cast<long>(std::ceil(horizon / step));
    auto grid = [&](long i) { return std::min(horizon, static_cast<double>(i) * step); };

    double prev = mag(0.0), cur = mag(grid(1));
    for (long i = 1; i <= count; ++i) {
        if (std::isnan(cur)) return std::nullopt;
        const double next = i < count ? mag(grid(i + 1)) : std::numeric_limits<double>::infinity();
        const bool local_min = cur <= prev && (cur <= next || std::isnan(next));
        if (local_min) {
            if (auto tau = refine(grid(i - 1), std::min(horizon, grid(i) + step), 2)) return tau;
        }
        prev = cur;
        cur = next;
    }
    return std::nullopt;
}

}  // namespace qsl
