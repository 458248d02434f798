#include "qsl/biortho.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qsl/error.hpp"

namespace qsl {

namespace {

// Rounding noise around zero after the shift is cleared to exact zeros.
constexpr double kSnap = 1e-12;

std::vector<std::size_t> argsort(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    return idx;
}

}  // namespace

double ShiftedSpectrum::omega_n() const {
    return omega.empty() ? 0.0 : *std::max_element(omega.begin(), omega.end());
}

double ShiftedSpectrum::gamma_max() const {
    return gamma.empty() ? 0.0 : *std::max_element(gamma.begin(), gamma.end());
}

double ShiftedSpectrum::gamma_phi1() const {
    return gamma.size() < 2 ? 0.0 : gamma[order_phi[1]];
}

BiorthogonalSystem build_biorthogonal(const ComplexMatrix& h, double tol) {
    EigResult eig = eig_general(h, tol);
    const std::size_t n = eig.values.size();

    if (n > 1) {
        double width = 0.0, gap = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double d = std::abs(eig.values[i] - eig.values[j]);
                width = std::max(width, d);
                gap = std::min(gap, d);
            }
        if (!(gap > kDegenerateGap * width))
            throw Error(ErrorKind::Degenerate, "eigenvalue gap " + std::to_string(gap) +
                                                   " below threshold for width " +
                                                   std::to_string(width));
    }

    BiorthogonalSystem sys;
    sys.eigenvalues = std::move(eig.values);
    sys.right = std::move(eig.vectors);
    // <psi~_n| is row n of V^{-1}
    const ComplexMatrix inv = sys.right.partialPivLu().inverse();
    sys.left = inv.adjoint();
    return sys;
}

ShiftedSpectrum make_spectrum(std::vector<double> omega, std::vector<double> gamma) {
    if (omega.size() != gamma.size() || omega.empty())
        throw Error(ErrorKind::DimensionMismatch, "omega and gamma lengths differ or are empty");
    for (std::size_t i = 0; i < omega.size(); ++i)
        if (!std::isfinite(omega[i]) || !std::isfinite(gamma[i]))
            throw Error(ErrorKind::InvalidArgument, "non-finite rate");
    if (!std::is_sorted(omega.begin(), omega.end()))
        throw Error(ErrorKind::InvalidArgument, "omega must be ascending");

    const double wmin = omega.front();
    const double gmin = *std::min_element(gamma.begin(), gamma.end());
    double scale = 1.0;
    for (std::size_t i = 0; i < omega.size(); ++i)
        scale = std::max({scale, std::abs(omega[i]), std::abs(gamma[i])});

    ShiftedSpectrum s;
    s.shift = cplx(wmin, -gmin);
    s.omega.resize(omega.size());
    s.gamma.resize(gamma.size());
    for (std::size_t i = 0; i < omega.size(); ++i) {
        double w = omega[i] - wmin, g = gamma[i] - gmin;
        if (w < kSnap * scale) w = 0.0;
        if (g < kSnap * scale) g = 0.0;
        s.omega[i] = w;
        s.gamma[i] = g;
    }
    s.order_phi = argsort(s.gamma);
    return s;
}

ShiftedSpectrum shift_spectrum(const BiorthogonalSystem& sys) {
    std::vector<double> omega(sys.dim()), gamma(sys.dim());
    for (std::size_t i = 0; i < sys.dim(); ++i) {
        omega[i] = sys.eigenvalues[i].real();
        gamma[i] = -sys.eigenvalues[i].imag();
    }
    // Sorting ties in the real part by a relative tolerance can leave
    // sub-rounding inversions; those are snapped to zero offsets here.
    for (std::size_t i = 1; i < omega.size(); ++i) omega[i] = std::max(omega[i], omega[i - 1]);
    return make_spectrum(std::move(omega), std::move(gamma));
}

SpectralOperators spectral_operators(const BiorthogonalSystem& sys, const ShiftedSpectrum& spec) {
    const std::size_t n = sys.dim();
    if (spec.size() != n) throw Error(ErrorKind::DimensionMismatch, "spectrum and system differ in size");
    SpectralOperators ops;
    ops.omega_op = ComplexMatrix::Zero(n, n);
    ops.gamma_op = ComplexMatrix::Zero(n, n);
    ops.projectors.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        ComplexMatrix x = sys.right.col(k) * sys.left.col(k).adjoint();
        ops.omega_op += spec.omega[k] * x;
        ops.gamma_op += spec.gamma[k] * x;
        ops.projectors.push_back(std::move(x));
    }
    return ops;
}

}  // namespace qsl
