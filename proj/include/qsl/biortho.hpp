#pragma once

#include <cstddef>
#include <vector>

#include "qsl/linalg.hpp"

namespace qsl {

// Eigenvalues E_n = omega_n - i gamma_n. Columns of `right` are |psi_n>,
// columns of `left` are |psi~_n>, so left.col(n).dot(right.col(m)) = delta_nm.
struct BiorthogonalSystem {
    std::vector<cplx> eigenvalues;
    ComplexMatrix right;
    ComplexMatrix left;

    std::size_t dim() const { return eigenvalues.size(); }
};

struct ShiftedSpectrum {
    std::vector<double> omega;           // ascending, omega[0] = 0
    std::vector<double> gamma;           // min = 0
    cplx shift{0.0, 0.0};                // omega_min - i gamma_min
    std::vector<std::size_t> order_phi;  // gamma[order_phi[j]] ascending

    std::size_t size() const { return omega.size(); }
    double omega_n() const;     // widest Bohr frequency
    double gamma_max() const;
    double gamma_phi1() const;  // second-smallest decay rate (0 for one level)
};

inline constexpr double kDegenerateGap = 1e-9;

BiorthogonalSystem build_biorthogonal(const ComplexMatrix& h, double tol = kDefaultEigTol);

ShiftedSpectrum shift_spectrum(const BiorthogonalSystem& sys);

// Builds a spectrum from raw rates; subtracts the minima. omega must be ascending.
ShiftedSpectrum make_spectrum(std::vector<double> omega, std::vector<double> gamma);

struct SpectralOperators {
    ComplexMatrix omega_op;
    ComplexMatrix gamma_op;
    std::vector<ComplexMatrix> projectors;
};

SpectralOperators spectral_operators(const BiorthogonalSystem& sys, const ShiftedSpectrum& spec);

}  // namespace qsl
