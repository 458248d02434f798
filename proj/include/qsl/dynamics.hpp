#pragma once

#include <optional>
#include <vector>

#include "qsl/biortho.hpp"

namespace qsl {

// Coefficients in the right-eigenvector basis, sum |c_n|^2 = 1.
struct EigenbasisState {
    std::vector<cplx> coeffs;

    std::size_t size() const { return coeffs.size(); }
    std::vector<double> populations() const;
    ComplexVector to_vector(const BiorthogonalSystem& sys) const;
};

// Normalizes raw coefficients; ZeroState when the norm vanishes.
EigenbasisState make_state(std::vector<cplx> coeffs);

struct SurvivalSample {
    double t = 0.0;
    cplx s{1.0, 0.0};
    double k = 1.0;
};

inline constexpr double kDefaultOrthEps = 1e-8;
inline constexpr double kUnderflowFloor = 1e-150;

EigenbasisState decompose_state(const BiorthogonalSystem& sys, const ComplexVector& psi);

SurvivalSample survival_amplitude(const EigenbasisState& state, const ShiftedSpectrum& spec, double t);

// 8 pi / omega_N; InvalidArgument when the spectrum has no Bohr frequency.
double default_horizon(const ShiftedSpectrum& spec);

// First zero of |S| on (0, horizon], or nullopt.
std::optional<double> orthogonality_time(const EigenbasisState& state, const ShiftedSpectrum& spec,
                                         double horizon, double eps = kDefaultOrthEps);

}  // namespace qsl
