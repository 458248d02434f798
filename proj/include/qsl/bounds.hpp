#pragma once

#include <optional>
#include <utility>

#include "qsl/dynamics.hpp"

namespace qsl {

enum class BoundKind { ML, MT, WML, WMT, G };

const char* to_string(BoundKind k);

struct BoundEvaluation {
    BoundKind kind;
    double t;
    double value;
};

struct MtComponents {
    double variance;    // Delta Omega^2 in the initial state
    double r_value;     // R(t)
    double denom;       // Tr[e^{-Gamma t} rho(0)]
    double gamma_phi1;
};

inline constexpr double kRadicandClamp = 1e-12;

BoundEvaluation f_ml(const EigenbasisState& state, const ShiftedSpectrum& spec, double t);

MtComponents mt_components(const EigenbasisState& state, const ShiftedSpectrum& spec, double t);

// F_MT^2 = (-R t + var t^2 e^{-gamma_phi1 t}) / denom^2
double mt_radicand(const MtComponents& c, double t);

BoundEvaluation f_mt(const EigenbasisState& state, const ShiftedSpectrum& spec, double t);

struct WeakBounds {
    BoundEvaluation wml;
    BoundEvaluation wmt;
};

WeakBounds f_weak(const EigenbasisState& state, const ShiftedSpectrum& spec, double t);

// Two-level geometric functional; nu -> 0 handled by its Taylor expansion.
BoundEvaluation f_g_two_level(double mu, double nu, double alpha, double t);

// Smallest t in (0, horizon] with F_kind(t) = pi/2. kind must not be G.
std::optional<double> tau_bound(BoundKind kind, const EigenbasisState& state, const ShiftedSpectrum& spec,
                                double horizon);

std::optional<double> tau_comb(const EigenbasisState& state, const ShiftedSpectrum& spec, double horizon);

// Root-solved geometric time on (0, horizon].
std::optional<double> tau_g(double mu, double nu, double alpha, double horizon);

// ln(tan(alpha + pi nu / (2 rho)) / tan alpha) / nu; absent when the argument leaves (0, pi/2).
std::optional<double> tau_g_closed_form(double mu, double nu, double alpha);

}  // namespace qsl
