#pragma once

#include "qsl/bounds.hpp"

namespace qsl {

struct TwoLevelParams {
    double xi = 1.0;
    double vartheta = 0.0;  // [0, pi]
    double varrho = 0.0;    // [0, 2 pi]
    double beta_angle = 0.0;
};

// lambda_+ = mu + i nu after shifting lambda_- to zero.
struct TwoLevelCanonical {
    double mu = 1.0;
    double nu = 0.0;
};

struct StateAngles {
    double alpha = M_PI / 4;  // (0, pi/2]
    double phi = 2 * M_PI;    // (0, 2 pi]
};

struct TwoLevelModel {
    ComplexMatrix h;
    TwoLevelCanonical canonical;
};

TwoLevelModel build_two_level(const TwoLevelParams& p);

// Spectrum and state for cos(alpha)|lambda_-> + sin(alpha) e^{i phi}|lambda_+>.
// Levels are ordered by omega, so lambda_+ comes first when mu < 0.
struct TwoLevelSystem {
    ShiftedSpectrum spec;
    EigenbasisState state;
    std::size_t minus_index = 0;
};

TwoLevelSystem two_level_system(const TwoLevelCanonical& c, const StateAngles& s);

struct TwoLevelBounds {
    double ml;
    double mt;
    double g;
};

// Pipeline values, checked against the closed forms to 1e-9.
TwoLevelBounds two_level_bounds(const TwoLevelCanonical& c, const StateAngles& s, double t);

// Closed forms in the decay convention; valid for every sign of (mu, nu).
double two_level_ml_closed(double mu, double nu, double alpha, double t);
double two_level_mt_closed(double mu, double nu, double alpha, double t);

enum class WptRegime { PTSymmetric, ExceptionalPoint, PTBroken };

const char* to_string(WptRegime r);

struct WptParams {
    double sigma_res = 1.0;
    double eta = 1.0;
    double kappa = 2.5;
};

struct WptModel {
    ComplexMatrix h;
    WptRegime regime;
};

WptModel build_wpt(const WptParams& p);

// pi / (2 sqrt(2 kappa^2 - eta^2)); PT-symmetric regime only.
double wpt_tau_min(const WptParams& p);

}  // namespace qsl
