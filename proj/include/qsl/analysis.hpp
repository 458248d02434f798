#pragma once

#include <array>
#include <optional>
#include <vector>

#include "qsl/models.hpp"

namespace qsl {

// Two-level support on argmin/argmax omega with |c_n| ~ exp(pi gamma_n / (2 omega_N)).
EigenbasisState fis(const ShiftedSpectrum& spec);

// F_MT(tau) / F_ML(tau). Below one the MT bound is the tighter of the two.
double alpha_ratio(const EigenbasisState& state, const ShiftedSpectrum& spec, double tau);

struct NearFisBelow {
    ShiftedSpectrum spectrum;  // omega = (0, x1, x2) / tau
    EigenbasisState state;     // exactly orthogonal at tau
    double tau;
    std::array<double, 3> x;
    std::array<double, 3> first_order;  // p0 + delta p1 from the perturbative expansion
    double b_coefficient;               // d F_MT / d delta at delta = 0
    double b_printed;                   // printed closed expression, rates mapped to decay
};

// gamma = (g0, g1, g2) with g1 = 0 < g2 < g0; 0 < ratio_alpha < 1; 0 <= delta < 0.2.
NearFisBelow near_fis_below_one(const std::array<double, 3>& gamma, double ratio_alpha, double delta,
                                double tau);

struct NearFisAbove {
    ShiftedSpectrum spectrum;  // omega = (0, pi, (2k+1) pi) / tau
    EigenbasisState state;
    double tau;
    int k;
    double beta;
    double f_ml_predicted;
    double f_mt_predicted;
};

// Levels {0, 1, 2k+1} with decay rates 0 < gamma1 < gamma_top; ratio_alpha > 1.
NearFisAbove near_fis_above_one(double gamma1, double gamma_top, int k, double ratio_alpha, double tau);

enum class Region { A, B, C };

const char* to_string(Region r);

struct RegionScanCell {
    double theta;
    double alpha_angle;
    std::optional<double> tau_comb;
    std::optional<double> tau_g;
    std::optional<double> delta_tau;
    Region region;
    bool g_absent;
    bool comb_absent;
    bool overflow;  // decay underflowed inside the horizon
};

// alpha + pi nu / (2 sqrt(mu^2 + nu^2)) outside (0, pi/2)
bool g_no_solution(double mu, double nu, double alpha);

RegionScanCell scan_cell(double theta, double alpha, double horizon, double zeta = 1.0);

// Row-major over theta then alpha.
std::vector<RegionScanCell> delta_tau_scan(const std::vector<double>& theta_grid,
                                           const std::vector<double>& alpha_grid, double horizon);

// Cell midpoints of (0, upper) split into n cells.
std::vector<double> midpoint_grid(int n, double upper);

}  // namespace qsl
