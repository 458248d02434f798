#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qsl/analysis.hpp"
#include "qsl/error.hpp"
#include "qsl/models.hpp"
#include "qsl/report.hpp"
#include "qsl/sampling.hpp"

using namespace qsl;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

struct Options {
    double kappa = 2.5, eta = 1.0, sigma = 1.0;
    std::vector<double> kappas;
    double mu = 1.0, nu = 0.5, alpha = M_PI / 4, phi = 2 * M_PI;
    int theta_grid = 100, alpha_grid = 100;
    double delta = 0.01, ratio_alpha = 0.8;
    int k = 16;
    std::vector<double> gamma;
    double tau = 1.0;
    std::uint64_t seed = 42;
    std::size_t n = 1000;
    double horizon = 0.0;  // 0 selects a per-command default
    double eps = kDefaultOrthEps;
    int points = 200;
    std::string sampler = "simplex";
    std::string out, format = "csv";
};

int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::Io: return kExitIo;
        case ErrorKind::DefectiveMatrix:
        case ErrorKind::Degenerate:
        case ErrorKind::NoBracket:
        case ErrorKind::Underflow:
        case ErrorKind::NegativeRadicand:
        case ErrorKind::ZeroBandwidth:
        case ErrorKind::DenominatorSignFlip: return kExitNumeric;
        default: return kExitUsage;
    }
}

void emit(const Table& t, const Options& o) {
    std::ostringstream body;
    if (o.format == "json")
        write_json(body, t);
    else
        write_csv(body, t);
    if (o.out.empty() || o.out == "-") {
        std::cout << body.str();
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw Error(ErrorKind::Io, "cannot open " + o.out + " for writing");
    f << body.str();
    f.close();
    if (!f) throw Error(ErrorKind::Io, "write to " + o.out + " failed");
}

Cell maybe(const std::function<double()>& f) {
    try {
        return f();
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::NegativeRadicand && e.kind() != ErrorKind::Underflow) throw;
        return std::monostate{};
    }
}

void wpt_notes(Table& t, const WptParams& p, WptRegime r) {
    t.notes.emplace_back("model", "wpt");
    t.notes.emplace_back("sigma", format_double(p.sigma_res));
    t.notes.emplace_back("eta", format_double(p.eta));
    t.notes.emplace_back("kappa", format_double(p.kappa));
    t.notes.emplace_back("regime", to_string(r));
}

ShiftedSpectrum wpt_spectrum(const WptParams& p, WptRegime& regime) {
    const WptModel m = build_wpt(p);
    regime = m.regime;
    if (m.regime == WptRegime::ExceptionalPoint)
        throw Error(ErrorKind::DefectiveMatrix, "exceptional point: eigenvectors coalesce");
    return shift_spectrum(build_biorthogonal(m.h));
}

std::vector<EigenbasisState> draw_states(const ShiftedSpectrum& spec, const Options& o, double horizon) {
    if (o.sampler == "planted") return sample_orthogonalizing_states(spec, o.n, o.seed, horizon);
    return sample_random_states(spec.size(), o.n, o.seed);
}

const char* sampler_note(const Options& o) {
    return o.sampler == "planted" ? "populations solved for S = 0 at a uniform time in (0, horizon]"
                                  : "populations uniform on the simplex, phases uniform";
}

double default_or(double h, double fallback) { return h > 0 ? h : fallback; }

void cmd_fis(const Options& o) {
    const WptParams p{o.sigma, o.eta, o.kappa};
    WptRegime regime;
    const auto spec = wpt_spectrum(p, regime);
    const auto state = fis(spec);
    const double horizon = default_or(o.horizon, default_horizon(spec));
    const auto tau = orthogonality_time(state, spec, horizon, o.eps);

    Table t;
    wpt_notes(t, p, regime);
    t.notes.emplace_back("tau", tau ? format_double(*tau) : "");
    t.notes.emplace_back("pi_over_omega_n", format_double(M_PI / spec.omega_n()));
    if (tau) {
        t.notes.emplace_back("f_ml", format_double(f_ml(state, spec, *tau).value));
        t.notes.emplace_back("f_mt", format_double(f_mt(state, spec, *tau).value));
    }
    t.columns = {"level", "omega", "gamma", "population", "c_re", "c_im"};
    const auto pops = state.populations();
    for (std::size_t n = 0; n < spec.size(); ++n)
        t.rows.push_back({static_cast<long long>(n), spec.omega[n], spec.gamma[n], pops[n], state.coeffs[n].real(),
                          state.coeffs[n].imag()});
    emit(t, o);
}

void cmd_scatter(const Options& o) {
    const WptParams p{o.sigma, o.eta, o.kappa};
    WptRegime regime;
    const auto spec = wpt_spectrum(p, regime);
    const bool has_band = spec.omega_n() > 0;
    const double horizon = default_or(o.horizon, has_band ? default_horizon(spec) : 50.0);

    std::vector<EigenbasisState> states;
    if (has_band) states.push_back(fis(spec));  // state_id 0
    for (auto& s : draw_states(spec, o, horizon)) states.push_back(std::move(s));
    const auto r = run_scatter(spec, states, horizon, o.eps);

    Table t = scatter_table(r, spec.size());
    wpt_notes(t, p, regime);
    t.notes.emplace_back("seed", std::to_string(o.seed));
    t.notes.emplace_back("sampler", sampler_note(o));
    t.notes.emplace_back("fis_state_id", has_band ? "0" : "");
    t.notes.emplace_back("horizon", format_double(horizon));
    t.notes.emplace_back("eps", format_double(o.eps));
    t.notes.emplace_back("n_states", std::to_string(r.summary.n_states));
    t.notes.emplace_back("n_absent", std::to_string(r.summary.n_absent));
    t.notes.emplace_back("n_violations", std::to_string(r.summary.n_violations));
    t.notes.emplace_back("min_tau", r.summary.min_tau ? format_double(*r.summary.min_tau) : "");
    emit(t, o);
}

void cmd_wpt(const Options& o) {
    const std::vector<double> kappas = o.kappas.empty() ? std::vector<double>{o.kappa} : o.kappas;
    Table t;
    t.notes.emplace_back("model", "wpt");
    t.notes.emplace_back("sigma", format_double(o.sigma));
    t.notes.emplace_back("eta", format_double(o.eta));
    t.notes.emplace_back("seed", std::to_string(o.seed));
    t.notes.emplace_back("sampler", sampler_note(o));
    t.columns = {"kappa", "regime", "omega_n", "tau_min", "tau_fis", "min_tau_random", "n_found", "n_states"};
    for (double k : kappas) {
        const WptParams p{o.sigma, o.eta, k};
        const WptModel m = build_wpt(p);
        std::vector<Cell> row{k, std::string(to_string(m.regime))};
        if (m.regime != WptRegime::PTSymmetric) {
            row.resize(t.columns.size());
            t.rows.push_back(std::move(row));
            continue;
        }
        const auto spec = shift_spectrum(build_biorthogonal(m.h));
        const double horizon = default_or(o.horizon, default_horizon(spec));
        const auto r = run_scatter(spec, draw_states(spec, o, horizon), horizon, o.eps);
        row.emplace_back(spec.omega_n());
        row.emplace_back(wpt_tau_min(p));
        row.push_back(opt(orthogonality_time(fis(spec), spec, horizon, o.eps)));
        row.push_back(opt(r.summary.min_tau));
        row.emplace_back(static_cast<long long>(r.summary.n_states - r.summary.n_absent));
        row.emplace_back(static_cast<long long>(r.summary.n_states));
        t.rows.push_back(std::move(row));
    }
    emit(t, o);
}

void two_level_notes(Table& t, const Options& o) {
    t.notes.emplace_back("model", "two-level");
    t.notes.emplace_back("mu", format_double(o.mu));
    t.notes.emplace_back("nu", format_double(o.nu));
    t.notes.emplace_back("alpha", format_double(o.alpha));
    t.notes.emplace_back("phi", format_double(o.phi));
}

void cmd_bounds(const Options& o) {
    const TwoLevelSystem sys = two_level_system({o.mu, o.nu}, {o.alpha, o.phi});
    const double rho = std::hypot(o.mu, o.nu);
    const double horizon = default_or(o.horizon, 1000.0 / rho);
    Table t;
    two_level_notes(t, o);
    t.notes.emplace_back("horizon", format_double(horizon));
    t.columns = {"quantity", "time"};
    t.rows.push_back({std::string("tau_ml"), opt(tau_bound(BoundKind::ML, sys.state, sys.spec, horizon))});
    t.rows.push_back({std::string("tau_mt"), opt(tau_bound(BoundKind::MT, sys.state, sys.spec, horizon))});
    t.rows.push_back({std::string("tau_wml"), opt(tau_bound(BoundKind::WML, sys.state, sys.spec, horizon))});
    t.rows.push_back({std::string("tau_wmt"), opt(tau_bound(BoundKind::WMT, sys.state, sys.spec, horizon))});
    t.rows.push_back({std::string("tau_comb"), opt(tau_comb(sys.state, sys.spec, horizon))});
    t.rows.push_back({std::string("tau_g"), opt(tau_g_closed_form(o.mu, o.nu, o.alpha))});
    t.rows.push_back({std::string("tau_orth"), opt(orthogonality_time(sys.state, sys.spec, horizon, o.eps))});
    emit(t, o);
}

void cmd_two_level(const Options& o) {
    if (o.points < 1) throw Error(ErrorKind::InvalidArgument, "--points must be positive");
    const TwoLevelSystem sys = two_level_system({o.mu, o.nu}, {o.alpha, o.phi});
    const double horizon = default_or(o.horizon, 4 * M_PI / std::hypot(o.mu, o.nu));
    Table t;
    two_level_notes(t, o);
    t.columns = {"t", "f_ml", "f_mt", "f_g", "abs_s"};
    for (int i = 1; i <= o.points; ++i) {
        const double time = horizon * i / o.points;
        t.rows.push_back({time, maybe([&] { return f_ml(sys.state, sys.spec, time).value; }),
                          maybe([&] { return f_mt(sys.state, sys.spec, time).value; }),
                          f_g_two_level(o.mu, o.nu, o.alpha, time).value,
                          maybe([&] { return std::abs(survival_amplitude(sys.state, sys.spec, time).s); })});
    }
    emit(t, o);
}

void cmd_scan(const Options& o) {
    const double horizon = default_or(o.horizon, 1000.0);
    const auto cells =
        delta_tau_scan(midpoint_grid(o.theta_grid, M_PI), midpoint_grid(o.alpha_grid, M_PI / 2), horizon);
    Table t;
    t.notes.emplace_back("horizon", format_double(horizon));
    t.notes.emplace_back("grid", "cell midpoints; mu' = cos(theta), nu' = sin(theta)");
    t.columns = {"theta", "alpha", "tau_comb", "tau_g", "delta_tau", "region", "g_absent", "comb_absent", "overflow"};
    for (const auto& c : cells)
        t.rows.push_back({c.theta, c.alpha_angle, opt(c.tau_comb), opt(c.tau_g), opt(c.delta_tau),
                          std::string(to_string(c.region)), static_cast<long long>(c.g_absent),
                          static_cast<long long>(c.comb_absent), static_cast<long long>(c.overflow)});
    emit(t, o);
}

void cmd_near_fis(const Options& o) {
    Table t;
    t.notes.emplace_back("ratio_alpha", format_double(o.ratio_alpha));
    t.notes.emplace_back("tau", format_double(o.tau));
    auto state_rows = [&](const ShiftedSpectrum& spec, const EigenbasisState& st) {
        t.columns = {"level", "omega", "gamma", "population"};
        const auto p = st.populations();
        for (std::size_t n = 0; n < spec.size(); ++n)
            t.rows.push_back({static_cast<long long>(n), spec.omega[n], spec.gamma[n], p[n]});
        t.notes.emplace_back("f_ml", format_double(f_ml(st, spec, o.tau).value));
        t.notes.emplace_back("f_mt", format_double(f_mt(st, spec, o.tau).value));
        t.notes.emplace_back("alpha_ratio", format_double(alpha_ratio(st, spec, o.tau)));
        t.notes.emplace_back("abs_s_at_tau", format_double(std::abs(survival_amplitude(st, spec, o.tau).s)));
    };
    if (o.ratio_alpha < 1) {
        const std::vector<double> g = o.gamma.empty() ? std::vector<double>{0.6, 0.0, 0.3} : o.gamma;
        if (g.size() != 3) throw Error(ErrorKind::InvalidArgument, "--gamma needs g0 g1 g2 below one");
        const auto f = near_fis_below_one({g[0], g[1], g[2]}, o.ratio_alpha, o.delta, o.tau);
        t.notes.emplace_back("family", "below-one");
        t.notes.emplace_back("delta", format_double(o.delta));
        t.notes.emplace_back("b_coefficient", format_double(f.b_coefficient));
        t.notes.emplace_back("b_printed", format_double(f.b_printed));
        state_rows(f.spectrum, f.state);
    } else {
        const std::vector<double> g = o.gamma.empty() ? std::vector<double>{0.2, 0.5} : o.gamma;
        if (g.size() != 2) throw Error(ErrorKind::InvalidArgument, "--gamma needs g1 g_top above one");
        const auto f = near_fis_above_one(g[0], g[1], o.k, o.ratio_alpha, o.tau);
        t.notes.emplace_back("family", "above-one");
        t.notes.emplace_back("k", std::to_string(o.k));
        t.notes.emplace_back("beta", format_double(f.beta));
        t.notes.emplace_back("f_ml_predicted", format_double(f.f_ml_predicted));
        t.notes.emplace_back("f_mt_predicted", format_double(f.f_mt_predicted));
        state_rows(f.spectrum, f.state);
    }
    emit(t, o);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum speed limit bounds for non-Hermitian systems"};
    app.require_subcommand(1);
    Options o;

    auto add_io = [&](CLI::App* c) {
        c->add_option("--out", o.out, "Output path (default stdout)");
        c->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    };
    auto add_wpt = [&](CLI::App* c) {
        c->add_option("--kappa", o.kappa, "Coupling rate")->check(CLI::NonNegativeNumber);
        c->add_option("--eta", o.eta, "Gain/loss rate")->check(CLI::NonNegativeNumber);
        c->add_option("--sigma", o.sigma, "Resonant frequency");
    };
    auto add_two_level = [&](CLI::App* c) {
        c->add_option("--mu", o.mu, "Re of the eigenvalue gap");
        c->add_option("--nu", o.nu, "Im of the eigenvalue gap");
        c->add_option("--alpha", o.alpha, "State angle in (0, pi/2]");
        c->add_option("--phi", o.phi, "Relative phase");
    };
    auto add_run = [&](CLI::App* c) {
        c->add_option("--seed", o.seed, "Sampler seed");
        c->add_option("--n", o.n, "Number of random states")->check(CLI::PositiveNumber);
        c->add_option("--sampler", o.sampler, "simplex or planted")->check(CLI::IsMember({"simplex", "planted"}));
    };
    auto add_time = [&](CLI::App* c) {
        c->add_option("--horizon", o.horizon, "Time horizon")->check(CLI::PositiveNumber);
        c->add_option("--eps", o.eps, "Orthogonality tolerance on |S|")->check(CLI::PositiveNumber);
    };

    auto* fis_cmd = app.add_subcommand("fis", "Fastest initial state of the WPT system");
    add_wpt(fis_cmd), add_time(fis_cmd), add_io(fis_cmd);

    auto* scatter_cmd = app.add_subcommand("scatter", "Orthogonality times and bounds for random WPT states");
    add_wpt(scatter_cmd), add_run(scatter_cmd), add_time(scatter_cmd), add_io(scatter_cmd);

    auto* wpt_cmd = app.add_subcommand("wpt", "Shortest orthogonality time across coupling rates");
    wpt_cmd->add_option("--kappa", o.kappas, "One or more coupling rates")->check(CLI::NonNegativeNumber);
    wpt_cmd->add_option("--eta", o.eta, "Gain/loss rate")->check(CLI::NonNegativeNumber);
    wpt_cmd->add_option("--sigma", o.sigma, "Resonant frequency");
    add_run(wpt_cmd), add_time(wpt_cmd), add_io(wpt_cmd);

    auto* bounds_cmd = app.add_subcommand("bounds", "Bound times for a canonical two-level system");
    add_two_level(bounds_cmd), add_time(bounds_cmd), add_io(bounds_cmd);

    auto* two_cmd = app.add_subcommand("two-level", "Bound functionals over time for a two-level system");
    add_two_level(two_cmd), add_time(two_cmd), add_io(two_cmd);
    two_cmd->add_option("--points", o.points, "Number of time samples")->check(CLI::PositiveNumber);

    auto* scan_cmd = app.add_subcommand("scan-regions", "Sign of tau_comb - tau_G over (theta, alpha)");
    scan_cmd->add_option("--theta-grid", o.theta_grid, "Cells over theta in (0, pi)")->check(CLI::PositiveNumber);
    scan_cmd->add_option("--alpha-grid", o.alpha_grid, "Cells over alpha in (0, pi/2)")->check(CLI::PositiveNumber);
    scan_cmd->add_option("--horizon", o.horizon, "Time horizon")->check(CLI::PositiveNumber);
    add_io(scan_cmd);

    auto* near_cmd = app.add_subcommand("near-fis", "Near-FIS families on either side of ratio one");
    near_cmd->add_option("--ratio-alpha", o.ratio_alpha, "Target F_MT / F_ML ratio")->check(CLI::PositiveNumber);
    near_cmd->add_option("--delta", o.delta, "Perturbation below one");
    near_cmd->add_option("--k", o.k, "Mode index above one")->check(CLI::PositiveNumber);
    near_cmd->add_option("--gamma", o.gamma, "Decay rates: g0 g1 g2 below one, g1 g_top above one");
    near_cmd->add_option("--tau", o.tau, "Orthogonality time")->check(CLI::PositiveNumber);
    add_io(near_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitUsage;
    }

    try {
        if (*fis_cmd) cmd_fis(o);
        if (*scatter_cmd) cmd_scatter(o);
        if (*wpt_cmd) cmd_wpt(o);
        if (*bounds_cmd) cmd_bounds(o);
        if (*two_cmd) cmd_two_level(o);
        if (*scan_cmd) cmd_scan(o);
        if (*near_cmd) cmd_near_fis(o);
    } catch (const Error& e) {
        std::fprintf(stderr, "qsl: %s\n", e.what());
        return exit_code(e.kind());
    }
    return 0;
}
