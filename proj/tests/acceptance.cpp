// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qsl/analysis.hpp"
#include "qsl/bounds.hpp"
#include "qsl/error.hpp"
#include "qsl/models.hpp"
#include "qsl/sampling.hpp"

using namespace qsl;

namespace {

constexpr double kHalfPi = M_PI / 2;

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

ShiftedSpectrum random_spectrum(std::mt19937_64& rng, int n, double gmax) {
    std::uniform_real_distribution<double> w(0.5, 10.0), g(0.0, gmax);
    std::vector<double> omega(n), gamma(n);
    omega[0] = 0.0;
    for (int i = 1; i < n; ++i) omega[i] = w(rng);
    std::sort(omega.begin(), omega.end());
    for (auto& x : gamma) x = g(rng);
    return make_spectrum(omega, gamma);
}

ShiftedSpectrum wpt_spectrum(double kappa) {
    return shift_spectrum(build_biorthogonal(build_wpt({1.0, 1.0, kappa}).h));
}

Outcome fis_saturation() {
    std::mt19937_64 rng(1);
    double worst_tau = 0, worst_ml = 0, worst_mt = 0;
    int mt_fail = 0, mt_fail_sum_mismatch = 0;
    double formula_err = 0;
    for (int i = 0; i < 200; ++i) {
        const auto spec = random_spectrum(rng, 2 + i % 4, 3.0);
        const auto f = fis(spec);
        const double tmin = M_PI / spec.omega_n();
        const auto tau = orthogonality_time(f, spec, default_horizon(spec));
        worst_tau = std::max(worst_tau, tau ? std::abs(*tau - tmin) : INFINITY);
        worst_ml = std::max(worst_ml, std::abs(f_ml(f, spec, tmin).value - kHalfPi));
        const double mt = f_mt(f, spec, tmin).value;
        worst_mt = std::max(worst_mt, std::abs(mt - kHalfPi));

        std::size_t a = 0, b = 0;
        for (std::size_t n = 0; n < spec.size(); ++n) {
            if (spec.omega[n] == 0.0) a = n;
            if (spec.omega[n] == spec.omega_n()) b = n;
        }
        const double excess = spec.gamma[a] + spec.gamma[b] - spec.gamma_phi1();
        formula_err = std::max(formula_err, std::abs(mt - kHalfPi * std::exp(excess * tmin / 2)));
        if (std::abs(mt - kHalfPi) > 1e-8) {
            ++mt_fail;
            if (std::abs(excess) > 1e-12) ++mt_fail_sum_mismatch;
        }
    }
    const bool pass = worst_tau <= 1e-8 && worst_ml <= 1e-8 && worst_mt <= 1e-8;
    return {pass, fmt("max|tau-pi/w|=%.2e max|f_ml-pi/2|=%.2e max|f_mt-pi/2|=%.2e; f_mt misses on %d spectra, "
                      "%d of them with g_a+g_b != g_phi1; f_mt vs (pi/2)exp((g_a+g_b-g_phi1)tau/2) max err %.2e",
                      worst_tau, worst_ml, worst_mt, mt_fail, mt_fail_sum_mismatch, formula_err)};
}

struct Corpus {
    ShiftedSpectrum spec;
    std::vector<EigenbasisState> states;
};

Corpus wpt_corpus() { return {wpt_spectrum(2.5), sample_random_states(3, 10000, 42)}; }

// Simplex states almost never reach S = 0 exactly, so the literal corpus is paired
// with states built to vanish at a random time.
Outcome bound_theorem(const Corpus& c) {
    const auto planted = sample_orthogonalizing_states(c.spec, 10000, 42, default_horizon(c.spec));
    double min_tau = INFINITY, worst_ml = INFINITY, worst_mt = INFINITY;
    int found[2] = {0, 0}, violations = 0;
    for (int which = 0; which < 2; ++which) {
        for (const auto& st : which == 0 ? c.states : planted) {
            const auto tau = orthogonality_time(st, c.spec, default_horizon(c.spec));
            if (!tau) continue;
            ++found[which];
            min_tau = std::min(min_tau, *tau);
            const double ml = f_ml(st, c.spec, *tau).value;
            const double mt = f_mt(st, c.spec, *tau).value;
            worst_ml = std::min(worst_ml, ml);
            worst_mt = std::min(worst_mt, mt);
            if (ml < kHalfPi - 1e-8 || mt < kHalfPi - 1e-8) ++violations;
        }
    }
    const double floor = M_PI / (2 * std::sqrt(11.5));
    const bool pass = violations == 0 && found[0] + found[1] > 0 && min_tau >= floor - 1e-6;
    return {pass, fmt("simplex corpus: %d/%zu orthogonalize; planted corpus: %d/%zu; violations=%d; min f_ml=%.10f "
                      "min f_mt=%.10f; min tau=%.8f (floor %.8f)",
                      found[0], c.states.size(), found[1], planted.size(), violations, worst_ml, worst_mt, min_tau,
                      floor)};
}

Outcome weak_chains(const Corpus& c) {
    // the WPT corpus has all gamma' equal; a dissipative copy must be strict
    std::mt19937_64 rng(3);
    std::vector<ShiftedSpectrum> dissipative;
    for (int i = 0; i < 50; ++i) dissipative.push_back(random_spectrum(rng, 3, 3.0));
    for (auto& s : dissipative)
        if (s.gamma_max() < 0.1) s = make_spectrum(s.omega, {0.0, 0.5, 1.0});

    long chain_fail = 0, eq_fail = 0, strict_fail = 0, samples = 0, skipped = 0;
    for (std::size_t i = 0; i < c.states.size(); ++i) {
        const auto& st = c.states[i];
        for (int pass = 0; pass < 2; ++pass) {
            const auto& spec = pass == 0 ? c.spec : dissipative[i % dissipative.size()];
            const bool equal = spec.gamma_max() == 0.0;
            for (int j = 1; j <= 32; ++j) {
                const double t = 2 * M_PI / spec.omega_n() * j / 32;
                ++samples;
                const auto w = f_weak(st, spec, t);
                const double ml = f_ml(st, spec, t).value;
                double mt;
                try {
                    mt = f_mt(st, spec, t).value;
                } catch (const Error& e) {
                    if (e.kind() != ErrorKind::NegativeRadicand) throw;
                    ++skipped;
                    mt = -INFINITY;
                }
                if (w.wml.value < ml - 1e-12 || w.wmt.value < mt - 1e-12) ++chain_fail;
                const bool tight = std::abs(w.wml.value - ml) <= 1e-9 && std::abs(w.wmt.value - mt) <= 1e-9;
                if (equal && !tight) ++eq_fail;
                if (!equal && (w.wml.value - ml <= 1e-9 || (std::isfinite(mt) && w.wmt.value - mt <= 1e-9)))
                    ++strict_fail;
            }
        }
    }
    const bool pass = chain_fail == 0 && eq_fail == 0 && strict_fail == 0;
    return {pass, fmt("%ld samples; chain violations=%ld; equal-gamma inequalities=%ld; dissipative ties=%ld; "
                      "MT undefined (skipped)=%ld",
                      samples, chain_fail, eq_fail, strict_fail, skipped)};
}

Outcome geometric_closed_form() {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-2.0, 2.0), ua(0.0, kHalfPi);
    int mismatch = 0, absent_ok = 0, absent_bad = 0, solved = 0;
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
        const double mu = u(rng), nu = u(rng), a = std::max(ua(rng), 1e-6);
        const auto root = tau_g(mu, nu, a, 1e12);
        if (g_no_solution(mu, nu, a)) {
            (root ? absent_bad : absent_ok)++;
            continue;
        }
        const double arg = a + M_PI * nu / (2 * std::hypot(mu, nu));
        const double cf = std::log(std::tan(arg) / std::tan(a)) / nu;
        ++solved;
        if (!root) {
            ++mismatch;
            continue;
        }
        const double err = std::abs(*root - cf) / std::max(1.0, cf);
        worst = std::max(worst, err);
        if (err > 1e-8) ++mismatch;
    }
    return {mismatch == 0 && absent_bad == 0,
            fmt("%d solved, max |tau_G - closed form|/max(1,tau)=%.2e, mismatches=%d; no-solution cases: %d absent, "
                "%d wrongly solved",
                solved, worst, mismatch, absent_ok, absent_bad)};
}

Outcome scaling() {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-2.0, 2.0), ua(0.05, kHalfPi), ut(0.05, 2.0);
    double worst = 0;
    int evaluated = 0, undefined = 0;
    for (int i = 0; i < 200; ++i) {
        const TwoLevelCanonical c{u(rng), u(rng)};
        const StateAngles s{ua(rng), 1.0};
        const double t = ut(rng);
        for (double z : {0.1, 0.5, 2.0, 10.0}) {
            try {
                const auto a = two_level_bounds({z * c.mu, z * c.nu}, s, t);
                const auto b = two_level_bounds(c, s, z * t);
                auto rel = [](double x, double y) { return std::abs(x - y) / std::max(1.0, std::abs(y)); };
                worst = std::max({worst, rel(a.ml, b.ml), rel(a.mt, b.mt), rel(a.g, b.g)});
                ++evaluated;
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::NegativeRadicand) throw;
                ++undefined;
            }
        }
    }
    int sign_flips = 0;
    const auto th = midpoint_grid(20, M_PI), al = midpoint_grid(20, kHalfPi);
    for (double t : th)
        for (double a : al) {
            const auto ref = scan_cell(t, a, 1000.0);
            for (double z : {0.1, 0.5, 2.0, 10.0}) {
                const auto c = scan_cell(t, a, 1000.0 / z, z);
                if (c.region != ref.region) ++sign_flips;
            }
        }
    return {worst <= 1e-12 && sign_flips == 0,
            fmt("%d parameter points, max rel diff=%.2e (%d with undefined MT skipped); region changes on 20x20 grid=%d",
                evaluated, worst, undefined, sign_flips)};
}

Outcome region_scan() {
    const int n = 100;
    const auto th = midpoint_grid(n, M_PI), al = midpoint_grid(n, kHalfPi);
    const auto cells = delta_tau_scan(th, al, 1000.0);
    std::vector<int> is_c(n * n), analytic(n * n), g_abs(n * n), both(n * n);
    int a = 0, b = 0, c = 0, comb_only = 0;
    for (int i = 0; i < n * n; ++i) {
        const auto& cell = cells[i];
        is_c[i] = cell.region == Region::C;
        analytic[i] = g_no_solution(std::cos(cell.theta), std::sin(cell.theta), cell.alpha_angle);
        g_abs[i] = cell.g_absent;
        both[i] = cell.g_absent && cell.comb_absent;
        a += cell.region == Region::A;
        b += cell.region == Region::B;
        c += is_c[i];
        comb_only += cell.comb_absent && !cell.g_absent;
    }
    // a mismatch is tolerated when the analytic class flips within one neighbouring cell
    auto far_mismatches = [&](const std::vector<int>& got) {
        int bad = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const int k = i * n + j;
                if (got[k] == analytic[k]) continue;
                bool near = false;
                for (int di = -1; di <= 1; ++di)
                    for (int dj = -1; dj <= 1; ++dj) {
                        const int ii = i + di, jj = j + dj;
                        if (ii >= 0 && ii < n && jj >= 0 && jj < n && analytic[ii * n + jj] != analytic[k]) near = true;
                    }
                bad += !near;
            }
        return bad;
    };
    const int far_c = far_mismatches(is_c);
    const bool pass = far_c == 0 && a > 0 && b > 0;
    return {pass, fmt("A=%d B=%d C=%d; C cells off the analytic boundary by more than one cell=%d (%d cells have "
                      "tau_comb absent with tau_G present); G-absent set off by >1 cell=%d; both-absent set off by "
                      ">1 cell=%d",
                      a, b, c, far_c, comb_only, far_mismatches(g_abs), far_mismatches(both))};
}

Outcome near_fis_below() {
    const std::array<double, 3> gamma{0.6, 0.0, 0.3};
    std::vector<double> slopes;
    bool in_range = true;
    std::string values;
    for (double d : {0.005, 0.01, 0.02}) {
        const auto f = near_fis_below_one(gamma, 0.8, d, 1.0);
        const double mt = f_mt(f.state, f.spectrum, f.tau).value;
        slopes.push_back((mt - kHalfPi) / d);
        in_range = in_range && mt > kHalfPi && mt <= kHalfPi * 1.1;
        values += fmt(" %.5f", slopes.back());
    }
    const double lo = *std::min_element(slopes.begin(), slopes.end());
    const double hi = *std::max_element(slopes.begin(), slopes.end());
    const double spread = (hi - lo) / lo;
    const auto f0 = near_fis_below_one(gamma, 0.8, 0.0, 1.0);
    return {lo > 0 && spread <= 0.05 && in_range,
            fmt("slopes%s, spread %.2f%%, f_mt in (pi/2, 1.1 pi/2]: %s; analytic slope %.5f, printed closed form "
                "%.5f",
                values.c_str(), 100 * spread, in_range ? "yes" : "no", f0.b_coefficient, f0.b_printed)};
}

Outcome near_fis_above() {
    std::vector<double> coef;
    double predicted = 0, worst_mt = 0;
    std::string values;
    for (int k : {8, 16, 32}) {
        const auto f = near_fis_above_one(0.2, 0.5, k, 1.2, 1.0);
        coef.push_back((f_ml(f.state, f.spectrum, f.tau).value - kHalfPi) * k);
        predicted = (f.f_ml_predicted - kHalfPi) * k;
        const double mt = f_mt(f.state, f.spectrum, f.tau).value;
        worst_mt = std::max(worst_mt, std::abs(mt - f.f_mt_predicted) / f.f_mt_predicted);
        values += fmt(" %.5f", coef.back());
    }
    const double lo = *std::min_element(coef.begin(), coef.end());
    const double hi = *std::max_element(coef.begin(), coef.end());
    double worst_pred = 0;
    for (double c : coef) worst_pred = std::max(worst_pred, std::abs(c - predicted) / predicted);
    const bool pass = (hi - lo) / lo <= 0.10 && worst_pred <= 0.10 && worst_mt <= 0.01;
    return {pass, fmt("k*(f_ml-pi/2) =%s (spread %.2f%%), predicted %.5f (max dev %.2f%%); f_mt max rel dev %.3f%%",
                      values.c_str(), 100 * (hi - lo) / lo, predicted, 100 * worst_pred, 100 * worst_mt)};
}

Outcome pt_broken() {
    const auto spec = wpt_spectrum(0.5);
    const double horizon = 50.0;
    const double floor = std::exp(-spec.gamma_max() * horizon);
    int found = 0, below = 0;
    double min_s = INFINITY;
    for (const auto& st : sample_random_states(3, 1000, 9)) {
        if (orthogonality_time(st, spec, horizon)) ++found;
        for (int j = 0; j <= 5000; ++j) {
            const double s = std::abs(survival_amplitude(st, spec, horizon * j / 5000).s);
            min_s = std::min(min_s, s);
            if (s < floor - 1e-12) ++below;
        }
    }
    return {found == 0 && below == 0,
            fmt("orthogonality times found=%d; min |S|=%.4e vs floor e^{-g_max 50}=%.4e; samples below=%d", found, min_s,
                floor, below)};
}

Outcome cross_oracle() {
    std::mt19937_64 rng(10);
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> ut(0.0, 3.0);
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
        const int n = 2 + i % 4;
        ComplexMatrix h(n, n);
        ComplexVector psi(n);
        for (int r = 0; r < n; ++r) {
            psi(r) = cplx(g(rng), g(rng));
            for (int c = 0; c < n; ++c) h(r, c) = cplx(g(rng), g(rng));
        }
        const auto sys = build_biorthogonal(h);
        const auto spec = shift_spectrum(sys);
        const auto st = decompose_state(sys, psi);
        const ComplexVector psi0 = st.to_vector(sys);
        const double t = ut(rng);
        const ComplexVector evolved =
            expm_apply(cplx(0, -1) * (h - spec.shift * ComplexMatrix::Identity(n, n)), t, psi0);
        cplx overlap = 0.0;
        for (int k = 0; k < n; ++k) overlap += std::conj(st.coeffs[k]) * sys.left.col(k).dot(evolved);
        const auto s = survival_amplitude(st, spec, t);
        worst = std::max(worst, std::abs(overlap / s.k - s.s));
    }
    return {worst <= 1e-8, fmt("1000 pairs, max |S_eig - S_expm|=%.2e", worst)};
}

}  // namespace

int main() {
    int failures = 0;
    auto run = [&](int id, const char* name, double budget_s, const std::function<Outcome()>& f) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = f();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (budget_s > 0 && dt > budget_s) {
            o.pass = false;
            o.detail += fmt("; over the %.0f s budget", budget_s);
        }
        failures += !o.pass;
        std::printf("criterion %2d %s: %s (%.2f s) %s\n", id, name, o.pass ? "PASS" : "FAIL", dt, o.detail.c_str());
        std::fflush(stdout);
    };

    run(1, "FIS saturation", 5, fis_saturation);
    const Corpus corpus = wpt_corpus();
    run(2, "bound theorem corpus", 30, [&] { return bound_theorem(corpus); });
    run(3, "weak-bound chains", 0, [&] { return weak_chains(corpus); });
    run(4, "geometric closed form", 0, geometric_closed_form);
    run(5, "scaling invariance", 0, scaling);
    run(6, "region scan", 0, region_scan);
    run(7, "near-FIS ratio below one", 0, near_fis_below);
    run(8, "near-FIS ratio above one", 0, near_fis_above);
    run(9, "PT-broken regime", 0, pt_broken);
    run(10, "cross-oracle dynamics", 0, cross_oracle);
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
