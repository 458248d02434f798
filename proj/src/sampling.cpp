#include "qsl/sampling.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "qsl/error.hpp"

namespace qsl {

std::uint64_t CounterRng::bits(std::uint64_t counter) const {
    // splitmix64 finalizer over the (seed, counter) lattice
    std::uint64_t z = seed_ + (counter + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double CounterRng::uniform(std::uint64_t counter) const {
    return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
}

std::vector<EigenbasisState> sample_random_states(std::size_t dim, std::size_t n, std::uint64_t seed) {
    if (dim < 2 || n < 1) throw Error(ErrorKind::InvalidArgument, "need dim >= 2 and n >= 1");
    const CounterRng rng(seed);
    std::vector<EigenbasisState> out;
    out.reserve(n);
    for (std::size_t s = 0; s < n; ++s) {
        const std::uint64_t base = 2 * dim * s;
        std::vector<double> w(dim);
        double total = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            w[j] = -std::log(rng.uniform(base + j));
            total += w[j];
        }
        std::vector<cplx> c(dim);
        for (std::size_t j = 0; j < dim; ++j)
            c[j] = std::polar(std::sqrt(w[j] / total), 2.0 * M_PI * rng.uniform(base + dim + j));
        out.push_back(make_state(std::move(c)));
    }
    return out;
}

std::vector<EigenbasisState> sample_orthogonalizing_states(const ShiftedSpectrum& spec, std::size_t n,
                                                           std::uint64_t seed, double t_max) {
    const std::size_t dim = spec.size();
    if (dim < 3 || n < 1) throw Error(ErrorKind::InvalidArgument, "need at least three levels and n >= 1");
    if (!(t_max > 0)) throw Error(ErrorKind::InvalidArgument, "t_max must be positive");
    constexpr std::uint64_t kAttempts = 1 << 16;
    const std::uint64_t stride = 2 * dim + 8;
    const CounterRng rng(seed);
    std::vector<EigenbasisState> out;
    out.reserve(n);
    for (std::size_t s = 0; s < n; ++s) {
        bool done = false;
        for (std::uint64_t a = 0; a < kAttempts && !done; ++a) {
            std::uint64_t k = (s * kAttempts + a) * stride;
            const double t = t_max * rng.uniform(k++);
            std::vector<std::size_t> idx(dim);
            for (std::size_t j = 0; j < dim; ++j) idx[j] = j;
            for (std::size_t j = 0; j < 3; ++j)
                std::swap(idx[j], idx[j + static_cast<std::size_t>(rng.uniform(k++) * (dim - j))]);

            std::vector<double> p(dim, 0.0);
            const double free_mass = dim > 3 ? rng.uniform(k++) : 0.0;
            double total = 0.0;
            for (std::size_t j = 3; j < dim; ++j) total += p[idx[j]] = -std::log(rng.uniform(k++));
            Eigen::Vector3d rhs(0.0, 0.0, 1.0 - free_mass);
            for (std::size_t j = 3; j < dim; ++j) {
                const std::size_t m = idx[j];
                p[m] *= free_mass / total;
                const double e = std::exp(-spec.gamma[m] * t);
                rhs(0) -= p[m] * e * std::cos(spec.omega[m] * t);
                rhs(1) -= p[m] * e * std::sin(spec.omega[m] * t);
            }
            Eigen::Matrix3d sys;
            for (int j = 0; j < 3; ++j) {
                const std::size_t m = idx[j];
                const double e = std::exp(-spec.gamma[m] * t);
                sys(0, j) = e * std::cos(spec.omega[m] * t);
                sys(1, j) = e * std::sin(spec.omega[m] * t);
                sys(2, j) = 1.0;
            }
            const Eigen::Vector3d sol = sys.fullPivLu().solve(rhs);
            if (!((sys * sol - rhs).norm() <= 1e-12) || !(sol.minCoeff() > 0)) continue;
            for (int j = 0; j < 3; ++j) p[idx[j]] = sol(j);

            std::vector<cplx> c(dim);
            for (std::size_t j = 0; j < dim; ++j) c[j] = std::polar(std::sqrt(p[j]), 2.0 * M_PI * rng.uniform(k++));
            out.push_back(make_state(std::move(c)));
            done = true;
        }
        if (!done) throw Error(ErrorKind::InvalidArgument, "no orthogonalizing state found for this spectrum");
    }
    return out;
}

}  // namespace qsl
