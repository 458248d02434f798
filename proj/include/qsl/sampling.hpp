#pragma once

#include <cstdint>
#include <vector>

#include "qsl/dynamics.hpp"

namespace qsl {

// Counter-based stream: draw i is a pure function of (seed, i).
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t bits(std::uint64_t counter) const;
    double uniform(std::uint64_t counter) const;  // in (0, 1)

private:
    std::uint64_t seed_;
};

// Populations uniform on the simplex, phases uniform on [0, 2 pi).
std::vector<EigenbasisState> sample_random_states(std::size_t dim, std::size_t n, std::uint64_t seed);

// States with S(t*) = 0 at a uniform t* in (0, t_max]: three random levels absorb the
// cancellation, the rest carry simplex weights. Needs at least three levels.
std::vector<EigenbasisState> sample_orthogonalizing_states(const ShiftedSpectrum& spec, std::size_t n,
                                                           std::uint64_t seed, double t_max);

}  // namespace qsl
