#pragma once

#include <cmath>
#include <random>

#include "qsl/linalg.hpp"

namespace qsl::test {

inline ComplexMatrix random_matrix(std::mt19937_64& rng, int n, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = scale * cplx(g(rng), g(rng));
    return m;
}

inline ComplexVector random_vector(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexVector v(n);
    for (int i = 0; i < n; ++i) v(i) = cplx(g(rng), g(rng));
    return v;
}

inline bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace qsl::test
