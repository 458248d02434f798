#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace qsl {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

struct EigResult {
    std::vector<cplx> values;
    ComplexMatrix vectors;  // column n pairs with values[n], unit 2-norm
};

inline constexpr double kDefaultEigTol = 1e-9;
inline constexpr double kDefaultRootTol = 1e-10;
inline constexpr int kMaxEigDim = 16;

// Eigenvalues come back sorted by real part, then imaginary part.
// Throws DefectiveMatrix when cond(V) > 1/tol.
EigResult eig_general(const ComplexMatrix& m, double tol = kDefaultEigTol);

// exp(m t) v by scaling and squaring of a Taylor series.
ComplexVector expm_apply(const ComplexMatrix& m, double t, const ComplexVector& v);

// Brent's method on [lo, hi]; the result never leaves the bracket.
double find_root_bracketed(const std::function<double(double)>& f, double lo, double hi,
                           double tol = kDefaultRootTol);

namespace detail {
EigResult eig_qr(const ComplexMatrix& m);
void sort_eigenpairs(EigResult& r);
double eigvec_condition(const ComplexMatrix& v);
}  // namespace detail

}  // namespace qsl
