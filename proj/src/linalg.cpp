#include "qsl/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qsl/error.hpp"

namespace qsl {

const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::NonSquare: return "NonSquare";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::DefectiveMatrix: return "DefectiveMatrix";
        case ErrorKind::Degenerate: return "Degenerate";
        case ErrorKind::NoBracket: return "NoBracket";
        case ErrorKind::ZeroState: return "ZeroState";
        case ErrorKind::Underflow: return "Underflow";
        case ErrorKind::NegativeRadicand: return "NegativeRadicand";
        case ErrorKind::ZeroBandwidth: return "ZeroBandwidth";
        case ErrorKind::BadOrdering: return "BadOrdering";
        case ErrorKind::DenominatorSignFlip: return "DenominatorSignFlip";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_square(const ComplexMatrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw Error(ErrorKind::NonSquare, "matrix is " + std::to_string(m.rows()) + "x" +
                                              std::to_string(m.cols()));
}

double residual(const ComplexMatrix& m, cplx lambda, const ComplexVector& v) {
    return (m * v - lambda * v).norm();
}

bool residuals_ok(const ComplexMatrix& m, const EigResult& r, double tol) {
    const double scale = std::max(m.norm(), std::numeric_limits<double>::min());
    for (Eigen::Index n = 0; n < m.rows(); ++n) {
        if (!std::isfinite(std::abs(r.values[n]))) return false;
        if (residual(m, r.values[n], r.vectors.col(n)) > tol * scale) return false;
    }
    return true;
}

// Null vector of a 2x2 (m - lambda I); falls back to e_k when m is scalar.
ComplexVector null_vector_2(const ComplexMatrix& m, cplx lambda, int k) {
    ComplexVector a(2), b(2);
    a << -m(0, 1), m(0, 0) - lambda;
    b << m(1, 1) - lambda, -m(1, 0);
    ComplexVector v = a.norm() >= b.norm() ? a : b;
    if (v.norm() <= 64 * kEps * std::max(1.0, m.norm())) {
        v = ComplexVector::Zero(2);
        v(k) = 1.0;
    }
    return v.normalized();
}

EigResult eig_2(const ComplexMatrix& m) {
    const cplx half_tr = 0.5 * (m(0, 0) + m(1, 1));
    const cplx half_diff = 0.5 * (m(0, 0) - m(1, 1));
    const cplx root = std::sqrt(half_diff * half_diff + m(0, 1) * m(1, 0));
    EigResult r;
    r.values = {half_tr - root, half_tr + root};
    r.vectors.resize(2, 2);
    for (int k = 0; k < 2; ++k) r.vectors.col(k) = null_vector_2(m, r.values[k], k);
    return r;
}

// Trigonometric solution of the depressed characteristic cubic.
bool eig_3(const ComplexMatrix& m, EigResult& r) {
    const cplx tr = m.trace();
    const cplx minors = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) -
                        m(0, 2) * m(2, 0) + m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
    const cplx det = m.determinant();
    // lambda^3 + a lambda^2 + b lambda + c
    const cplx a = -tr, b = minors, c = -det;
    const cplx p = b - a * a / 3.0;
    const cplx q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    const double scale = std::max(1.0, m.norm());

    std::vector<cplx> roots(3);
    if (std::abs(p) <= 1e-14 * scale * scale) {
        const cplx w = std::pow(-q, 1.0 / 3.0);
        const cplx unit = std::polar(1.0, 2.0 * M_PI / 3.0);
        roots = {w, w * unit, w * unit * unit};
    } else {
        const cplx amp = 2.0 * std::sqrt(-p / 3.0);
        const cplx theta = std::acos(3.0 * q / (p * amp)) / 3.0;
        for (int k = 0; k < 3; ++k) roots[k] = amp * std::cos(theta - 2.0 * M_PI * k / 3.0);
    }

    auto poly = [&](cplx x) { return ((x + a) * x + b) * x + c; };
    auto dpoly = [&](cplx x) { return (3.0 * x + 2.0 * a) * x + b; };
    r.values.resize(3);
    for (int k = 0; k < 3; ++k) {
        cplx x = roots[k] - a / 3.0;
        for (int it = 0; it < 3; ++it) {
            const cplx d = dpoly(x);
            if (std::abs(d) < 1e-300) break;
            const cplx step = poly(x) / d;
            if (!std::isfinite(std::abs(step))) break;
            x -= step;
        }
        r.values[k] = x;
    }

    r.vectors.resize(3, 3);
    for (int k = 0; k < 3; ++k) {
        const ComplexMatrix s = m - r.values[k] * ComplexMatrix::Identity(3, 3);
        Eigen::Vector3cd best = Eigen::Vector3cd::Zero();
        for (int i = 0; i < 3; ++i) {
            const Eigen::Vector3cd ri = s.row(i).transpose();
            const Eigen::Vector3cd rj = s.row((i + 1) % 3).transpose();
            // plain cross product: ri . v = rj . v = 0 without conjugation
            Eigen::Vector3cd v(ri(1) * rj(2) - ri(2) * rj(1), ri(2) * rj(0) - ri(0) * rj(2),
                               ri(0) * rj(1) - ri(1) * rj(0));
            if (v.norm() > best.norm()) best = v;
        }
        if (best.norm() <= 1e-10 * scale * scale) return false;
        r.vectors.col(k) = best.normalized();
    }
    return true;
}

}  // namespace

namespace detail {

void sort_eigenpairs(EigResult& r) {
    const std::size_t n = r.values.size();
    double scale = 1.0;
    for (const auto& v : r.values) scale = std::max(scale, std::abs(v));
    const double tie = 1e-12 * scale;

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t i, std::size_t j) { return r.values[i].real() < r.values[j].real(); });
    // near-equal real parts form clusters ordered by imaginary part
    for (std::size_t lo = 0; lo < n;) {
        std::size_t hi = lo + 1;
        while (hi < n && r.values[idx[hi]].real() - r.values[idx[hi - 1]].real() <= tie) ++hi;
        std::sort(idx.begin() + lo, idx.begin() + hi, [&](std::size_t i, std::size_t j) {
            return r.values[i].imag() < r.values[j].imag();
        });
        lo = hi;
    }

    EigResult out;
    out.values.resize(n);
    out.vectors.resize(r.vectors.rows(), static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = r.values[idx[k]];
        out.vectors.col(k) = r.vectors.col(idx[k]);
    }
    r = std::move(out);
}

double eigvec_condition(const ComplexMatrix& v) {
    Eigen::JacobiSVD<ComplexMatrix> svd(v);
    const auto& s = svd.singularValues();
    const double smin = s(s.size() - 1);
    if (smin <= 0.0) return std::numeric_limits<double>::infinity();
    return s(0) / smin;
}

EigResult eig_qr(const ComplexMatrix& m) {
    const Eigen::Index n = m.rows();
    ComplexMatrix h = m;
    ComplexMatrix z = ComplexMatrix::Identity(n, n);

    // Householder reduction to upper Hessenberg form, h = z^* m z
    for (Eigen::Index k = 0; k + 2 < n; ++k) {
        ComplexVector x = h.block(k + 1, k, n - k - 1, 1);
        const double xnorm = x.norm();
        if (xnorm == 0.0) continue;
        const cplx phase = std::abs(x(0)) > 0 ? x(0) / std::abs(x(0)) : cplx(1.0);
        x(0) += phase * xnorm;
        const double unorm = x.norm();
        if (unorm == 0.0) continue;
        x /= unorm;
        // h <- P h P with P = I - 2 u u^*
        auto rows = h.bottomRows(n - k - 1);
        rows -= 2.0 * x * (x.adjoint() * rows);
        auto cols = h.rightCols(n - k - 1);
        cols -= 2.0 * (cols * x) * x.adjoint();
        auto zc = z.rightCols(n - k - 1);
        zc -= 2.0 * (zc * x) * x.adjoint();
        h.block(k + 2, k, n - k - 2, 1).setZero();
    }

    // Shifted QR with Givens rotations on the active window [lo, hi].
    const double hnorm = std::max(h.norm(), std::numeric_limits<double>::min());
    Eigen::Index hi = n - 1;
    int iter = 0, total = 0;
    while (hi > 0) {
        Eigen::Index lo = hi;
        while (lo > 0) {
            const double sub = std::abs(h(lo, lo - 1));
            const double diag = std::abs(h(lo, lo)) + std::abs(h(lo - 1, lo - 1));
            if (sub <= kEps * (diag > 0 ? diag : hnorm)) {
                h(lo, lo - 1) = 0.0;
                break;
            }
            --lo;
        }
        if (lo == hi) {
            --hi;
            iter = 0;
            continue;
        }
        if (++total > 100 * static_cast<int>(n)) break;
        ++iter;

        cplx shift;
        if (iter % 10 == 0) {
            // exceptional shift to break cycles
            shift = h(hi, hi) + std::abs(h(hi, hi - 1)) * 0.75;
        } else {
            const cplx a = h(hi - 1, hi - 1), b = h(hi - 1, hi), c = h(hi, hi - 1), d = h(hi, hi);
            const cplx half = 0.5 * (a - d);
            const cplx root = std::sqrt(half * half + b * c);
            const cplx l1 = 0.5 * (a + d) + root, l2 = 0.5 * (a + d) - root;
            shift = std::abs(l1 - d) < std::abs(l2 - d) ? l1 : l2;
        }

        std::vector<Eigen::Matrix2cd> rots;
        for (Eigen::Index k = lo; k <= hi; ++k) h(k, k) -= shift;
        for (Eigen::Index k = lo; k < hi; ++k) {
            const cplx a = h(k, k), b = h(k + 1, k);
            const double r = std::hypot(std::abs(a), std::abs(b));
            Eigen::Matrix2cd g;
            if (r == 0.0) {
                g.setIdentity();
            } else {
                const cplx cs = a / r, sn = b / r;
                g << std::conj(cs), std::conj(sn), -sn, cs;
            }
            rots.push_back(g);
            auto blk = h.block(k, k, 2, n - k);
            blk = g * blk;
        }
        for (Eigen::Index k = lo; k < hi; ++k) {
            const Eigen::Matrix2cd ga = rots[k - lo].adjoint();
            auto blk = h.block(0, k, std::min(k + 2, n), 2);
            blk = blk * ga;
            auto zb = z.block(0, k, n, 2);
            zb = zb * ga;
        }
        for (Eigen::Index k = lo; k <= hi; ++k) h(k, k) += shift;
    }

    // Eigenvectors of the triangular factor by back substitution.
    const double small = kEps * hnorm;
    ComplexMatrix y = ComplexMatrix::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        y(k, k) = 1.0;
        for (Eigen::Index j = k - 1; j >= 0; --j) {
            cplx acc = 0.0;
            for (Eigen::Index l = j + 1; l <= k; ++l) acc += h(j, l) * y(l, k);
            cplx den = h(j, j) - h(k, k);
            if (std::abs(den) < small) den = small;
            y(j, k) = -acc / den;
        }
    }

    EigResult r;
    r.values.resize(n);
    for (Eigen::Index k = 0; k < n; ++k) r.values[k] = h(k, k);
    r.vectors = z * y;
    for (Eigen::Index k = 0; k < n; ++k) r.vectors.col(k).normalize();
    return r;
}

}  // namespace detail

EigResult eig_general(const ComplexMatrix& m, double tol) {
    require_square(m);
    if (!(tol > 0)) throw Error(ErrorKind::InvalidArgument, "tol must be positive");
    if (m.rows() > kMaxEigDim) throw Error(ErrorKind::InvalidArgument, "dimension above 16");
    if (!m.allFinite()) throw Error(ErrorKind::InvalidArgument, "non-finite matrix entry");

    const Eigen::Index n = m.rows();
    EigResult r;
    bool ok = false;
    if (n == 1) {
        r.values = {m(0, 0)};
        r.vectors = ComplexMatrix::Ones(1, 1);
        ok = true;
    } else if (n == 2) {
        r = eig_2(m);
        ok = residuals_ok(m, r, tol);
    } else if (n == 3) {
        ok = eig_3(m, r) && residuals_ok(m, r, tol);
    }
    if (!ok) r = detail::eig_qr(m);

    detail::sort_eigenpairs(r);
    const double cond = detail::eigvec_condition(r.vectors);
    if (!(cond <= 1.0 / tol))
        throw Error(ErrorKind::DefectiveMatrix,
                    "eigenvector condition number " + std::to_string(cond) + " exceeds 1/tol");
    return r;
}

ComplexVector expm_apply(const ComplexMatrix& m, double t, const ComplexVector& v) {
    require_square(m);
    if (v.size() != m.rows())
        throw Error(ErrorKind::DimensionMismatch, "vector length differs from matrix dimension");

    const Eigen::Index n = m.rows();
    const ComplexMatrix a = m * t;
    const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm1 > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
    const ComplexMatrix b = a / std::ldexp(1.0, squarings);

    ComplexMatrix e = ComplexMatrix::Identity(n, n);
    ComplexMatrix term = ComplexMatrix::Identity(n, n);
    for (int k = 1; k <= 40; ++k) {
        term = term * b / static_cast<double>(k);
        e += term;
        if (term.norm() <= 1e-18 * e.norm()) break;
    }
    for (int s = 0; s < squarings; ++s) e = e * e;
    return e * v;
}

double find_root_bracketed(const std::function<double(double)>& f, double lo, double hi,
                           double tol) {
    if (!(lo < hi)) throw Error(ErrorKind::InvalidArgument, "bracket requires lo < hi");
    if (!(tol > 0)) throw Error(ErrorKind::InvalidArgument, "tol must be positive");
    double a = lo, b = hi;
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0) == (fb > 0)) throw Error(ErrorKind::NoBracket, "f has the same sign at both ends");

    double c = a, fc = fa, d = b - a, e = d;
    for (int iter = 0; iter < 200; ++iter) {
        if ((fb > 0) == (fc > 0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 = 2.0 * kEps * std::abs(b) + 0.5 * tol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0 || std::abs(fb) <= tol) break;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p, q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc, r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol1 ? d : (xm > 0 ? tol1 : -tol1);
        fb = f(b);
    }
    return std::clamp(b, lo, hi);
}

}  // namespace qsl
