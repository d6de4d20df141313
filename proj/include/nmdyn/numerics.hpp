// numerics.hpp — dense Hermitian eigensolver (cyclic Jacobi) and an adaptive
// Dormand–Prince 5(4) integrator for linear systems dy/dt = -i M y.
//
// Everything here is templated on the Eigen scalar so that the same code runs
// in float, double or long double (real or complex).

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "nmdyn/error.hpp"
#include "nmdyn/time_grid.hpp"

namespace nmdyn {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Complex = std::complex<double>;
using ComplexMatrix = Matrix<Complex>;
using ComplexVector = Vector<Complex>;
using RealVector = Vector<double>;

template <typename Scalar>
struct HermitianEigenResult {
    using RealScalar = typename Eigen::NumTraits<Scalar>::Real;

    Vector<RealScalar> eigenvalues;   // ascending
    Matrix<Scalar> eigenvectors;      // orthonormal columns
};

template <typename Derived>
typename Derived::RealScalar max_abs_entry(const Eigen::MatrixBase<Derived>& a) {
    return a.size() == 0 ? typename Derived::RealScalar(0) : a.cwiseAbs().maxCoeff();
}

template <typename Derived>
typename Derived::RealScalar hermiticity_defect(const Eigen::MatrixBase<Derived>& a) {
    return max_abs_entry(a - a.adjoint());
}

// ‖A − A†‖_max ≤ rel_tol·(1 + ‖A‖_max)
template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& a, double rel_tol = 1e-12) {
    if (a.rows() != a.cols() || a.rows() == 0) return false;
    if (!a.allFinite()) return false;
    using Real = typename Derived::RealScalar;
    return hermiticity_defect(a) <= Real(rel_tol) * (Real(1) + max_abs_entry(a));
}

// Cyclic Jacobi diagonalization of a Hermitian (or real symmetric) matrix.
// Each rotation zeroes one off-diagonal pair; sweeps repeat until the
// off-diagonal Frobenius mass drops to rounding level.
template <typename Derived>
HermitianEigenResult<typename Derived::Scalar> hermitian_eigen(const Eigen::MatrixBase<Derived>& input,
                                                                int max_sweeps = 100) {
    using Scalar = typename Derived::Scalar;
    using Real = typename Derived::RealScalar;
    using std::abs;
    using std::sqrt;

    if (input.rows() != input.cols() || input.rows() == 0)
        throw Error(ErrorKind::DimensionMismatch, "hermitian_eigen needs a non-empty square matrix");
    if (!is_hermitian(input))
        throw Error(ErrorKind::NotHermitian, "matrix fails the Hermiticity check");

    const Eigen::Index n = input.rows();
    // Symmetrize so that rounding noise in the input cannot bias the rotations.
    Matrix<Scalar> a = (input + input.adjoint()) * Real(0.5);
    Matrix<Scalar> v = Matrix<Scalar>::Identity(n, n);

    const Real scale = a.norm();
    const Real target = Real(n) * std::numeric_limits<Real>::epsilon() * scale;

    auto off_diagonal = [&]() {
        Real sum(0);
        for (Eigen::Index q = 1; q < n; ++q)
            for (Eigen::Index p = 0; p < q; ++p) sum += Eigen::numext::abs2(a(p, q));
        return sqrt(Real(2) * sum);
    };

    bool converged = false;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (off_diagonal() <= target) {
            converged = true;
            break;
        }
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const Scalar apq = a(p, q);
                const Real mag = abs(apq);
                if (mag <= std::numeric_limits<Real>::min()) continue;

                const Real app = Eigen::numext::real(a(p, p));
                const Real aqq = Eigen::numext::real(a(q, q));
                const Real theta = (aqq - app) / (Real(2) * mag);
                Real t;
                if (abs(theta) > Real(1) / sqrt(std::numeric_limits<Real>::epsilon())) {
                    t = Real(1) / (Real(2) * theta);
                } else {
                    t = Real(1) / (abs(theta) + sqrt(theta * theta + Real(1)));
                    if (theta < Real(0)) t = -t;
                }
                const Real c = Real(1) / sqrt(t * t + Real(1));
                const Real s = t * c;
                const Scalar u = apq / mag;
                const Scalar su = s * u;
                const Scalar su_bar = s * Eigen::numext::conj(u);

                for (Eigen::Index k = 0; k < n; ++k) {
                    const Scalar akp = a(k, p);
                    const Scalar akq = a(k, q);
                    a(k, p) = c * akp - su_bar * akq;
                    a(k, q) = su * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const Scalar apk = a(p, k);
                    const Scalar aqk = a(q, k);
                    a(p, k) = c * apk - su * aqk;
                    a(q, k) = su_bar * apk + c * aqk;
                }
                a(p, q) = Scalar(0);
                a(q, p) = Scalar(0);
                a(p, p) = Scalar(app - t * mag);
                a(q, q) = Scalar(aqq + t * mag);

                for (Eigen::Index k = 0; k < n; ++k) {
                    const Scalar vkp = v(k, p);
                    const Scalar vkq = v(k, q);
                    v(k, p) = c * vkp - su_bar * vkq;
                    v(k, q) = su * vkp + c * vkq;
                }
            }
        }
    }
    if (!converged && off_diagonal() > target)
        throw Error(ErrorKind::NoConvergence, "Jacobi sweeps exceeded the iteration cap");

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index(0));
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
        return Eigen::numext::real(a(i, i)) < Eigen::numext::real(a(j, j));
    });

    HermitianEigenResult<Scalar> result;
    result.eigenvalues.resize(n);
    result.eigenvectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index src = order[static_cast<std::size_t>(k)];
        result.eigenvalues(k) = Eigen::numext::real(a(src, src));
        result.eigenvectors.col(k) = v.col(src);
    }
    return result;
}

template <typename Derived>
typename Derived::RealScalar min_eigenvalue(const Eigen::MatrixBase<Derived>& a) {
    return hermitian_eigen(a).eigenvalues(0);
}

struct OdeOptions {
    double rtol = 1e-9;
    double atol = 1e-12;
    std::size_t max_steps = 50'000'000;
};

namespace detail {

// Dormand–Prince 5(4) tableau with Hairer's dense-output coefficients.
struct Dopri5 {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                            a75 = -2187.0 / 6784, a76 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    static constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                            d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                            d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;
};

}  // namespace detail

// Solves dy/dt = -i M y on `grid` with an adaptive embedded Runge–Kutta pair.
// Local error per step is held below rtol·‖y‖₂ + atol; states at interior
// grid points come from the pair's fourth-order continuous extension.
template <typename Real>
std::vector<Vector<std::complex<Real>>> integrate_linear_ode(const Matrix<std::complex<Real>>& m,
                                                             const Vector<std::complex<Real>>& y0,
                                                             const TimeGrid& grid,
                                                             const OdeOptions& options = {}) {
    using Scalar = std::complex<Real>;
    using Vec = Vector<Scalar>;
    using T = detail::Dopri5;
    auto R = [](double x) { return Real(x); };

    if (m.rows() != m.cols() || m.rows() != y0.size() || y0.size() == 0)
        throw Error(ErrorKind::DimensionMismatch, "generator and initial vector dimensions differ");
    if (!m.allFinite() || !y0.allFinite())
        throw Error(ErrorKind::InvalidArgument, "non-finite generator or initial vector");

    const Scalar minus_i(0, -1);
    const Matrix<Scalar> gen = minus_i * m;
    auto rhs = [&](const Vec& y) -> Vec { return gen * y; };

    std::vector<Vec> out;
    out.reserve(grid.size());
    out.push_back(y0);
    if (grid.size() == 1) return out;

    const double t_end = grid.back();
    const double h_min = 1e-14 * t_end;
    const auto rtol = Real(options.rtol);
    const auto atol = Real(options.atol);

    Vec y = y0;
    Vec k1 = rhs(y);
    double t = 0.0;
    std::size_t next = 1;

    double h;
    {
        const Real sk = atol + rtol * y.norm();
        const Real d0 = y.norm() / sk;
        const Real d1 = k1.norm() / sk;
        double h0 = (d0 < Real(1e-5) || d1 < Real(1e-5)) ? 1e-6 : 0.01 * double(d0 / d1);
        h0 = std::min(h0, t_end);
        const Vec y1 = y + Scalar(h0) * k1;
        const Real d2 = (rhs(y1) - k1).norm() / sk / Real(h0);
        const double dmax = double(std::max(d1, d2));
        const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
        h = std::min({100.0 * h0, h1, t_end});
    }

    bool last_rejected = false;
    std::size_t steps = 0;
    Vec k2, k3, k4, k5, k6, k7, y_new, err;
    while (next < grid.size()) {
        if (++steps > options.max_steps)
            throw Error(ErrorKind::StepUnderflow, "step budget exhausted before reaching t_max");
        if (t + h > t_end) h = t_end - t;
        if (h < h_min) throw Error(ErrorKind::StepUnderflow, "adaptive step fell below 1e-14·t_max");

        const Scalar hs(h);
        k2 = rhs(y + hs * (R(T::a21) * k1));
        k3 = rhs(y + hs * (R(T::a31) * k1 + R(T::a32) * k2));
        k4 = rhs(y + hs * (R(T::a41) * k1 + R(T::a42) * k2 + R(T::a43) * k3));
        k5 = rhs(y + hs * (R(T::a51) * k1 + R(T::a52) * k2 + R(T::a53) * k3 + R(T::a54) * k4));
        k6 = rhs(y + hs * (R(T::a61) * k1 + R(T::a62) * k2 + R(T::a63) * k3 + R(T::a64) * k4 + R(T::a65) * k5));
        y_new = y + hs * (R(T::a71) * k1 + R(T::a73) * k3 + R(T::a74) * k4 + R(T::a75) * k5 + R(T::a76) * k6);
        k7 = rhs(y_new);
        err = hs * (R(T::e1) * k1 + R(T::e3) * k3 + R(T::e4) * k4 + R(T::e5) * k5 + R(T::e6) * k6 + R(T::e7) * k7);

        const Real scale = atol + rtol * std::max(y.norm(), y_new.norm());
        const double ratio = double(err.norm() / scale);
        if (!std::isfinite(ratio))
            throw Error(ErrorKind::StepUnderflow, "non-finite error estimate");

        if (ratio <= 1.0) {
            const double t_new = (t + h >= t_end) ? t_end : t + h;
            // Emit every grid point covered by [t, t_new].
            if (next < grid.size() && grid[next] <= t_new) {
                const Vec ydiff = y_new - y;
                const Vec bspl = hs * k1 - ydiff;
                const Vec r4 = ydiff - hs * k7 - bspl;
                const Vec r5 = hs * (R(T::d1) * k1 + R(T::d3) * k3 + R(T::d4) * k4 + R(T::d5) * k5 + R(T::d6) * k6 +
                                     R(T::d7) * k7);
                while (next < grid.size() && grid[next] <= t_new) {
                    if (grid[next] == t_new) {
                        out.push_back(y_new);
                    } else {
                        const Real th = Real((grid[next] - t) / h);
                        const Real th1 = Real(1) - th;
                        out.push_back(y + th * (ydiff + th1 * (bspl + th * (r4 + th1 * r5))));
                    }
                    ++next;
                }
            }
            t = t_new;
            y = y_new;
            k1 = k7;
            double fac = ratio == 0.0 ? 5.0 : 0.9 * std::pow(ratio, -0.2);
            fac = std::clamp(fac, 0.2, 5.0);
            if (last_rejected) fac = std::min(fac, 1.0);
            h *= fac;
            last_rejected = false;
        } else {
            h *= std::max(0.2, 0.9 * std::pow(ratio, -0.2));
            last_rejected = true;
        }
    }
    return out;
}

}  // namespace nmdyn
