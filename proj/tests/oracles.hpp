#pragma once
// Independent brute-force oracles for the test suite. These deliberately
// avoid the library's sector machinery: operators are built as explicit
// Kronecker products and evolution uses a full-space eigendecomposition.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <vector>

#include "dxl/exact/basis.hpp"
#include "dxl/model/anisotropy.hpp"
#include "dxl/model/dipolar.hpp"

namespace oracle {

using cxd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat pauli(int axis) {
    Mat m(2, 2);
    if (axis == 0) m << 0, 1, 1, 0;
    else if (axis == 1) m << 0, cxd(0, -1), cxd(0, 1), 0;
    else m << 1, 0, 0, -1;
    return m;
}

// sigma_i^axis on n spins; site 0 is the lowest bit, matching the library's
// bitstring convention (kron(high, ..., low)).
inline Mat site_op(std::size_t n, std::size_t site, int axis) {
    Mat m = Mat::Identity(1, 1);
    for (std::size_t k = n; k-- > 0;) {
        Mat f = (k == site) ? pauli(axis) : Mat::Identity(2, 2);
        Mat out(m.rows() * f.rows(), m.cols() * f.cols());
        for (Eigen::Index a = 0; a < m.rows(); ++a)
            for (Eigen::Index b = 0; b < m.cols(); ++b)
                out.block(a * f.rows(), b * f.cols(), f.rows(), f.cols()) = m(a, b) * f;
        m = out;
    }
    return m;
}

inline Mat hamiltonian(const dxl::CouplingMatrix& jm, const dxl::AnisotropyVector& g) {
    const std::size_t n = jm.n;
    const std::size_t d = std::size_t{1} << n;
    Mat h = Mat::Zero(d, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (jm(i, j) == 0.0) continue;
            for (int axis = 0; axis < 3; ++axis) {
                double gmu = axis == 0 ? g.x : (axis == 1 ? g.y : g.z);
                if (gmu == 0.0) continue;
                h += 0.25 * jm(i, j) * gmu * site_op(n, i, axis) * site_op(n, j, axis);
            }
        }
    return h;
}

struct Spectral {
    Eigen::VectorXd eval;
    Mat evec;
    explicit Spectral(const Mat& h) {
        Eigen::SelfAdjointEigenSolver<Mat> es(h);
        eval = es.eigenvalues();
        evec = es.eigenvectors();
    }
    Mat u(double t) const {
        Vec ph(eval.size());
        for (Eigen::Index a = 0; a < eval.size(); ++a) ph[a] = std::polar(1.0, -eval[a] * t);
        return evec * ph.asDiagonal() * evec.adjoint();
    }
    Vec evolve(const Vec& psi, double t) const {
        Vec c = evec.adjoint() * psi;
        for (Eigen::Index a = 0; a < eval.size(); ++a) c[a] *= std::polar(1.0, -eval[a] * t);
        return evec * c;
    }
};

// (1/N) sum_i Tr(sigma_i^mu(t) sigma_i^mu) / Tr(1)
inline double local_correlator(const Spectral& sp, const dxl::CouplingMatrix& jm, int axis,
                               double t) {
    const std::size_t n = jm.n;
    const std::size_t d = std::size_t{1} << n;
    Mat u = sp.u(t);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        Mat s = site_op(n, i, axis);
        acc += ((u.adjoint() * s * u * s).trace()).real();
    }
    return acc / (static_cast<double>(n) * static_cast<double>(d));
}

// library state -> plain bitstring-ordered vector
inline Vec flatten(const dxl::SectorBasis& basis, const dxl::BlockedState& st) {
    Vec v = Vec::Zero(std::size_t{1} << basis.n_spins);
    for (int k = 0; k < basis.sectors(); ++k)
        for (std::size_t a = 0; a < basis.dim[k]; ++a) v[basis.states[k][a]] = st.block[k][a];
    return v;
}

// ---- early-time slope of the disorder-averaged pair correlator ----
// F(tau) = E[sin^2(J(r) tau)] over r = r1 - r2 with r1,2 ~ N(0, L^2 I3),
// computed by quadrature: F = (1/2) <g(2 j0 |q(x)| tau)>_x with
// g(s) = (s / (6 sqrt(pi) L^3)) Int_0^inf (1 - cos z) z^-2
//        exp(-(s/z)^(2/3)/(4 L^2)) dz  (written here for L = 1).
inline double sine_integral(double x) {
    // asymptotic form, accurate for large x (used at x ~ 100)
    double x2 = x * x;
    double f = (1.0 - 2.0 / x2 + 24.0 / (x2 * x2) - 720.0 / (x2 * x2 * x2)) / x;
    double gg = (1.0 - 6.0 / x2 + 120.0 / (x2 * x2) - 5040.0 / (x2 * x2 * x2)) / x2;
    return M_PI / 2 - f * std::cos(x) - gg * std::sin(x);
}

inline double g_of_s(double s) {
    if (s == 0.0) return 0.0;
    const double z_max = 100.0;
    const int n_steps = 40000;
    const double h = z_max / n_steps;
    double acc = 0.0;
    for (int k = 0; k <= n_steps; ++k) {
        double z = k * h;
        double w = (k == 0 || k == n_steps) ? 0.5 : 1.0;
        double base = z < 1e-8 ? 0.5 : (1.0 - std::cos(z)) / (z * z);
        acc += w * base * std::exp(-std::pow(s / std::max(z, 1e-300), 2.0 / 3.0) / 4.0);
    }
    double core = acc * h;
    double tail = (1.0 - std::cos(z_max)) / z_max + M_PI / 2 - sine_integral(z_max);
    return s / (6.0 * std::sqrt(M_PI)) * (core + tail);
}

// 1 - C(t) for the disorder-averaged pair correlator (L = 1, kappa given).
inline double pair_disavg_one_minus_c(const dxl::AnisotropyVector& g, int axis, double kappa,
                                      double t) {
    const double a_typ = 4.0 / std::sqrt(M_PI);
    const double j0 = a_typ * a_typ * a_typ;
    double gp[2];
    int q = 0;
    for (int nu = 0; nu < 3; ++nu)
        if (nu != axis) gp[q++] = nu == 0 ? g.x : (nu == 1 ? g.y : g.z);
    // 1 - cosA cosB = sin^2((A-B)/2) + sin^2((A+B)/2)
    const double arg1 = kappa * std::fabs(gp[0] - gp[1]) * t / 2.0;
    const double arg2 = kappa * std::fabs(gp[0] + gp[1]) * t / 2.0;
    // Gauss-Legendre over x = cos(theta), 64 nodes on [0,1] (integrand even)
    static const int nn = 64;
    double acc = 0.0;
    for (int k = 0; k < nn; ++k) {
        // Chebyshev-like nodes with midpoint rule on [0,1]
        double x = (k + 0.5) / nn;
        double qv = std::fabs(3.0 * x * x - 1.0);
        acc += 0.5 * (g_of_s(2.0 * j0 * qv * arg1) + g_of_s(2.0 * j0 * qv * arg2));
    }
    return acc / nn;
}

} // namespace oracle
