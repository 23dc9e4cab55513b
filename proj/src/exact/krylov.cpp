#include "dxl/exact/krylov.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <vector>

#include "dxl/core/errors.hpp"

namespace dxl {

namespace {

// exp(-i T dt) e1 for the real symmetric tridiagonal (alpha, beta).
Eigen::VectorXcd expi_tridiag_e1(const std::vector<double>& alpha, const std::vector<double>& beta,
                                 double dt) {
    const int m = static_cast<int>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        t(i, i) = alpha[i];
        if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i + 1];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    Eigen::VectorXd first_row = es.eigenvectors().row(0);
    Eigen::VectorXcd u(m);
    for (int a = 0; a < m; ++a) u[a] = std::polar(first_row[a], -es.eigenvalues()[a] * dt);
    return es.eigenvectors() * u;
}

} // namespace

void krylov_step(const std::function<void(const VectorXcd&, VectorXcd&)>& matvec, VectorXcd& v,
                 double dt, const KrylovOptions& opt) {
    const double norm0 = v.norm();
    if (norm0 == 0.0 || dt == 0.0) return;

    std::vector<VectorXcd> basis;
    basis.push_back(v / norm0);
    std::vector<double> alpha, beta{0.0};
    VectorXcd w(v.size());

    for (int m = 1; m <= opt.max_dim; ++m) {
        matvec(basis[m - 1], w);
        if (m >= 2) w -= beta[m - 1] * basis[m - 2];
        double a = basis[m - 1].dot(w).real();
        alpha.push_back(a);
        w -= a * basis[m - 1];
        // full reorthogonalization
        for (int j = 0; j < m; ++j) w -= basis[j].dot(w) * basis[j];
        double b = w.norm();
        beta.push_back(b);

        Eigen::VectorXcd u = expi_tridiag_e1(alpha, beta, dt);
        const double err = std::abs(b * u[m - 1]) * std::abs(dt);
        if (err < opt.tol || b < 1e-14 || m == static_cast<int>(v.size())) {
            VectorXcd out = VectorXcd::Zero(v.size());
            for (int j = 0; j < m; ++j) out += u[j] * basis[j];
            v = norm0 * out;
            return;
        }
        if (m == opt.max_dim)
            throw NumericalError("krylov_step: residual " + std::to_string(err) +
                                 " above tolerance at max dimension " +
                                 std::to_string(opt.max_dim));
        basis.push_back(w / b);
    }
}

void krylov_propagate(const SectorBlockedHamiltonian& h, BlockedState& state, double dt,
                      const KrylovOptions& opt) {
    if (h.sector_blocked) {
        for (int k = 0; k < h.basis.sectors(); ++k) {
            auto& comp = state.block[k];
            if (comp.size() == 0 || comp.squaredNorm() == 0.0) continue;
            const SparseBlock& blk = h.within[k];
            krylov_step(
                [&](const VectorXcd& x, VectorXcd& y) {
                    y.setZero(x.size());
                    blk.accumulate(x, y);
                },
                comp, dt, opt);
        }
        return;
    }

    // XYZ: flatten the whole space and apply the blocked matvec.
    const int ns = h.basis.sectors();
    std::vector<std::size_t> offset(ns + 1, 0);
    for (int k = 0; k < ns; ++k) offset[k + 1] = offset[k] + h.basis.dim[k];
    VectorXcd flat = VectorXcd::Zero(offset[ns]);
    for (int k = 0; k < ns; ++k)
        if (state.block[k].size()) flat.segment(offset[k], h.basis.dim[k]) = state.block[k];

    BlockedState xs = zero_state(h.basis), ys = zero_state(h.basis);
    krylov_step(
        [&](const VectorXcd& x, VectorXcd& y) {
            for (int k = 0; k < ns; ++k) xs.block[k] = x.segment(offset[k], h.basis.dim[k]);
            apply_hamiltonian(h, xs, ys);
            y.resize(x.size());
            for (int k = 0; k < ns; ++k) y.segment(offset[k], h.basis.dim[k]) = ys.block[k];
        },
        flat, dt, opt);
    for (int k = 0; k < ns; ++k) state.block[k] = flat.segment(offset[k], h.basis.dim[k]);
}

} // namespace dxl
