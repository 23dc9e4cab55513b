#include "dxl/meanfield/impurity.hpp"

#include <cmath>

#include "dxl/core/errors.hpp"

namespace dxl {

Eigen::Matrix3d rotation_about(const Eigen::Vector3d& v) {
    const double th = v.norm();
    if (th == 0.0) return Eigen::Matrix3d::Identity();
    const Eigen::Vector3d ax = v / th;
    Eigen::Matrix3d k;
    k << 0, -ax[2], ax[1], ax[2], 0, -ax[0], -ax[1], ax[0], 0;
    return Eigen::Matrix3d::Identity() + std::sin(th) * k + (1.0 - std::cos(th)) * (k * k);
}

std::vector<Eigen::Matrix3d> impurity_evolve(const std::vector<double>& bx,
                                             const std::vector<double>& by,
                                             const std::vector<double>& bz, double dt) {
    if (bx.size() != by.size() || bx.size() != bz.size())
        throw InputError("impurity_evolve: field components on inconsistent grids");
    const std::size_t n_steps = bx.empty() ? 0 : bx.size() - 1;
    std::vector<Eigen::Matrix3d> history(n_steps + 1);
    Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
    history[0] = r;
    for (std::size_t k = 0; k < n_steps; ++k) {
        r = rotation_about(Eigen::Vector3d(bx[k], by[k], bz[k]) * dt) * r;
        history[k + 1] = r;
    }
    // exact rotations keep the frame orthonormal; guard anyway
    double drift = (history.back().transpose() * history.back() - Eigen::Matrix3d::Identity())
                       .cwiseAbs()
                       .maxCoeff();
    if (drift > 1e-8)
        throw NumericalError("impurity frame orthogonality drift " + std::to_string(drift));
    return history;
}

} // namespace dxl
