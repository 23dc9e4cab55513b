#pragma once
#include <vector>

#include <Eigen/Dense>

namespace dxl {

// Classical precession of an orthonormal frame, dR/dt = [b(t)]_x R, with the
// field held piecewise constant per step. Each step composes an exact
// rotation (Rodrigues), so orthogonality is preserved to rounding. Returns
// R at every grid point (grid length = field length + 1 segments semantics:
// fields b*[k] act on [t_k, t_{k+1})).
std::vector<Eigen::Matrix3d> impurity_evolve(const std::vector<double>& bx,
                                             const std::vector<double>& by,
                                             const std::vector<double>& bz, double dt);

// Rotation exp([v]_x) for a constant vector.
Eigen::Matrix3d rotation_about(const Eigen::Vector3d& v);

} // namespace dxl
