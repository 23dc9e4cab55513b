#pragma once
#include <cmath>
#include <string>

#include "dxl/core/errors.hpp"

namespace dxl {

// Coupling weights g = (g_x, g_y, g_z) of an XYZ exchange Hamiltonian.
struct AnisotropyVector {
    double x = 0.0, y = 0.0, z = 0.0;

    double operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }

    bool xxz() const { return x == y; }

    std::string str() const {
        return "(" + std::to_string(x) + "," + std::to_string(y) + "," + std::to_string(z) + ")";
    }
};

// g(lambda) = ((1+l)/3, (1+l)/3, (1-2l)/3); lambda = 0 is Heisenberg,
// lambda = -1 Ising, lambda = 1/2 XY.
inline AnisotropyVector parameterize_lambda(double lambda) {
    if (!std::isfinite(lambda)) throw InputError("lambda must be finite");
    return {(1.0 + lambda) / 3.0, (1.0 + lambda) / 3.0, (1.0 - 2.0 * lambda) / 3.0};
}

// Periodic parameterization: g(theta) = (cos(theta-pi/4), cos(theta-pi/4),
// -sin(theta-pi/4)). Ising/Heisenberg/XY/dipolar sit at theta = -pi/4, 0,
// pi/4, pi/2; g(theta+pi) = -g(theta).
inline AnisotropyVector parameterize_theta(double theta) {
    if (!std::isfinite(theta)) throw InputError("theta must be finite");
    double c = std::cos(theta - M_PI / 4.0);
    double s = std::sin(theta - M_PI / 4.0);
    return {c, c, -s};
}

} // namespace dxl
