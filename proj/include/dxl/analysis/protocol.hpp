#pragma once
#include <array>
#include <cstdint>
#include <vector>

#include "dxl/core/trace.hpp"
#include "dxl/exact/hamiltonian.hpp"
#include "dxl/model/dipolar.hpp"

namespace dxl {

// Linear recombination of the three plane correlators into per-axis local
// autocorrelators: C^XX = +C_XY - C_YZ + C_ZX (and cyclic); standard errors
// propagate in quadrature.
std::array<CorrelatorTrace, 3> recombine_disorder_order(const CorrelatorTrace& c_xy,
                                                        const CorrelatorTrace& c_yz,
                                                        const CorrelatorTrace& c_zx);

// Forward map (plane correlators from axis correlators), the inverse of the
// recombination: C_XY = (C^XX + C^YY)/2 etc.
std::array<CorrelatorTrace, 3> plane_correlators(const CorrelatorTrace& c_xx,
                                                 const CorrelatorTrace& c_yy,
                                                 const CorrelatorTrace& c_zz);

enum class WindingPlane { XY, YZ, ZX };

// Disorder-order measurement emulation: winds each spin by theta_i ~
// N(0, (W tau_wind)^2) about the plane normal, evolves under H, unwinds and
// measures the in-plane polarization, averaged over n_disorder samples.
// For W tau_wind >~ pi the signal converges to the half-sum of the two
// in-plane local autocorrelators.
CorrelatorTrace simulate_do_protocol(const SectorBlockedHamiltonian& h, double disorder_bandwidth,
                                     double tau_wind, WindingPlane plane,
                                     const std::vector<double>& t_grid, std::size_t n_disorder,
                                     std::uint64_t seed);

// Exact Ising X-decay oracle: C(t) averaged over geometries and sites of
// prod_{j != i} cos(kappa J_ij t). No quantum solver involved.
CorrelatorTrace ising_classical_oracle(std::size_t n, std::size_t m_geometries,
                                       const DipolarModel& model,
                                       const std::vector<double>& t_grid, std::uint64_t seed);

} // namespace dxl
