#pragma once
#include <cstdint>
#include <vector>

#include "dxl/core/trace.hpp"
#include "dxl/model/anisotropy.hpp"

namespace dxl {

// Exact two-spin infinite-temperature autocorrelator along axis mu:
// prod_{nu != mu} cos(kappa g_nu J t) with the calibrated convention factor.
double pair_exact(const AnisotropyVector& g, double j_pair, int axis, double t);

// Monte Carlo average of pair_exact over two spin positions drawn i.i.d.
// normal with standard deviation L per coordinate. Couplings are expressed in
// units of J = j0/a^3 with a = 4L/sqrt(pi) the mean pair distance.
CorrelatorTrace pair_disorder_average(const AnisotropyVector& g, int axis,
                                      const std::vector<double>& t_grid, double length_scale,
                                      std::size_t n_samples, std::uint64_t seed);

// Early-time decay rate of the disorder-averaged pair correlator, in the
// J-normalized convention: (J tau_1)^{-1} = 32/(9 sqrt(3) pi) *
// (|g_p1 + g_p2| + |g_p1 - g_p2|) with g_p the two couplings transverse to
// the axis. (The measured slope of 1 - C equals kappa times this.)
double pair_disavg_rate(const AnisotropyVector& g, int axis);

} // namespace dxl
