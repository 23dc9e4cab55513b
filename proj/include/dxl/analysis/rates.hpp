#pragma once
#include <vector>

#include "dxl/model/anisotropy.hpp"
#include "dxl/model/dipolar.hpp"

namespace dxl {

enum class RateKind { Global, Local };

// Perturbative early-time decay rate of the X correlators,
//   1 - C(t) = (Gamma t)^2 / 2 + O(t^4),
// with Gamma^2 = kappa^2 * mean_i sum_j J_ij^2 * F(g), F = (g_y - g_z)^2 for
// the polarized (Ramsey) decay and g_y^2 + g_z^2 for the infinite-temperature
// local decay. For XXZ anisotropies these reduce to the (g_x - g_z)^2 and
// g_x^2 + g_z^2 combinations.
struct EarlyTimeRate {
    RateKind kind;
    double gamma;        // units of J
    double sum_sq;       // mean_i sum_j J_ij^2
};

EarlyTimeRate early_time_rates(const AnisotropyVector& g, const CouplingMatrix& couplings,
                               RateKind kind);

// Least-squares time rescaling between two (tau, dtau) collections:
// minimizes C(r) = (1/2N) sum (r tau - tau')^2 / (r^2 dtau^2 + dtau'^2)
// by golden-section search on ln r in [ln 0.01, ln 100].
struct RescaleResult {
    double r = 1.0;
    double cost = 0.0;
    std::vector<double> residuals;  // per-pair (r tau - tau') / sqrt(denominator)
};

struct TauPoint {
    double tau;
    double err;
};

RescaleResult rescale_fit(const std::vector<TauPoint>& experimental,
                          const std::vector<TauPoint>& simulated);

} // namespace dxl
