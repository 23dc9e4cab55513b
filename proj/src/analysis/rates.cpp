#include "dxl/analysis/rates.hpp"

#include <cmath>

#include "dxl/core/errors.hpp"
#include "dxl/exact/calibration.hpp"

namespace dxl {

EarlyTimeRate early_time_rates(const AnisotropyVector& g, const CouplingMatrix& couplings,
                               RateKind kind) {
    const double kappa = conventions().kappa;
    const double q = couplings.mean_row_sum_sq();
    const double factor = kind == RateKind::Global ? (g.y - g.z) * (g.y - g.z)
                                                   : (g.y * g.y + g.z * g.z);
    EarlyTimeRate rate;
    rate.kind = kind;
    rate.sum_sq = q;
    rate.gamma = kappa * std::sqrt(q * factor);
    return rate;
}

RescaleResult rescale_fit(const std::vector<TauPoint>& experimental,
                          const std::vector<TauPoint>& simulated) {
    if (experimental.empty() || simulated.empty())
        throw InputError("rescale_fit: empty input");
    if (experimental.size() != simulated.size())
        throw InputError("rescale_fit: length mismatch");
    for (std::size_t k = 0; k < experimental.size(); ++k)
        if (!(experimental[k].err >= 0) || !(simulated[k].err >= 0) ||
            (experimental[k].err == 0 && simulated[k].err == 0))
            throw InputError("rescale_fit: each pair needs a positive uncertainty");

    const double n = static_cast<double>(experimental.size());
    auto cost = [&](double lr) {
        double r = std::exp(lr);
        double c = 0.0;
        for (std::size_t k = 0; k < experimental.size(); ++k) {
            double num = r * experimental[k].tau - simulated[k].tau;
            double den = r * r * experimental[k].err * experimental[k].err +
                         simulated[k].err * simulated[k].err;
            c += num * num / den;
        }
        return c / (2.0 * n);
    };

    // golden-section on ln r
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = std::log(0.01), hi = std::log(100.0);
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = cost(x1), f2 = cost(x2);
    while (hi - lo > 1e-12) {
        if (f1 < f2) {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = cost(x1);
        } else {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = cost(x2);
        }
    }
    RescaleResult res;
    double lr = 0.5 * (lo + hi);
    res.r = std::exp(lr);
    res.cost = cost(lr);
    for (std::size_t k = 0; k < experimental.size(); ++k) {
        double num = res.r * experimental[k].tau - simulated[k].tau;
        double den = res.r * res.r * experimental[k].err * experimental[k].err +
                     simulated[k].err * simulated[k].err;
        res.residuals.push_back(num / std::sqrt(den));
    }
    return res;
}

} // namespace dxl
