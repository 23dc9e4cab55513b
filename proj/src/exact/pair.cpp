#include "dxl/exact/pair.hpp"

#include <cmath>

#include "dxl/core/parallel.hpp"
#include "dxl/core/reduce.hpp"
#include "dxl/core/rng.hpp"
#include "dxl/exact/calibration.hpp"
#include "dxl/simd/kernels.hpp"

namespace dxl {

double pair_exact(const AnisotropyVector& g, double j_pair, int axis, double t) {
    const double kappa = conventions().kappa;
    double c = 1.0;
    for (int nu = 0; nu < 3; ++nu) {
        if (nu == axis) continue;
        c *= std::cos(kappa * g[nu] * j_pair * t);
    }
    return c;
}

double pair_disavg_rate(const AnisotropyVector& g, int axis) {
    double gp[2];
    int q = 0;
    for (int nu = 0; nu < 3; ++nu)
        if (nu != axis) gp[q++] = g[nu];
    const double coeff = 32.0 / (9.0 * std::sqrt(3.0) * M_PI);
    return coeff * (std::fabs(gp[0] + gp[1]) + std::fabs(gp[0] - gp[1]));
}

CorrelatorTrace pair_disorder_average(const AnisotropyVector& g, int axis,
                                      const std::vector<double>& t_grid, double length_scale,
                                      std::size_t n_samples, std::uint64_t seed) {
    if (!(length_scale > 0)) throw InputError("pair_disorder_average: L must be positive");
    if (n_samples < 1) throw InputError("pair_disorder_average: n_samples must be >= 1");

    const double kappa = conventions().kappa;
    const double a_typ = 4.0 * length_scale / std::sqrt(M_PI);  // mean pair distance
    const double j0 = a_typ * a_typ * a_typ;                    // couplings in units J = j0/a^3

    double gp[2];
    int q = 0;
    for (int nu = 0; nu < 3; ++nu)
        if (nu != axis) gp[q++] = g[nu];

    const std::size_t nt = t_grid.size();
    // fixed blocking keeps the reduction identical for any worker count
    const std::size_t block_size = 65536;
    const std::size_t n_blocks = (n_samples + block_size - 1) / block_size;

    std::vector<std::vector<double>> sums(n_blocks), sqs(n_blocks);
    std::vector<double> dist_sum(n_blocks, 0.0);

    parallel_for(n_blocks, [&](std::size_t blk) {
        RngStream rng(seed, "pair-disavg", blk);
        const std::size_t lo = blk * block_size;
        const std::size_t hi = std::min(n_samples, lo + block_size);
        std::vector<double> s(nt, 0.0), s2(nt, 0.0), prod(nt);
        double dsum = 0.0;
        const auto& kern = simd::kernels();
        for (std::size_t it = lo; it < hi; ++it) {
            double d[3];
            for (int c = 0; c < 3; ++c)
                d[c] = length_scale * (rng.gaussian() - rng.gaussian());
            double r = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
            dsum += r;
            double cosq = d[2] / r;
            double jp = j0 * (3.0 * cosq * cosq - 1.0) / (r * r * r);
            for (std::size_t k = 0; k < nt; ++k) prod[k] = 1.0;
            kern.cos_prod_row(t_grid.data(), nt, kappa * gp[0] * jp, prod.data());
            kern.cos_prod_row(t_grid.data(), nt, kappa * gp[1] * jp, prod.data());
            for (std::size_t k = 0; k < nt; ++k) {
                s[k] += prod[k];
                s2[k] += prod[k] * prod[k];
            }
        }
        sums[blk] = std::move(s);
        sqs[blk] = std::move(s2);
        dist_sum[blk] = dsum;
    });

    CorrelatorTrace tr;
    tr.axis = axis == 0 ? "XX" : (axis == 1 ? "YY" : "ZZ");
    tr.time = t_grid;
    tr.value.resize(nt);
    tr.stderr_.resize(nt);
    const double n = static_cast<double>(n_samples);
    for (std::size_t k = 0; k < nt; ++k) {
        std::vector<double> parts(n_blocks), parts2(n_blocks);
        for (std::size_t b = 0; b < n_blocks; ++b) {
            parts[b] = sums[b][k];
            parts2[b] = sqs[b][k];
        }
        double m = pairwise_sum(parts) / n;
        double m2 = pairwise_sum(parts2) / n;
        tr.value[k] = m;
        tr.stderr_[k] = n > 1 ? std::sqrt(std::max(0.0, (m2 - m * m) / (n - 1))) : 0.0;
    }
    tr.meta["solver"] = "pair-disavg";
    tr.meta["n_samples"] = std::to_string(n_samples);
    tr.meta["mean_pair_distance"] = std::to_string(pairwise_sum(dist_sum) / n);
    tr.meta["kappa"] = std::to_string(kappa);
    return tr;
}

} // namespace dxl
