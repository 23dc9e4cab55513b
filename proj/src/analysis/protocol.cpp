#include "dxl/analysis/protocol.hpp"

#include <cmath>

#include "dxl/core/parallel.hpp"
#include "dxl/core/reduce.hpp"
#include "dxl/core/rng.hpp"
#include "dxl/exact/calibration.hpp"
#include "dxl/exact/dense.hpp"
#include "dxl/simd/kernels.hpp"

namespace dxl {

namespace {

void check_same_grid(const CorrelatorTrace& a, const CorrelatorTrace& b) {
    if (a.time != b.time) throw InputError("correlator traces live on different time grids");
}

CorrelatorTrace combine(const char* axis, const CorrelatorTrace& a, double wa,
                        const CorrelatorTrace& b, double wb, const CorrelatorTrace& c, double wc,
                        double scale) {
    CorrelatorTrace out;
    out.axis = axis;
    out.time = a.time;
    out.value.resize(a.size());
    const bool have_err = !a.stderr_.empty() && !b.stderr_.empty() && !c.stderr_.empty();
    if (have_err) out.stderr_.resize(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        out.value[k] = scale * (wa * a.value[k] + wb * b.value[k] + wc * c.value[k]);
        if (have_err)
            out.stderr_[k] = std::fabs(scale) *
                             std::sqrt(wa * wa * a.stderr_[k] * a.stderr_[k] +
                                       wb * wb * b.stderr_[k] * b.stderr_[k] +
                                       wc * wc * c.stderr_[k] * c.stderr_[k]);
    }
    return out;
}

} // namespace

std::array<CorrelatorTrace, 3> recombine_disorder_order(const CorrelatorTrace& c_xy,
                                                        const CorrelatorTrace& c_yz,
                                                        const CorrelatorTrace& c_zx) {
    check_same_grid(c_xy, c_yz);
    check_same_grid(c_xy, c_zx);
    return {combine("XX", c_xy, 1.0, c_yz, -1.0, c_zx, 1.0, 1.0),
            combine("YY", c_xy, 1.0, c_yz, 1.0, c_zx, -1.0, 1.0),
            combine("ZZ", c_xy, -1.0, c_yz, 1.0, c_zx, 1.0, 1.0)};
}

std::array<CorrelatorTrace, 3> plane_correlators(const CorrelatorTrace& c_xx,
                                                 const CorrelatorTrace& c_yy,
                                                 const CorrelatorTrace& c_zz) {
    check_same_grid(c_xx, c_yy);
    check_same_grid(c_xx, c_zz);
    return {combine("XY", c_xx, 1.0, c_yy, 1.0, c_zz, 0.0, 0.5),
            combine("YZ", c_yy, 1.0, c_zz, 1.0, c_xx, 0.0, 0.5),
            combine("ZX", c_zz, 1.0, c_xx, 1.0, c_yy, 0.0, 0.5)};
}

namespace {

// Flatten a sector-layout state into bitstring order.
void flatten(const SectorBasis& basis, const BlockedState& st, std::vector<cxd>& amp) {
    for (int k = 0; k < basis.sectors(); ++k)
        for (std::size_t a = 0; a < basis.dim[k]; ++a) amp[basis.states[k][a]] = st.block[k][a];
}

} // namespace

CorrelatorTrace simulate_do_protocol(const SectorBlockedHamiltonian& h, double disorder_bandwidth,
                                     double tau_wind, WindingPlane plane,
                                     const std::vector<double>& t_grid, std::size_t n_disorder,
                                     std::uint64_t seed) {
    if (n_disorder < 1) throw InputError("simulate_do_protocol: n_disorder >= 1 required");

    // Other planes reduce to the XY protocol in a rotated frame, which only
    // permutes the anisotropy components (couplings are frame scalars).
    if (plane != WindingPlane::XY) {
        AnisotropyVector g = h.g;
        AnisotropyVector gp = plane == WindingPlane::YZ ? AnisotropyVector{g.y, g.z, g.x}
                                                        : AnisotropyVector{g.z, g.x, g.y};
        auto hp = build_hamiltonian(h.couplings, gp);
        auto tr = simulate_do_protocol(hp, disorder_bandwidth, tau_wind, WindingPlane::XY, t_grid,
                                       n_disorder, seed);
        tr.axis = plane == WindingPlane::YZ ? "do_YZ" : "do_ZX";
        return tr;
    }

    const double width = disorder_bandwidth * tau_wind;  // std dev of the winding angles
    const std::size_t n = h.n;
    const std::size_t d = h.dimension();
    DenseSolver solver(h);

    const std::size_t block_size = 256;
    const std::size_t n_blocks = (n_disorder + block_size - 1) / block_size;
    const std::size_t nt = t_grid.size();
    std::vector<std::vector<double>> sums(n_blocks), sqs(n_blocks);

    parallel_for(n_blocks, [&](std::size_t blk) {
        RngStream rng(seed, "do-protocol", blk);
        const std::size_t lo = blk * block_size;
        const std::size_t hi = std::min(n_disorder, lo + block_size);
        std::vector<double> s(nt, 0.0), s2(nt, 0.0);
        std::vector<double> theta(n), cth(n), sth(n);
        std::vector<cxd> amp(d);
        const double inv_sqrt = std::pow(2.0, -0.5 * static_cast<double>(n));

        for (std::size_t it = lo; it < hi; ++it) {
            for (std::size_t i = 0; i < n; ++i) {
                theta[i] = width * rng.gaussian();
                cth[i] = std::cos(theta[i]);
                sth[i] = std::sin(theta[i]);
            }
            // R_theta |+x>^N : amplitude exp(i/2 (sum_set - sum_clear) theta)
            for (std::size_t b = 0; b < d; ++b) {
                double phase = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    phase += ((b >> i) & 1u) ? 0.5 * theta[i] : -0.5 * theta[i];
                amp[b] = std::polar(inv_sqrt, phase);
            }
            BlockedState psi0 = zero_state(h.basis);
            for (int k = 0; k < h.basis.sectors(); ++k)
                for (std::size_t a2 = 0; a2 < h.basis.dim[k]; ++a2)
                    psi0.block[k][a2] = amp[h.basis.states[k][a2]];
            auto coeffs = solver.to_eigenbasis(psi0);

            for (std::size_t q = 0; q < nt; ++q) {
                BlockedState psi = solver.from_eigenbasis_at_time(coeffs, t_grid[q]);
                flatten(h.basis, psi, amp);
                // per-site transverse expectation via T_i = sum_{bit clear}
                // conj(amp[b]) amp[b^bit]; <S^x> = Re T, <S^y> = Im T.
                double sig = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const std::size_t bit = std::size_t{1} << i;
                    cxd t_acc = 0.0;
                    for (std::size_t b = 0; b < d; ++b) {
                        if (b & bit) continue;
                        t_acc += std::conj(amp[b]) * amp[b | bit];
                    }
                    sig += cth[i] * t_acc.real() + sth[i] * t_acc.imag();
                }
                sig *= 2.0 / static_cast<double>(n);
                s[q] += sig;
                s2[q] += sig * sig;
            }
        }
        sums[blk] = std::move(s);
        sqs[blk] = std::move(s2);
    });

    CorrelatorTrace tr;
    tr.axis = "do_XY";
    tr.time = t_grid;
    tr.value.resize(nt);
    tr.stderr_.resize(nt);
    const double nn = static_cast<double>(n_disorder);
    for (std::size_t q = 0; q < nt; ++q) {
        std::vector<double> p1(n_blocks), p2(n_blocks);
        for (std::size_t b = 0; b < n_blocks; ++b) {
            p1[b] = sums[b][q];
            p2[b] = sqs[b][q];
        }
        double m = pairwise_sum(p1) / nn;
        double m2 = pairwise_sum(p2) / nn;
        tr.value[q] = m;
        tr.stderr_[q] = nn > 1 ? std::sqrt(std::max(0.0, (m2 - m * m) / (nn - 1))) : 0.0;
    }
    tr.meta["solver"] = "do-protocol";
    tr.meta["W_tau_wind"] = std::to_string(width);
    tr.meta["n_disorder"] = std::to_string(n_disorder);
    return tr;
}

CorrelatorTrace ising_classical_oracle(std::size_t n, std::size_t m_geometries,
                                       const DipolarModel& model,
                                       const std::vector<double>& t_grid, std::uint64_t seed) {
    const double kappa = conventions().kappa;
    const std::size_t nt = t_grid.size();
    std::vector<std::vector<double>> per_geom(m_geometries);

    parallel_for(m_geometries, [&](std::size_t m) {
        std::uint64_t gseed = RngStream(seed, "oracle-geom", m).next_u64();
        auto geom = sample_positions(n, model, gseed);
        auto jm = coupling_matrix(geom, model);
        std::vector<double> acc(nt, 0.0), buf(nt);
        const auto& kern = simd::kernels();
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t q = 0; q < nt; ++q) buf[q] = 1.0;
            const double* row = jm.row(i);
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i || row[j] == 0.0) continue;
                kern.cos_prod_row(t_grid.data(), nt, kappa * row[j], buf.data());
            }
            for (std::size_t q = 0; q < nt; ++q) acc[q] += buf[q];
        }
        for (std::size_t q = 0; q < nt; ++q) acc[q] /= static_cast<double>(n);
        per_geom[m] = std::move(acc);
    });

    CorrelatorTrace tr;
    tr.axis = "XX";
    tr.time = t_grid;
    tr.value.resize(nt);
    tr.stderr_.resize(nt);
    std::vector<double> col(m_geometries);
    for (std::size_t q = 0; q < nt; ++q) {
        for (std::size_t m = 0; m < m_geometries; ++m) col[m] = per_geom[m][q];
        auto ms = mean_stderr(col);
        tr.value[q] = ms.mean;
        tr.stderr_[q] = ms.stderr_;
    }
    tr.meta["solver"] = "oracle-ising";
    tr.meta["N"] = std::to_string(n);
    tr.meta["M"] = std::to_string(m_geometries);
    tr.meta["kappa"] = std::to_string(kappa);
    return tr;
}

} // namespace dxl
