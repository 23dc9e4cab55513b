#include "dxl/dtwa/dtwa.hpp"

#include <cmath>

#include "dxl/core/errors.hpp"
#include "dxl/core/parallel.hpp"
#include "dxl/core/reduce.hpp"
#include "dxl/core/rng.hpp"
#include "dxl/simd/kernels.hpp"

namespace dxl {

namespace {

// Wootters phase-point vectors, in units of 1/2.
constexpr int kRamsey[4][3] = {{1, 1, 1}, {1, -1, -1}, {1, 1, -1}, {1, -1, 1}};
constexpr int kInfT[4][3] = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};

void assign(ClassicalSpinConfig& c, std::size_t i, WoottersKind kind, unsigned pick) {
    const int(*tbl)[3] = kind == WoottersKind::Ramsey ? kRamsey : kInfT;
    c.sx[i] = 0.5 * tbl[pick][0];
    c.sy[i] = 0.5 * tbl[pick][1];
    c.sz[i] = 0.5 * tbl[pick][2];
}

struct Workspace {
    std::size_t n;
    std::vector<double> bx, by, bz;
    std::vector<double> k1x, k1y, k1z, k2x, k2y, k2z, k3x, k3y, k3z, k4x, k4y, k4z;
    std::vector<double> tx, ty, tz;

    explicit Workspace(std::size_t n_) : n(n_) {
        for (auto* v : {&bx, &by, &bz, &k1x, &k1y, &k1z, &k2x, &k2y, &k2z, &k3x, &k3y, &k3z,
                        &k4x, &k4y, &k4z, &tx, &ty, &tz})
            v->assign(n_, 0.0);
    }
};

// ds/dt = b x s with b_i^mu = g_mu sum_j J_ij s_j^mu
void derivative(const CouplingMatrix& jm, const AnisotropyVector& g, const double* sx,
                const double* sy, const double* sz, Workspace& w, double* dx, double* dy,
                double* dz) {
    const auto& kern = simd::kernels();
    const std::size_t n = w.n;
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = jm.row(i);
        w.bx[i] = g.x * kern.dot(row, sx, n);
        w.by[i] = g.y * kern.dot(row, sy, n);
        w.bz[i] = g.z * kern.dot(row, sz, n);
    }
    for (std::size_t i = 0; i < n; ++i) {
        dx[i] = w.by[i] * sz[i] - w.bz[i] * sy[i];
        dy[i] = w.bz[i] * sx[i] - w.bx[i] * sz[i];
        dz[i] = w.bx[i] * sy[i] - w.by[i] * sx[i];
    }
}

void rk4_step(const CouplingMatrix& jm, const AnisotropyVector& g, double h,
              std::vector<double>& sx, std::vector<double>& sy, std::vector<double>& sz,
              Workspace& w) {
    const std::size_t n = w.n;
    derivative(jm, g, sx.data(), sy.data(), sz.data(), w, w.k1x.data(), w.k1y.data(),
               w.k1z.data());
    for (std::size_t i = 0; i < n; ++i) {
        w.tx[i] = sx[i] + 0.5 * h * w.k1x[i];
        w.ty[i] = sy[i] + 0.5 * h * w.k1y[i];
        w.tz[i] = sz[i] + 0.5 * h * w.k1z[i];
    }
    derivative(jm, g, w.tx.data(), w.ty.data(), w.tz.data(), w, w.k2x.data(), w.k2y.data(),
               w.k2z.data());
    for (std::size_t i = 0; i < n; ++i) {
        w.tx[i] = sx[i] + 0.5 * h * w.k2x[i];
        w.ty[i] = sy[i] + 0.5 * h * w.k2y[i];
        w.tz[i] = sz[i] + 0.5 * h * w.k2z[i];
    }
    derivative(jm, g, w.tx.data(), w.ty.data(), w.tz.data(), w, w.k3x.data(), w.k3y.data(),
               w.k3z.data());
    for (std::size_t i = 0; i < n; ++i) {
        w.tx[i] = sx[i] + h * w.k3x[i];
        w.ty[i] = sy[i] + h * w.k3y[i];
        w.tz[i] = sz[i] + h * w.k3z[i];
    }
    derivative(jm, g, w.tx.data(), w.ty.data(), w.tz.data(), w, w.k4x.data(), w.k4y.data(),
               w.k4z.data());
    const double c = h / 6.0;
    for (std::size_t i = 0; i < n; ++i) {
        sx[i] += c * (w.k1x[i] + 2.0 * w.k2x[i] + 2.0 * w.k3x[i] + w.k4x[i]);
        sy[i] += c * (w.k1y[i] + 2.0 * w.k2y[i] + 2.0 * w.k3y[i] + w.k4y[i]);
        sz[i] += c * (w.k1z[i] + 2.0 * w.k2z[i] + 2.0 * w.k3z[i] + w.k4z[i]);
    }
}

void check_norms(const std::vector<double>& sx, const std::vector<double>& sy,
                 const std::vector<double>& sz, double tol) {
    const double target = std::sqrt(3.0) / 2.0;
    for (std::size_t i = 0; i < sx.size(); ++i) {
        double r = std::sqrt(sx[i] * sx[i] + sy[i] * sy[i] + sz[i] * sz[i]);
        if (std::fabs(r - target) > tol)
            throw NumericalError("dtwa: spin norm drift " + std::to_string(std::fabs(r - target)) +
                                 " exceeds tolerance; reduce the integration step");
    }
}

} // namespace

ClassicalSpinConfig sample_initial_spins(WoottersKind kind, std::size_t n, std::uint64_t seed) {
    ClassicalSpinConfig c;
    c.n = n;
    c.sx.resize(n);
    c.sy.resize(n);
    c.sz.resize(n);
    RngStream rng(seed, "wootters");
    for (std::size_t i = 0; i < n; ++i)
        assign(c, i, kind, static_cast<unsigned>(rng.next_u64() & 3));
    return c;
}

std::vector<std::vector<std::array<double, 3>>> integrate_trajectory(
    const ClassicalSpinConfig& config, const CouplingMatrix& couplings,
    const AnisotropyVector& g, const std::vector<double>& t_grid, const DtwaOptions& opt) {
    if (!(opt.step > 0) || opt.step > 0.02 + 1e-15)
        throw InputError("dtwa: integration step must be in (0, 0.02/J]");
    const std::size_t n = config.n;
    std::vector<double> sx = config.sx, sy = config.sy, sz = config.sz;
    Workspace w(n);

    std::vector<std::vector<std::array<double, 3>>> series(t_grid.size());
    auto record = [&](std::size_t q) {
        series[q].resize(n);
        for (std::size_t i = 0; i < n; ++i) series[q][i] = {sx[i], sy[i], sz[i]};
    };
    record(0);
    for (std::size_t q = 1; q < t_grid.size(); ++q) {
        const double span = t_grid[q] - t_grid[q - 1];
        const int nsub = std::max(1, static_cast<int>(std::ceil(span / opt.step - 1e-12)));
        const double h = span / nsub;
        for (int u = 0; u < nsub; ++u) rk4_step(couplings, g, h, sx, sy, sz, w);
        record(q);
    }
    check_norms(sx, sy, sz, opt.norm_tol);
    return series;
}

double dtwa_energy(const ClassicalSpinConfig& config, const CouplingMatrix& couplings,
                   const AnisotropyVector& g) {
    double e = 0.0;
    for (std::size_t i = 0; i < config.n; ++i)
        for (std::size_t j = i + 1; j < config.n; ++j)
            e += couplings(i, j) * (g.x * config.sx[i] * config.sx[j] +
                                    g.y * config.sy[i] * config.sy[j] +
                                    g.z * config.sz[i] * config.sz[j]);
    return e;
}

std::vector<CorrelatorTrace> dtwa_correlator(WoottersKind kind,
                                             const std::vector<CouplingMatrix>& geometries,
                                             const AnisotropyVector& g, std::size_t n_t,
                                             const std::vector<double>& t_grid,
                                             std::uint64_t master_seed, const DtwaOptions& opt) {
    if (geometries.empty()) throw InputError("dtwa: need at least one geometry");
    const std::size_t n = geometries.front().n;
    const std::size_t nt = t_grid.size();
    const std::size_t n_axes = kind == WoottersKind::Ramsey ? 1 : 3;

    // joint stratification is an exact ensemble enumeration for small N
    std::uint64_t n_joint = 1;
    for (std::size_t i = 0; i < n && n_joint <= n_t; ++i) n_joint *= 4;
    const bool stratified = n <= 8 && n_joint <= n_t && n_t % n_joint == 0;

    struct Task {
        std::size_t geom, traj;
    };
    std::vector<Task> tasks;
    tasks.reserve(geometries.size() * n_t);
    for (std::size_t m = 0; m < geometries.size(); ++m)
        for (std::size_t tr = 0; tr < n_t; ++tr) tasks.push_back({m, tr});

    const std::size_t block_size = 64;
    const std::size_t n_blocks = (tasks.size() + block_size - 1) / block_size;
    std::vector<std::vector<double>> sums(n_blocks), sqs(n_blocks);

    parallel_for(n_blocks, [&](std::size_t blk) {
        std::vector<double> s(n_axes * nt, 0.0), s2(n_axes * nt, 0.0);
        const std::size_t lo = blk * block_size;
        const std::size_t hi = std::min(tasks.size(), lo + block_size);
        for (std::size_t idx = lo; idx < hi; ++idx) {
            const auto [m, tr] = tasks[idx];
            ClassicalSpinConfig c0;
            if (stratified) {
                c0.n = n;
                c0.sx.resize(n); c0.sy.resize(n); c0.sz.resize(n);
                std::uint64_t code = tr % n_joint;
                for (std::size_t i = 0; i < n; ++i) {
                    assign(c0, i, kind, static_cast<unsigned>(code & 3));
                    code >>= 2;
                }
            } else {
                c0 = sample_initial_spins(kind, n,
                                          RngStream(master_seed, "dtwa-init", m, tr).next_u64());
            }
            auto series = integrate_trajectory(c0, geometries[m], g, t_grid, opt);
            for (std::size_t q = 0; q < nt; ++q) {
                if (kind == WoottersKind::Ramsey) {
                    double v = 0.0;
                    for (std::size_t i = 0; i < n; ++i) v += series[q][i][0];
                    v *= 2.0 / static_cast<double>(n);
                    s[q] += v;
                    s2[q] += v * v;
                } else {
                    for (std::size_t ax = 0; ax < 3; ++ax) {
                        double v = 0.0;
                        for (std::size_t i = 0; i < n; ++i)
                            v += series[q][i][ax] * series[0][i][ax];
                        v *= 4.0 / static_cast<double>(n);
                        s[ax * nt + q] += v;
                        s2[ax * nt + q] += v * v;
                    }
                }
            }
        }
        sums[blk] = std::move(s);
        sqs[blk] = std::move(s2);
    });

    const double n_samples = static_cast<double>(tasks.size());
    std::vector<CorrelatorTrace> traces(n_axes);
    for (std::size_t ax = 0; ax < n_axes; ++ax) {
        auto& tr = traces[ax];
        tr.axis = kind == WoottersKind::Ramsey ? "ramsey" : (ax == 0 ? "XX" : (ax == 1 ? "YY" : "ZZ"));
        tr.time = t_grid;
        tr.value.resize(nt);
        tr.stderr_.resize(nt);
        for (std::size_t q = 0; q < nt; ++q) {
            std::vector<double> p1(n_blocks), p2(n_blocks);
            for (std::size_t b = 0; b < n_blocks; ++b) {
                p1[b] = sums[b][ax * nt + q];
                p2[b] = sqs[b][ax * nt + q];
            }
            double mean = pairwise_sum(p1) / n_samples;
            double m2 = pairwise_sum(p2) / n_samples;
            tr.value[q] = mean;
            // (m2 - mean^2)/(n-1) is the squared standard error of the mean
            tr.stderr_[q] =
                n_samples > 1 ? std::sqrt(std::max(0.0, (m2 - mean * mean) / (n_samples - 1)))
                              : 0.0;
        }
        tr.meta["solver"] = "dtwa";
        tr.meta["n_t"] = std::to_string(n_t);
        tr.meta["M"] = std::to_string(geometries.size());
        tr.meta["stratified"] = stratified ? "true" : "false";
    }
    return traces;
}

} // namespace dxl
