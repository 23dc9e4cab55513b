#include "dxl/meanfield/dmft.hpp"

#include <cmath>

#include "dxl/core/errors.hpp"
#include "dxl/core/parallel.hpp"
#include "dxl/exact/calibration.hpp"
#include "dxl/meanfield/impurity.hpp"
#include "dxl/meanfield/noise.hpp"

namespace dxl {

namespace {

void require_uniform(const std::vector<double>& t) {
    if (t.size() < 2) throw InputError("mean-field solvers need at least 2 grid points");
    const double dt = t[1] - t[0];
    for (std::size_t k = 1; k < t.size(); ++k)
        if (std::fabs((t[k] - t[k - 1]) - dt) > 1e-9 * dt)
            throw InputError("mean-field solvers require a uniform time grid");
}

} // namespace

CorrelatorTrace SelfConsistentResult::ensemble_average(int axis) const {
    CorrelatorTrace out;
    if (spins.empty()) return out;
    const auto& first = spins.front()[axis];
    out.axis = first.axis;
    out.time = first.time;
    out.value.assign(first.size(), 0.0);
    out.stderr_.assign(first.size(), 0.0);
    for (const auto& sp : spins) {
        for (std::size_t k = 0; k < out.size(); ++k) {
            out.value[k] += sp[axis].value[k];
            out.stderr_[k] += sp[axis].stderr_[k] * sp[axis].stderr_[k];
        }
    }
    const double n = static_cast<double>(spins.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        out.value[k] /= n;
        out.stderr_[k] = std::sqrt(out.stderr_[k]) / n;
    }
    out.meta = first.meta;
    return out;
}

SelfConsistentResult dmft_solve(const CouplingMatrix& couplings, const AnisotropyVector& g,
                                const std::vector<double>& t_grid, const MeanFieldOptions& opt) {
    require_uniform(t_grid);
    if (opt.max_iter < 1) throw InputError("dmft: max_iter >= 1 required");
    const std::size_t n = couplings.n;
    const double kappa = conventions().kappa;
    const double cell = t_grid[1] - t_grid[0];
    const int refine = std::max(1, static_cast<int>(std::ceil(cell / opt.substep - 1e-12)));
    const double dt = cell / refine;
    const std::size_t nt_fine = (t_grid.size() - 1) * refine + 1;

    const double gsq[3] = {g.x * g.x, g.y * g.y, g.z * g.z};
    std::vector<double> j2(n * n);
    for (std::size_t i = 0; i < n * n; ++i) j2[i] = couplings.j[i] * couplings.j[i];

    // C[i][mu] on the fine grid; all-ones start (free spins)
    auto c_cur = std::vector<std::array<std::vector<double>, 3>>(n);
    auto c_new = c_cur;
    auto c_err = c_cur;
    for (std::size_t i = 0; i < n; ++i)
        for (int m = 0; m < 3; ++m) {
            c_cur[i][m].assign(nt_fine, 1.0);
            c_new[i][m].assign(nt_fine, 0.0);
            c_err[i][m].assign(nt_fine, 0.0);
        }
    std::vector<std::array<std::vector<double>, 3>> kernel(n);
    bool have_kernel = false;

    SelfConsistentResult res;

    for (int iter = 0; iter < opt.max_iter; ++iter) {
        // kernel update with damping
        for (std::size_t i = 0; i < n; ++i) {
            for (int m = 0; m < 3; ++m) {
                std::vector<double> fresh(nt_fine, 0.0);
                for (std::size_t j = 0; j < n; ++j) {
                    const double w = j2[i * n + j];
                    if (w == 0.0) continue;
                    const double pre = kappa * kappa * gsq[m] * w;
                    for (std::size_t k = 0; k < nt_fine; ++k)
                        fresh[k] += pre * c_cur[j][m][k];
                }
                if (!have_kernel) {
                    kernel[i][m] = std::move(fresh);
                } else {
                    for (std::size_t k = 0; k < nt_fine; ++k)
                        kernel[i][m][k] = (1.0 - opt.damping) * kernel[i][m][k] +
                                          opt.damping * fresh[k];
                }
            }
        }
        have_kernel = true;

        parallel_for(n, [&](std::size_t i) {
            std::array<NoiseSampler, 3> samplers = {
                NoiseSampler(NoiseKernel{0, i, dt, kernel[i][0]}, NoiseSampler::Mode::Projected),
                NoiseSampler(NoiseKernel{1, i, dt, kernel[i][1]}, NoiseSampler::Mode::Projected),
                NoiseSampler(NoiseKernel{2, i, dt, kernel[i][2]}, NoiseSampler::Mode::Projected)};
            RngStream rng(opt.seed, "dmft-noise", static_cast<std::uint64_t>(iter) * n + i);
            std::array<std::vector<double>, 3> batch;
            for (int m = 0; m < 3; ++m) batch[m] = samplers[m].sample_batch(rng, opt.n_noise);
            std::array<std::vector<double>, 3> sum, sum2;
            for (int m = 0; m < 3; ++m) {
                sum[m].assign(nt_fine, 0.0);
                sum2[m].assign(nt_fine, 0.0);
            }
            for (std::size_t inst = 0; inst < opt.n_noise; ++inst) {
                const double* bx = batch[0].data() + inst * nt_fine;
                const double* by = batch[1].data() + inst * nt_fine;
                const double* bz = batch[2].data() + inst * nt_fine;
                Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
                for (int m = 0; m < 3; ++m) {
                    sum[m][0] += 1.0;
                    sum2[m][0] += 1.0;
                }
                for (std::size_t k = 0; k + 1 < nt_fine; ++k) {
                    r = rotation_about(Eigen::Vector3d(bx[k], by[k], bz[k]) * dt) * r;
                    for (int m = 0; m < 3; ++m) {
                        const double v = r(m, m);
                        sum[m][k + 1] += v;
                        sum2[m][k + 1] += v * v;
                    }
                }
            }
            const double nn = static_cast<double>(opt.n_noise);
            for (int m = 0; m < 3; ++m) {
                for (std::size_t k = 0; k < nt_fine; ++k) {
                    const double mean = sum[m][k] / nn;
                    c_new[i][m][k] = mean;
                    const double var = std::max(0.0, sum2[m][k] / nn - mean * mean);
                    c_err[i][m][k] = nn > 1 ? std::sqrt(var / (nn - 1)) : 0.0;
                }
            }
        });

        // L2 metric (1/T) int |C1 - C2|^2, approximated by the grid mean
        double dmax = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (int m = 0; m < 3; ++m) {
                double acc = 0.0;
                for (std::size_t k = 0; k < nt_fine; ++k) {
                    const double d = c_new[i][m][k] - c_cur[i][m][k];
                    acc += d * d;
                }
                dmax = std::max(dmax, acc / static_cast<double>(nt_fine));
            }
        res.iteration_distance.push_back(dmax);
        std::swap(c_cur, c_new);
        res.iterations = iter + 1;
        if (dmax < opt.tol) {
            res.converged = true;
            break;
        }
    }

    res.spins.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (int m = 0; m < 3; ++m) {
            CorrelatorTrace& tr = res.spins[i][m];
            tr.axis = m == 0 ? "XX" : (m == 1 ? "YY" : "ZZ");
            tr.time = t_grid;
            tr.value.resize(t_grid.size());
            tr.stderr_.resize(t_grid.size());
            for (std::size_t q = 0; q < t_grid.size(); ++q) {
                tr.value[q] = c_cur[i][m][q * refine];
                tr.stderr_[q] = c_err[i][m][q * refine];
            }
            tr.meta["solver"] = "dmft";
            tr.meta["spin"] = std::to_string(i);
            tr.meta["converged"] = res.converged ? "true" : "false";
        }
    }
    return res;
}

} // namespace dxl
