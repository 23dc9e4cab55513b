#include "dxl/meanfield/cluster.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <memory>
#include <numeric>

#include "dxl/core/errors.hpp"
#include "dxl/exact/basis.hpp"
#include "dxl/core/parallel.hpp"
#include "dxl/core/rng.hpp"
#include "dxl/exact/calibration.hpp"
#include "dxl/meanfield/noise.hpp"

namespace dxl {

ClusterPartition cluster_partition(const CouplingMatrix& couplings, double j0_threshold) {
    if (!(j0_threshold > 0)) throw InputError("cluster_partition: J_0 must be positive");
    const std::size_t n = couplings.n;
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::fabs(couplings(i, j)) >= j0_threshold) {
                std::size_t a = find(i), b = find(j);
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            }

    ClusterPartition part;
    part.threshold = j0_threshold;
    part.cluster_of.assign(n, 0);
    std::vector<long> label_to_idx(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t root = find(i);
        if (label_to_idx[root] < 0) {
            label_to_idx[root] = static_cast<long>(part.clusters.size());
            part.clusters.emplace_back();
        }
        std::size_t idx = static_cast<std::size_t>(label_to_idx[root]);
        part.clusters[idx].push_back(i);
        part.cluster_of[i] = idx;
    }
    return part;
}

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

// 2x2 field propagator exp(-i (b.sigma/2) dt)
struct Gate {
    cxd m00, m01, m10, m11;
};

Gate field_gate(double bx, double by, double bz, double dt) {
    const double norm = std::sqrt(bx * bx + by * by + bz * bz);
    if (norm == 0.0) return {1.0, 0.0, 0.0, 1.0};
    const double phi = 0.5 * norm * dt;
    const double c = std::cos(phi), s = std::sin(phi);
    const double nx = bx / norm, ny = by / norm, nz = bz / norm;
    return {cxd(c, -s * nz), cxd(-s * ny, -s * nx), cxd(s * ny, -s * nx), cxd(c, s * nz)};
}

// Left-multiply a column-major block (matrix or vector) by the gate acting
// on one site.
void apply_gate_rows(cxd* data, std::size_t rows, std::size_t cols, std::size_t site,
                     const Gate& gate) {
    const std::size_t bit = std::size_t{1} << site;
    for (std::size_t c = 0; c < cols; ++c) {
        cxd* col = data + c * rows;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r & bit) continue;
            const cxd u0 = col[r], u1 = col[r | bit];
            col[r] = gate.m00 * u0 + gate.m01 * u1;
            col[r | bit] = gate.m10 * u0 + gate.m11 * u1;
        }
    }
}

// Cluster-basis sigma application for the typicality path.
void apply_sigma_vec(const VectorXcd& in, VectorXcd& out, std::size_t site, int axis) {
    const std::size_t d = in.size();
    const std::size_t bit = std::size_t{1} << site;
    if (axis == 2) {
        for (std::size_t b = 0; b < d; ++b) out[b] = ((b & bit) ? -1.0 : 1.0) * in[b];
        return;
    }
    for (std::size_t b = 0; b < d; ++b) {
        const std::size_t f = b ^ bit;
        if (axis == 0)
            out[f] = in[b];
        else
            out[f] = ((b & bit) ? cxd(0, -1) : cxd(0, 1)) * in[b];
    }
}

// Infinite-temperature trace Re Tr(U^dag sigma U sigma)/d for one site/axis.
double trace_autocorr(const MatrixXcd& u, std::size_t site, int axis) {
    const std::size_t d = u.rows();
    const std::size_t bit = std::size_t{1} << site;
    cxd acc = 0.0;
    if (axis == 2) {
        for (Eigen::Index c = 0; c < u.cols(); ++c) {
            const double zc = (static_cast<std::size_t>(c) & bit) ? -1.0 : 1.0;
            const cxd* col = u.col(c).data();
            for (std::size_t r = 0; r < d; ++r) {
                const double zr = (r & bit) ? -1.0 : 1.0;
                acc += zr * zc * std::norm(col[r]);
            }
        }
    } else if (axis == 0) {
        // sum_{b,c} conj(U(b, c^bit)) U(b^bit, c)
        for (std::size_t c = 0; c < d; ++c) {
            const cxd* colf = u.col(c ^ bit).data();
            const cxd* col = u.col(c).data();
            for (std::size_t b = 0; b < d; ++b) acc += std::conj(colf[b]) * col[b ^ bit];
        }
    } else {
        // -sum_{a,c} s(a) s(c) conj(U(c^bit, a)) U(c, a^bit)
        for (std::size_t a = 0; a < d; ++a) {
            const double sa = (a & bit) ? -1.0 : 1.0;
            const cxd* cola = u.col(a).data();
            const cxd* colaf = u.col(a ^ bit).data();
            for (std::size_t c = 0; c < d; ++c) {
                const double sc = (c & bit) ? -1.0 : 1.0;
                acc -= sa * sc * std::conj(cola[c ^ bit]) * colaf[c];
            }
        }
    }
    return acc.real() / static_cast<double>(d);
}

struct ClusterOps {
    std::vector<std::size_t> members;
    std::size_t d = 0;
    MatrixXcd a_half;  // exp(-i H_coh dt/2)
};

MatrixXcd cluster_hcoh(const CouplingMatrix& jm, const std::vector<std::size_t>& members,
                       const AnisotropyVector& g) {
    const std::size_t nc = members.size();
    const std::size_t d = std::size_t{1} << nc;
    MatrixXcd h = MatrixXcd::Zero(d, d);
    VectorXcd tmp(d), tmp2(d);
    for (std::size_t a = 0; a < nc; ++a) {
        for (std::size_t b = a + 1; b < nc; ++b) {
            const double j = jm(members[a], members[b]);
            if (j == 0.0) continue;
            for (int axis = 0; axis < 3; ++axis) {
                const double gmu = axis == 0 ? g.x : (axis == 1 ? g.y : g.z);
                if (gmu == 0.0) continue;
                // 0.25 j g sigma_a sigma_b added column by column
                for (std::size_t c = 0; c < d; ++c) {
                    tmp.setZero();
                    tmp[c] = 1.0;
                    apply_sigma_vec(tmp, tmp2, a, axis);
                    apply_sigma_vec(tmp2, tmp, b, axis);
                    h.col(c) += 0.25 * j * gmu * tmp;
                }
            }
        }
    }
    return h;
}

} // namespace

SelfConsistentResult cdmft_solve(const CouplingMatrix& couplings, const AnisotropyVector& g,
                                 double j0_threshold, const std::vector<double>& t_grid,
                                 const MeanFieldOptions& opt, const CdmftCaps& caps) {
    if (opt.max_iter < 1) throw InputError("cdmft: max_iter >= 1 required");
    if (t_grid.size() < 2) throw InputError("cdmft: need at least 2 grid points");
    const double cell = t_grid[1] - t_grid[0];
    for (std::size_t k = 1; k < t_grid.size(); ++k)
        if (std::fabs((t_grid[k] - t_grid[k - 1]) - cell) > 1e-9 * cell)
            throw InputError("cdmft requires a uniform time grid");

    const std::size_t n = couplings.n;
    const double kappa = conventions().kappa;
    ClusterPartition part = cluster_partition(couplings, j0_threshold);
    for (const auto& cl : part.clusters)
        if (cl.size() > caps.quantum_cap)
            throw ResourceError("cdmft: cluster of size " + std::to_string(cl.size()) +
                                " exceeds the quantum cap " + std::to_string(caps.quantum_cap) +
                                "; raise J_0");

    const int refine = std::max(1, static_cast<int>(std::ceil(cell / opt.substep - 1e-12)));
    const double dt = cell / refine;
    const std::size_t nt_fine = (t_grid.size() - 1) * refine + 1;
    const double gsq[3] = {g.x * g.x, g.y * g.y, g.z * g.z};

    // J^2 with intra-cluster pairs masked out of the kernels
    std::vector<double> j2(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (part.cluster_of[i] != part.cluster_of[j]) {
                const double v = couplings(i, j);
                j2[i * n + j] = v * v;
            }

    std::vector<ClusterOps> ops(part.clusters.size());
    for (std::size_t c = 0; c < part.clusters.size(); ++c) {
        ops[c].members = part.clusters[c];
        ops[c].d = std::size_t{1} << part.clusters[c].size();
        MatrixXcd h = cluster_hcoh(couplings, part.clusters[c], g);
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
        VectorXcd phases(ops[c].d);
        for (std::size_t a = 0; a < ops[c].d; ++a)
            phases[a] = std::polar(1.0, -es.eigenvalues()[a] * dt * 0.5);
        ops[c].a_half = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    }

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
    for (const auto& cl : part.clusters) res.cluster_sizes.push_back(cl.size());

    const std::size_t block_size = 8;

    for (int iter = 0; iter < opt.max_iter; ++iter) {
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
                        kernel[i][m][k] =
                            (1.0 - opt.damping) * kernel[i][m][k] + opt.damping * fresh[k];
                }
            }
        }
        have_kernel = true;

        for (std::size_t c = 0; c < part.clusters.size(); ++c) {
            const auto& members = ops[c].members;
            const std::size_t nc = members.size();
            const std::size_t d = ops[c].d;
            const bool dense = nc <= caps.dense_cap;

            std::vector<std::unique_ptr<NoiseSampler>> samplers(nc * 3);
            for (std::size_t a = 0; a < nc; ++a)
                for (int m = 0; m < 3; ++m)
                    samplers[a * 3 + m] = std::make_unique<NoiseSampler>(
                        NoiseKernel{m, members[a], dt, kernel[members[a]][m]},
                        NoiseSampler::Mode::Projected);

            const std::size_t n_blocks = (opt.n_noise + block_size - 1) / block_size;
            // per-block accumulators: [block][member*3+axis][time]
            std::vector<std::vector<std::vector<double>>> bsum(n_blocks), bsum2(n_blocks);

            parallel_for(n_blocks, [&](std::size_t blk) {
                auto& s1 = bsum[blk];
                auto& s2 = bsum2[blk];
                s1.assign(nc * 3, std::vector<double>(nt_fine, 0.0));
                s2.assign(nc * 3, std::vector<double>(nt_fine, 0.0));
                const std::size_t lo = blk * block_size;
                const std::size_t hi = std::min(opt.n_noise, lo + block_size);

                std::vector<std::vector<double>> field(nc * 3, std::vector<double>(nt_fine));
                RngStream rng(opt.seed, "cdmft-noise",
                              (static_cast<std::uint64_t>(iter) * part.clusters.size() + c),
                              blk);
                MatrixXcd u;
                std::vector<VectorXcd> states;
                VectorXcd scratch(d), scratch2(d);

                for (std::size_t inst = lo; inst < hi; ++inst) {
                    for (std::size_t a = 0; a < nc; ++a)
                        for (int m = 0; m < 3; ++m)
                            samplers[a * 3 + m]->sample(rng, field[a * 3 + m].data());

                    auto record = [&](std::size_t k, std::size_t a, int m, double v) {
                        s1[a * 3 + m][k] += v;
                        s2[a * 3 + m][k] += v * v;
                    };

                    if (dense) {
                        u = MatrixXcd::Identity(d, d);
                        for (std::size_t a = 0; a < nc; ++a)
                            for (int m = 0; m < 3; ++m) record(0, a, m, 1.0);
                        for (std::size_t k = 0; k + 1 < nt_fine; ++k) {
                            u = ops[c].a_half * u;
                            for (std::size_t a = 0; a < nc; ++a)
                                apply_gate_rows(u.data(), d, d, a,
                                                field_gate(field[a * 3 + 0][k], field[a * 3 + 1][k],
                                                           field[a * 3 + 2][k], dt));
                            u = ops[c].a_half * u;
                            for (std::size_t a = 0; a < nc; ++a)
                                for (int m = 0; m < 3; ++m)
                                    record(k + 1, a, m, trace_autocorr(u, a, m));
                        }
                    } else {
                        // typicality: one Haar state and 3 nc probes
                        states.assign(1 + 3 * nc, VectorXcd(d));
                        RngStream hrng(opt.seed, "cdmft-haar",
                                       static_cast<std::uint64_t>(iter) * n + members[0], inst);
                        for (std::size_t b = 0; b < d; ++b)
                            states[0][b] = cxd(hrng.gaussian(), hrng.gaussian());
                        states[0] /= states[0].norm();
                        for (std::size_t a = 0; a < nc; ++a)
                            for (int m = 0; m < 3; ++m)
                                apply_sigma_vec(states[0], states[1 + a * 3 + m], a, m);

                        auto measure = [&](std::size_t k) {
                            for (std::size_t a = 0; a < nc; ++a)
                                for (int m = 0; m < 3; ++m) {
                                    apply_sigma_vec(states[0], scratch, a, m);
                                    record(k, a, m,
                                           scratch.dot(states[1 + a * 3 + m]).real());
                                }
                        };
                        measure(0);
                        for (std::size_t k = 0; k + 1 < nt_fine; ++k) {
                            std::vector<Gate> gates(nc);
                            for (std::size_t a = 0; a < nc; ++a)
                                gates[a] = field_gate(field[a * 3 + 0][k], field[a * 3 + 1][k],
                                                      field[a * 3 + 2][k], dt);
                            for (auto& st : states) {
                                scratch = ops[c].a_half * st;
                                for (std::size_t a = 0; a < nc; ++a)
                                    apply_gate_rows(scratch.data(), d, 1, a, gates[a]);
                                st = ops[c].a_half * scratch;
                            }
                            measure(k + 1);
                        }
                    }
                }
            });

            const double nn = static_cast<double>(opt.n_noise);
            for (std::size_t a = 0; a < nc; ++a) {
                const std::size_t i = members[a];
                for (int m = 0; m < 3; ++m) {
                    for (std::size_t k = 0; k < nt_fine; ++k) {
                        double tot = 0.0, tot2 = 0.0;
                        for (std::size_t b = 0; b < n_blocks; ++b) {
                            tot += bsum[b][a * 3 + m][k];
                            tot2 += bsum2[b][a * 3 + m][k];
                        }
                        const double mean = tot / nn;
                        c_new[i][m][k] = mean;
                        const double var = std::max(0.0, tot2 / nn - mean * mean);
                        c_err[i][m][k] = nn > 1 ? std::sqrt(var / (nn - 1)) : 0.0;
                    }
                }
            }
        }

        double dmax = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (int m = 0; m < 3; ++m) {
                double acc = 0.0;
                for (std::size_t k = 0; k < nt_fine; ++k) {
                    const double diff = c_new[i][m][k] - c_cur[i][m][k];
                    acc += diff * diff;
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
            tr.meta["solver"] = "cdmft";
            tr.meta["spin"] = std::to_string(i);
            tr.meta["cluster"] = std::to_string(part.cluster_of[i]);
            tr.meta["converged"] = res.converged ? "true" : "false";
        }
    }
    return res;
}

} // namespace dxl
