#include "dxl/meanfield/noise.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "dxl/core/errors.hpp"

namespace dxl {

namespace {

Eigen::MatrixXd toeplitz(const std::vector<double>& d) {
    const Eigen::Index n = static_cast<Eigen::Index>(d.size());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = d[static_cast<std::size_t>(std::abs(i - j))];
    return m;
}

} // namespace

NoiseSampler::NoiseSampler(const NoiseKernel& kernel, Mode mode) {
    if (kernel.d.empty()) throw InputError("noise kernel is empty");
    len_ = kernel.d.size();
    if (kernel.d[0] <= 0.0) {
        // |D(t)| <= D(0), so a vanishing variance means the zero process
        factor_ = Eigen::MatrixXd::Zero(len_, len_);
        return;
    }
    Eigen::MatrixXd cov = toeplitz(kernel.d);
    const double jitter = 1e-10 * kernel.d[0];

    if (mode == Mode::Strict) {
        Eigen::MatrixXd c = cov;
        c.diagonal().array() += jitter;
        Eigen::LLT<Eigen::MatrixXd> llt(c);
        if (llt.info() != Eigen::Success) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
            throw NumericalError(
                "noise kernel covariance not positive semidefinite beyond jitter; most negative "
                "eigenvalue " +
                std::to_string(es.eigenvalues().minCoeff()));
        }
        factor_ = llt.matrixL();
        return;
    }

    // projected: self-consistency iterates are routinely indefinite at the
    // few-percent level. Plain Cholesky when the matrix happens to be PSD
    // (cheap, exact); otherwise clip negative eigenvalues.
    {
        Eigen::MatrixXd c = cov;
        c.diagonal().array() += jitter;
        Eigen::LLT<Eigen::MatrixXd> llt(c);
        if (llt.info() == Eigen::Success) {
            factor_ = llt.matrixL();
            return;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    Eigen::VectorXd w = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    factor_ = es.eigenvectors() * w.asDiagonal();
}

void NoiseSampler::sample(RngStream& rng, double* out) const {
    Eigen::VectorXd z(len_);
    for (std::size_t k = 0; k < len_; ++k) z[static_cast<Eigen::Index>(k)] = rng.gaussian();
    Eigen::Map<Eigen::VectorXd>(out, len_) = factor_ * z;
}

std::vector<double> NoiseSampler::sample_batch(RngStream& rng, std::size_t count) const {
    Eigen::MatrixXd z(len_, count);
    for (std::size_t c = 0; c < count; ++c)
        for (std::size_t k = 0; k < len_; ++k)
            z(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(c)) = rng.gaussian();
    Eigen::MatrixXd traj = (factor_ * z).transpose();  // count x len
    std::vector<double> out(count * len_);
    for (std::size_t c = 0; c < count; ++c)
        for (std::size_t k = 0; k < len_; ++k)
            out[c * len_ + k] = traj(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(k));
    return out;
}

std::vector<std::vector<double>> sample_noise(const NoiseKernel& kernel, std::size_t count,
                                              std::uint64_t seed) {
    NoiseSampler sampler(kernel, NoiseSampler::Mode::Strict);
    RngStream rng(seed, "noise-trajectories");
    std::vector<std::vector<double>> out(count);
    for (std::size_t c = 0; c < count; ++c) {
        out[c].resize(kernel.d.size());
        sampler.sample(rng, out[c].data());
    }
    return out;
}

} // namespace dxl
