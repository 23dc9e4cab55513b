#pragma once
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "dxl/core/rng.hpp"

namespace dxl {

// Stationary covariance D(t) of the mean-field magnetic fluctuations along
// one axis, on a uniform time grid (values at lags 0..T-1).
struct NoiseKernel {
    int axis = 0;
    std::size_t spin = 0;
    double dt = 0.0;
    std::vector<double> d;  // D(k dt), energy^2
};

// Samples zero-mean Gaussian trajectories with the prescribed stationary
// covariance. `strict` builds the Cholesky factor of the Toeplitz covariance
// with a 1e-10 D(0) diagonal jitter and throws (naming the most negative
// eigenvalue) when that fails; `projected` clips negative eigenvalues to zero
// first, which the self-consistent solvers need for non-PSD iterates.
class NoiseSampler {
public:
    enum class Mode { Strict, Projected };

    NoiseSampler(const NoiseKernel& kernel, Mode mode);

    std::size_t length() const { return len_; }

    // one trajectory of `length` values
    void sample(RngStream& rng, double* out) const;

    // `count` trajectories, row-major (count x length)
    std::vector<double> sample_batch(RngStream& rng, std::size_t count) const;

private:
    std::size_t len_ = 0;
    Eigen::MatrixXd factor_;  // covariance = factor * factor^T
};

// Strict sampling with the default jitter (the library-facing operation).
std::vector<std::vector<double>> sample_noise(const NoiseKernel& kernel, std::size_t count,
                                              std::uint64_t seed);

} // namespace dxl
