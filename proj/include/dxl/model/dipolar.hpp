#pragma once
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dxl {

// Dipolar coupling model J(r) = j0 (3 (B.r)^2 - 1)/r^3. Energies are quoted
// in units of J = j0/a^3 and lengths in units of a throughout.
struct DipolarModel {
    double j0 = 1.0;                                // coupling prefactor, energy x length^3
    double a = 1.0;                                 // typical inter-spin separation
    std::array<double, 3> quantization_axis{0, 0, 1};
    std::optional<double> r_min;                    // excluded-volume cutoff, 0 < r_min < a

    double energy_unit() const { return j0 / (a * a * a); }
    void validate() const;
};

// Spin positions sampled uniformly in a periodic box of side N^(1/3) a.
struct EnsembleGeometry {
    std::size_t n = 0;
    double box_length = 0.0;
    std::vector<std::array<double, 3>> positions;
    std::uint64_t seed = 0;

    std::string to_csv() const;  // header index,x,y,z in units of a
};

enum class CouplingProvenance { DipolarFromGeometry, SachdevYe };

// Symmetric pair couplings with zero diagonal, in units of J.
struct CouplingMatrix {
    std::size_t n = 0;
    std::vector<double> j;  // row-major n x n
    CouplingProvenance provenance = CouplingProvenance::DipolarFromGeometry;

    double operator()(std::size_t i, std::size_t k) const { return j[i * n + k]; }
    double& at(std::size_t i, std::size_t k) { return j[i * n + k]; }
    const double* row(std::size_t i) const { return j.data() + i * n; }

    // mean over sites of sum_j J_ij^2 (the per-spin coupling strength scale)
    double mean_row_sum_sq() const;
};

// N positions i.i.d. uniform in the periodic cube, deterministic in seed.
// With model.r_min set, offending spins are re-drawn (deterministically) until
// every minimum-image pair distance is at least r_min.
EnsembleGeometry sample_positions(std::size_t n, const DipolarModel& model, std::uint64_t seed);

// Minimum-image pairwise couplings; entries in units of J = j0/a^3.
// Residual pairs closer than r_min (possible only for externally built
// geometries) are evaluated at the clamped distance r_min.
CouplingMatrix coupling_matrix(const EnsembleGeometry& g, const DipolarModel& model);

// Sachdev-Ye couplings: i.i.d. N(0, 2 J^2/N) on the upper triangle, mirrored.
CouplingMatrix sample_sy_couplings(std::size_t n, std::uint64_t seed);

} // namespace dxl
