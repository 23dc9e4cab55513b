#include "dxl/model/dipolar.hpp"

#include <cmath>
#include <sstream>

#include "dxl/core/csv.hpp"
#include "dxl/core/errors.hpp"
#include "dxl/core/rng.hpp"

namespace dxl {

void DipolarModel::validate() const {
    double norm = std::sqrt(quantization_axis[0] * quantization_axis[0] +
                            quantization_axis[1] * quantization_axis[1] +
                            quantization_axis[2] * quantization_axis[2]);
    if (std::fabs(norm - 1.0) > 1e-12)
        throw InputError("quantization axis must be a unit vector");
    if (!(j0 > 0) || !(a > 0)) throw InputError("j0 and a must be positive");
    if (r_min && !(*r_min > 0 && *r_min < a))
        throw InputError("r_min must satisfy 0 < r_min < a");
}

std::string EnsembleGeometry::to_csv() const {
    std::ostringstream os;
    os << "index,x,y,z\n";
    for (std::size_t i = 0; i < n; ++i)
        os << i << ',' << fmt_g17(positions[i][0]) << ',' << fmt_g17(positions[i][1]) << ','
           << fmt_g17(positions[i][2]) << '\n';
    return os.str();
}

double CouplingMatrix::mean_row_sum_sq() const {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) total += j[i * n + k] * j[i * n + k];
    return n ? total / static_cast<double>(n) : 0.0;
}

namespace {

std::array<double, 3> min_image(const std::array<double, 3>& a, const std::array<double, 3>& b,
                                double box) {
    std::array<double, 3> d;
    for (int c = 0; c < 3; ++c) {
        d[c] = a[c] - b[c];
        d[c] -= box * std::round(d[c] / box);
    }
    return d;
}

double norm3(const std::array<double, 3>& v) {
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

bool has_close_pair(const EnsembleGeometry& g, std::size_t i, double r_min) {
    for (std::size_t k = 0; k < g.n; ++k) {
        if (k == i) continue;
        if (norm3(min_image(g.positions[i], g.positions[k], g.box_length)) < r_min) return true;
    }
    return false;
}

} // namespace

EnsembleGeometry sample_positions(std::size_t n, const DipolarModel& model, std::uint64_t seed) {
    if (n < 1) throw InputError("sample_positions requires N >= 1");
    model.validate();
    EnsembleGeometry g;
    g.n = n;
    g.box_length = std::cbrt(static_cast<double>(n)) * model.a;
    g.seed = seed;
    g.positions.resize(n);
    RngStream rng(seed, "geometry");
    for (auto& p : g.positions)
        for (int c = 0; c < 3; ++c) p[c] = rng.uniform(0.0, g.box_length);

    if (model.r_min) {
        // Excluded volume: re-draw offending spins until all minimum-image
        // pair distances reach r_min. The draw order is fixed, so the result
        // is a pure function of (n, model, seed).
        const double rmin = *model.r_min;
        const std::size_t max_rounds = 10000;
        std::size_t round = 0;
        bool dirty = true;
        while (dirty) {
            if (++round > max_rounds)
                throw NumericalError("excluded-volume resampling did not terminate; "
                                     "r_min too large for this density");
            dirty = false;
            for (std::size_t i = 0; i < n; ++i) {
                while (has_close_pair(g, i, rmin)) {
                    for (int c = 0; c < 3; ++c) g.positions[i][c] = rng.uniform(0.0, g.box_length);
                    dirty = true;
                }
            }
        }
    }
    return g;
}

CouplingMatrix coupling_matrix(const EnsembleGeometry& g, const DipolarModel& model) {
    model.validate();
    const double expected_box = std::cbrt(static_cast<double>(g.n)) * model.a;
    if (std::fabs(expected_box - g.box_length) > 1e-9 * model.a)
        throw InputError("geometry and model disagree on the separation scale a");

    CouplingMatrix m;
    m.n = g.n;
    m.j.assign(g.n * g.n, 0.0);
    m.provenance = CouplingProvenance::DipolarFromGeometry;
    const auto& axis = model.quantization_axis;
    const double unit = model.energy_unit();  // entries divided by J = j0/a^3
    for (std::size_t i = 0; i < g.n; ++i) {
        for (std::size_t k = i + 1; k < g.n; ++k) {
            auto d = min_image(g.positions[i], g.positions[k], g.box_length);
            double r = norm3(d);
            if (r == 0.0)
                throw NumericalError("degenerate geometry: coincident spins " +
                                     std::to_string(i) + " and " + std::to_string(k));
            // clamping shortens the radial factor only; the angle keeps the
            // pair's actual orientation
            double cosq = (d[0] * axis[0] + d[1] * axis[1] + d[2] * axis[2]) / r;
            if (model.r_min && r < *model.r_min) r = *model.r_min;
            double v = model.j0 * (3.0 * cosq * cosq - 1.0) / (r * r * r) / unit;
            m.at(i, k) = v;
            m.at(k, i) = v;
        }
    }
    return m;
}

CouplingMatrix sample_sy_couplings(std::size_t n, std::uint64_t seed) {
    if (n < 2) throw InputError("sample_sy_couplings requires N >= 2");
    CouplingMatrix m;
    m.n = n;
    m.j.assign(n * n, 0.0);
    m.provenance = CouplingProvenance::SachdevYe;
    RngStream rng(seed, "sy-couplings");
    const double sigma = std::sqrt(2.0 / static_cast<double>(n));  // variance 2 J^2 / N
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = i + 1; k < n; ++k) {
            double v = sigma * rng.gaussian();
            m.at(i, k) = v;
            m.at(k, i) = v;
        }
    }
    return m;
}

} // namespace dxl
