#pragma once
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dxl/model/anisotropy.hpp"

namespace dxl {

// One simulation run. All knobs are settable from a flat `key = value` config
// file and from CLI flags (flags win).
struct RunConfig {
    std::string solver;  // exact | dtwa | dmft | cdmft | pair | sy | do-protocol | oracle-ising
    std::size_t n = 8;
    std::size_t m = 100;           // geometry realizations
    std::size_t n_t = 2000;        // dTWA trajectories
    std::size_t n_noise = 1000;    // mean-field noise instances
    std::size_t n_disorder = 10000;  // disorder-order samples

    // anisotropy: exactly one of lambda / theta / g
    std::optional<double> lambda;
    std::optional<double> theta;
    std::optional<AnisotropyVector> g_explicit;

    double t_max = 2.0;
    std::size_t n_points = 101;
    std::optional<double> r_min;
    double j0_threshold = 1.75;  // cdmft clustering threshold, units of J
    std::uint64_t seed = 1;
    std::filesystem::path out = "runs/out";

    // disorder-order protocol
    double disorder_w = 8.0;     // bandwidth W (units of J)
    double tau_wind = 0.6283185307179586;  // winding time (1/J)
    std::string plane = "XY";

    double pair_l = 1.0;   // gaussian position scale for the pair solver
    double dtwa_step = 0.02;  // RK4 step for the dtwa solver
    double c_min = 0.2;    // fit threshold
    double substep = 0.01;
    double tol = 1e-2;
    int max_iter = 20;

    AnisotropyVector anisotropy() const;
    std::string anisotropy_label() const;  // "lambda=0.5" etc.
    std::map<std::string, std::string> echo() const;  // sorted key/value dump
    void validate() const;
};

// Parse `key = value` lines ('#' comments). Unknown keys are rejected.
RunConfig parse_config_file(const std::filesystem::path& path);

// Apply one key/value pair (shared by the file parser and flag handling).
void apply_key(RunConfig& cfg, const std::string& key, const std::string& value);

struct SweepSpec {
    std::string parameter;        // "lambda" | "theta"
    std::vector<double> values;   // strictly monotone, nonempty
    RunConfig base;

    void validate() const;
};

// Name tags for special Hamiltonians on sweep rows.
std::string special_point_label(const std::string& parameter, double value);

} // namespace dxl
