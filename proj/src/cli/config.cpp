#include "dxl/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dxl/core/csv.hpp"
#include "dxl/core/errors.hpp"

namespace dxl {

AnisotropyVector RunConfig::anisotropy() const {
    if (lambda) return parameterize_lambda(*lambda);
    if (theta) return parameterize_theta(*theta);
    if (g_explicit) return *g_explicit;
    throw ConfigError("no anisotropy given: set one of lambda, theta or g");
}

std::string RunConfig::anisotropy_label() const {
    if (lambda) return "lambda=" + fmt_g17(*lambda);
    if (theta) return "theta=" + fmt_g17(*theta);
    if (g_explicit) return "g=" + g_explicit->str();
    return "";
}

std::map<std::string, std::string> RunConfig::echo() const {
    std::map<std::string, std::string> kv;
    kv["solver"] = solver;
    kv["n"] = std::to_string(n);
    kv["m"] = std::to_string(m);
    kv["n_t"] = std::to_string(n_t);
    kv["n_noise"] = std::to_string(n_noise);
    kv["n_disorder"] = std::to_string(n_disorder);
    if (lambda) kv["lambda"] = fmt_g17(*lambda);
    if (theta) kv["theta"] = fmt_g17(*theta);
    if (g_explicit)
        kv["g"] = fmt_g17(g_explicit->x) + "," + fmt_g17(g_explicit->y) + "," +
                  fmt_g17(g_explicit->z);
    kv["t_max"] = fmt_g17(t_max);
    kv["n_points"] = std::to_string(n_points);
    if (r_min) kv["r_min"] = fmt_g17(*r_min);
    kv["j0_threshold"] = fmt_g17(j0_threshold);
    kv["seed"] = std::to_string(seed);
    kv["out"] = out.string();
    kv["disorder_w"] = fmt_g17(disorder_w);
    kv["tau_wind"] = fmt_g17(tau_wind);
    kv["plane"] = plane;
    kv["pair_l"] = fmt_g17(pair_l);
    kv["dtwa_step"] = fmt_g17(dtwa_step);
    kv["c_min"] = fmt_g17(c_min);
    kv["substep"] = fmt_g17(substep);
    kv["tol"] = fmt_g17(tol);
    kv["max_iter"] = std::to_string(max_iter);
    return kv;
}

void RunConfig::validate() const {
    static const std::vector<std::string> solvers = {
        "exact", "dtwa", "dmft", "cdmft", "pair", "sy", "do-protocol", "oracle-ising"};
    if (std::find(solvers.begin(), solvers.end(), solver) == solvers.end())
        throw ConfigError("unknown solver '" + solver + "'");
    int n_aniso = (lambda ? 1 : 0) + (theta ? 1 : 0) + (g_explicit ? 1 : 0);
    if (n_aniso != 1)
        throw ConfigError("exactly one of lambda, theta, g must be set (got " +
                          std::to_string(n_aniso) + ")");
    if (n < 1) throw ConfigError("n must be positive");
    if (m < 1) throw ConfigError("m must be positive");
    if (n_t < 1) throw ConfigError("n_t must be positive");
    if (n_noise < 1) throw ConfigError("n_noise must be positive");
    if (n_disorder < 1) throw ConfigError("n_disorder must be positive");
    if (n_points < 2) throw ConfigError("n_points must be at least 2");
    if (!(t_max > 0)) throw ConfigError("t_max must be positive");
    if (r_min && !(*r_min > 0 && *r_min < 1.0))
        throw ConfigError("r_min must lie in (0, a)");
    if (!(j0_threshold > 0)) throw ConfigError("j0_threshold must be positive");
    if (plane != "XY" && plane != "YZ" && plane != "ZX")
        throw ConfigError("plane must be one of XY, YZ, ZX");
    if (max_iter < 1) throw ConfigError("max_iter must be positive");
}

namespace {

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("field '" + key + "': cannot parse number from '" + v + "'");
    }
}

std::uint64_t parse_count(const std::string& key, const std::string& v) {
    double x = parse_double(key, v);
    if (x < 0 || x != std::floor(x))
        throw ConfigError("field '" + key + "': expected a nonnegative integer, got '" + v + "'");
    return static_cast<std::uint64_t>(x);
}

} // namespace

void apply_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "solver") cfg.solver = value;
    else if (key == "n") cfg.n = parse_count(key, value);
    else if (key == "m") cfg.m = parse_count(key, value);
    else if (key == "n_t") cfg.n_t = parse_count(key, value);
    else if (key == "n_noise") cfg.n_noise = parse_count(key, value);
    else if (key == "n_disorder") cfg.n_disorder = parse_count(key, value);
    else if (key == "lambda") cfg.lambda = parse_double(key, value);
    else if (key == "theta") cfg.theta = parse_double(key, value);
    else if (key == "g") {
        std::istringstream is(value);
        std::string a, b, c;
        if (!std::getline(is, a, ',') || !std::getline(is, b, ',') || !std::getline(is, c))
            throw ConfigError("field 'g': expected gx,gy,gz");
        cfg.g_explicit = AnisotropyVector{parse_double("g", a), parse_double("g", b),
                                          parse_double("g", c)};
    } else if (key == "t_max") cfg.t_max = parse_double(key, value);
    else if (key == "n_points") cfg.n_points = parse_count(key, value);
    else if (key == "r_min") cfg.r_min = parse_double(key, value);
    else if (key == "j0_threshold") cfg.j0_threshold = parse_double(key, value);
    else if (key == "seed") cfg.seed = parse_count(key, value);
    else if (key == "out") cfg.out = value;
    else if (key == "disorder_w") cfg.disorder_w = parse_double(key, value);
    else if (key == "tau_wind") cfg.tau_wind = parse_double(key, value);
    else if (key == "plane") cfg.plane = value;
    else if (key == "pair_l") cfg.pair_l = parse_double(key, value);
    else if (key == "dtwa_step") cfg.dtwa_step = parse_double(key, value);
    else if (key == "c_min") cfg.c_min = parse_double(key, value);
    else if (key == "substep") cfg.substep = parse_double(key, value);
    else if (key == "tol") cfg.tol = parse_double(key, value);
    else if (key == "max_iter") cfg.max_iter = static_cast<int>(parse_count(key, value));
    else throw ConfigError("unknown configuration key '" + key + "'");
}

RunConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    RunConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto strip = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string stripped = strip(line);
        if (stripped.empty()) continue;
        auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                              ": expected 'key = value'");
        apply_key(cfg, strip(stripped.substr(0, eq)), strip(stripped.substr(eq + 1)));
    }
    return cfg;
}

void SweepSpec::validate() const {
    if (parameter != "lambda" && parameter != "theta")
        throw ConfigError("sweep parameter must be 'lambda' or 'theta'");
    if (values.empty()) throw ConfigError("sweep grid is empty");
    bool inc = true, dec = true;
    for (std::size_t k = 1; k < values.size(); ++k) {
        inc = inc && values[k] > values[k - 1];
        dec = dec && values[k] < values[k - 1];
    }
    if (!(inc || dec)) throw ConfigError("sweep grid must be strictly monotone");
}

std::string special_point_label(const std::string& parameter, double value) {
    auto near = [&](double x) { return std::fabs(value - x) < 1e-9; };
    if (parameter == "theta") {
        if (near(-M_PI / 4)) return "Ising";
        if (near(0.0)) return "Heisenberg";
        if (near(M_PI / 4)) return "XY";
        if (near(M_PI / 2)) return "dipolar";
    } else if (parameter == "lambda") {
        if (near(-1.0)) return "Ising";
        if (near(0.0)) return "Heisenberg";
        if (near(0.5)) return "XY";
    }
    return "";
}

} // namespace dxl
