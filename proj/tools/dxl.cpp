#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <iostream>

#include "dxl/analysis/fit.hpp"
#include "dxl/cli/config.hpp"
#include "dxl/cli/runner.hpp"
#include "dxl/core/csv.hpp"
#include "dxl/core/errors.hpp"
#include "dxl/exact/calibration.hpp"

namespace {

// every config key doubles as a --key flag; flags override the file
void add_config_flags(CLI::App* app, std::vector<std::pair<std::string, std::string>>& kv) {
    static const char* keys[] = {"solver",  "n",         "m",          "n_t",     "n_noise",
                                 "n_disorder", "lambda", "theta",      "g",       "t_max",
                                 "n_points",  "r_min",   "j0_threshold", "seed",  "out",
                                 "disorder_w", "tau_wind", "plane",    "pair_l",  "c_min",
                                 "substep",   "tol",     "max_iter", "dtwa_step"};
    for (const char* key : keys) {
        app->add_option_function<std::string>(
            "--" + std::string(key),
            [&kv, key](const std::string& v) { kv.emplace_back(key, v); });
    }
}

dxl::RunConfig build_config(const std::string& config_path,
                            const std::vector<std::pair<std::string, std::string>>& kv) {
    dxl::RunConfig cfg;
    if (!config_path.empty()) cfg = dxl::parse_config_file(config_path);
    for (const auto& [k, v] : kv) dxl::apply_key(cfg, k, v);
    return cfg;
}

int guarded(const std::function<void()>& body) {
    try {
        body();
        return static_cast<int>(dxl::ExitCode::Ok);
    } catch (const dxl::ConfigError& e) {
        std::cerr << "error_kind = config\nerror = " << e.what() << "\n";
        return static_cast<int>(dxl::ExitCode::Config);
    } catch (const dxl::InputError& e) {
        std::cerr << "error_kind = config\nerror = " << e.what() << "\n";
        return static_cast<int>(dxl::ExitCode::Config);
    } catch (const dxl::ResourceError& e) {
        std::cerr << "error_kind = resource\nerror = " << e.what() << "\n";
        return static_cast<int>(dxl::ExitCode::Resource);
    } catch (const std::exception& e) {
        std::cerr << "error_kind = numerical\nerror = " << e.what() << "\n";
        return static_cast<int>(dxl::ExitCode::Numerical);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dxl: thermalization dynamics of disordered dipolar XXZ ensembles"};
    app.require_subcommand(1);

    // run
    auto* cmd_run = app.add_subcommand("run", "execute one solver run");
    std::string run_config;
    cmd_run->add_option("--config", run_config, "key = value config file");
    std::vector<std::pair<std::string, std::string>> run_kv;
    add_config_flags(cmd_run, run_kv);

    // sweep
    auto* cmd_sweep = app.add_subcommand("sweep", "campaign over a lambda or theta grid");
    std::string sweep_config, sweep_param = "theta", sweep_values, sweep_out = "runs/sweep";
    cmd_sweep->add_option("--config", sweep_config, "base run config file");
    cmd_sweep->add_option("--param", sweep_param, "lambda or theta");
    cmd_sweep->add_option("--values", sweep_values, "comma-separated grid values")->required();
    cmd_sweep->add_option("--out-dir", sweep_out, "campaign directory");
    std::vector<std::pair<std::string, std::string>> sweep_kv;
    add_config_flags(cmd_sweep, sweep_kv);

    // fit
    auto* cmd_fit = app.add_subcommand("fit", "stretched-exponential fit of a trace CSV");
    std::string fit_input, fit_axis = "XX";
    double fit_cmin = 0.2;
    bool fit_weighted = false;
    cmd_fit->add_option("--input", fit_input, "trace CSV path")->required();
    cmd_fit->add_option("--axis", fit_axis, "axis label for the record");
    cmd_fit->add_option("--c-min", fit_cmin, "fit threshold (default 0.2)");
    cmd_fit->add_flag("--weighted", fit_weighted, "weight residuals by 1/stderr");
    bool fit_triple_log = false;
    cmd_fit->add_flag("--triple-log", fit_triple_log,
                      "also print ln t, ln(-ln C) plot coordinates");

    // calibrate-kappa
    auto* cmd_cal = app.add_subcommand("calibrate-kappa",
                                       "determine the convention factor against the dense oracle");
    int cal_checks = 20;
    cmd_cal->add_option("--checks", cal_checks, "number of randomized verification points");

    // oracle <ising>
    auto* cmd_oracle = app.add_subcommand("oracle", "closed-form oracles");
    std::string oracle_kind;
    cmd_oracle->add_option("kind", oracle_kind, "oracle name (ising)")->required();
    std::string oracle_config;
    cmd_oracle->add_option("--config", oracle_config, "key = value config file");
    std::vector<std::pair<std::string, std::string>> oracle_kv;
    add_config_flags(cmd_oracle, oracle_kv);

    // do-protocol
    auto* cmd_do = app.add_subcommand("do-protocol", "disorder-order measurement emulation");
    std::string do_config;
    cmd_do->add_option("--config", do_config, "key = value config file");
    std::vector<std::pair<std::string, std::string>> do_kv;
    add_config_flags(cmd_do, do_kv);

    CLI11_PARSE(app, argc, argv);

    if (cmd_run->parsed())
        return guarded([&] { dxl::run(build_config(run_config, run_kv)); });

    if (cmd_sweep->parsed())
        return guarded([&] {
            dxl::SweepSpec spec;
            spec.parameter = sweep_param;
            std::istringstream is(sweep_values);
            std::string tok;
            while (std::getline(is, tok, ',')) spec.values.push_back(std::stod(tok));
            spec.base = build_config(sweep_config, sweep_kv);
            if (!spec.base.lambda && !spec.base.theta && !spec.base.g_explicit)
                spec.base.lambda = 0.0;  // placeholder; overwritten per point
            dxl::run_sweep(spec, sweep_out);
        });

    if (cmd_fit->parsed())
        return guarded([&] {
            auto tr = dxl::read_trace_csv(fit_input);
            tr.axis = fit_axis;
            dxl::FitOptions opt;
            opt.c_min = fit_cmin;
            opt.weighted = fit_weighted;
            auto fit = dxl::fit_stretched_exponential(tr, opt);
            fit.window_sensitive = fit_axis == "ZZ";
            std::cout << dxl::fit_record(fit, fit_axis, "-");
            if (fit_triple_log) {
                auto tl = dxl::triple_log_coordinates(tr);
                std::cout << "triple_log_skipped = " << tl.skipped << "\n"
                          << "ln_t,ln_neg_ln_c\n";
                for (const auto& p : tl.points)
                    std::cout << dxl::fmt_g17(p.ln_t) << ',' << dxl::fmt_g17(p.ln_neg_ln_c)
                              << "\n";
            }
        });

    if (cmd_cal->parsed())
        return guarded([&] {
            auto t0 = std::chrono::steady_clock::now();
            auto rep = dxl::calibrate_kappa(cal_checks);
            double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            std::printf("kappa = %.17g\nmax_deviation = %.3g\nn_checks = %d\nruntime_s = %.3f\n",
                        rep.kappa, rep.max_deviation, rep.n_checks, dt);
            if (rep.max_deviation > 1e-12)
                throw dxl::NumericalError("calibration verification exceeded 1e-12");
        });

    if (cmd_oracle->parsed())
        return guarded([&] {
            if (oracle_kind != "ising")
                throw dxl::ConfigError("unknown oracle '" + oracle_kind + "'");
            auto cfg = build_config(oracle_config, oracle_kv);
            cfg.solver = "oracle-ising";
            if (!cfg.lambda && !cfg.theta && !cfg.g_explicit)
                cfg.g_explicit = dxl::AnisotropyVector{0.0, 0.0, 1.0};
            dxl::run(cfg);
        });

    if (cmd_do->parsed())
        return guarded([&] {
            auto cfg = build_config(do_config, do_kv);
            cfg.solver = "do-protocol";
            dxl::run(cfg);
        });

    return 0;
}
