#include "dxl/cli/runner.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dxl/analysis/fit.hpp"
#include "dxl/analysis/protocol.hpp"
#include "dxl/core/csv.hpp"
#include "dxl/core/errors.hpp"
#include "dxl/core/reduce.hpp"
#include "dxl/core/rng.hpp"
#include "dxl/dtwa/dtwa.hpp"
#include "dxl/exact/calibration.hpp"
#include "dxl/exact/dense.hpp"
#include "dxl/exact/pair.hpp"
#include "dxl/exact/typicality.hpp"
#include "dxl/meanfield/cluster.hpp"
#include "dxl/meanfield/dmft.hpp"

namespace dxl {

namespace {

std::uint64_t derived_seed(std::uint64_t master, const char* purpose, std::uint64_t idx) {
    return RngStream(master, purpose, idx).next_u64();
}

DipolarModel model_from(const RunConfig& cfg) {
    DipolarModel model;
    model.r_min = cfg.r_min;
    return model;
}

// Mean over realizations. With several realizations the scatter between them
// (which already contains each one's sampling noise) sets the error bar.
CorrelatorTrace average_traces(const std::vector<CorrelatorTrace>& reals) {
    CorrelatorTrace out = reals.front();
    const std::size_t m = reals.size();
    if (m == 1) return out;
    for (std::size_t q = 0; q < out.size(); ++q) {
        std::vector<double> vals(m);
        for (std::size_t r = 0; r < m; ++r) vals[r] = reals[r].value[q];
        auto ms = mean_stderr(vals);
        out.value[q] = ms.mean;
        out.stderr_[q] = ms.stderr_;
    }
    out.meta["M"] = std::to_string(m);
    return out;
}

std::vector<CorrelatorTrace> exact_traces(const RunConfig& cfg, bool sachdev_ye) {
    const auto g = cfg.anisotropy();
    auto grid = time_grid(cfg.t_max, cfg.n_points);
    const DipolarModel model = model_from(cfg);
    std::vector<std::vector<CorrelatorTrace>> by_real(cfg.m);
    for (std::size_t r = 0; r < cfg.m; ++r) {
        CouplingMatrix jm;
        if (sachdev_ye) {
            jm = sample_sy_couplings(cfg.n, derived_seed(cfg.seed, "sy", r));
        } else {
            auto geom = sample_positions(cfg.n, model, derived_seed(cfg.seed, "geom", r));
            jm = coupling_matrix(geom, model);
        }
        auto h = build_hamiltonian(jm, g);
        std::vector<CorrelatorTrace> traces;
        if (cfg.n <= kDenseSpinCap) {
            DenseSolver solver(h);
            traces = solver.local_correlators({0, 1, 2}, grid);
            for (auto& tr : traces) tr.stderr_.assign(grid.size(), 0.0);
            traces.push_back(solver.ramsey(grid));
            traces.back().stderr_.assign(grid.size(), 0.0);
        } else {
            KrylovOptions opt;
            opt.substep = cfg.substep;
            traces = local_autocorrelator_typicality(h, {0, 1, 2}, grid,
                                                     derived_seed(cfg.seed, "haar", r), opt);
            for (auto& tr : traces) tr.stderr_.assign(grid.size(), 0.0);
            traces.push_back(global_ramsey_krylov(h, grid, opt));
            traces.back().stderr_.assign(grid.size(), 0.0);
        }
        by_real[r] = std::move(traces);
    }
    std::vector<CorrelatorTrace> out;
    for (std::size_t a = 0; a < by_real.front().size(); ++a) {
        std::vector<CorrelatorTrace> column;
        for (auto& reals : by_real) column.push_back(reals[a]);
        out.push_back(average_traces(column));
    }
    for (auto& tr : out) {
        tr.meta["solver"] = sachdev_ye ? "sy" : "exact";
        tr.meta["N"] = std::to_string(cfg.n);
        tr.meta["seed"] = std::to_string(cfg.seed);
    }
    return out;
}

std::vector<CorrelatorTrace> dtwa_traces(const RunConfig& cfg) {
    const auto g = cfg.anisotropy();
    auto grid = time_grid(cfg.t_max, cfg.n_points);
    const DipolarModel model = model_from(cfg);
    std::vector<CouplingMatrix> geoms;
    for (std::size_t r = 0; r < cfg.m; ++r) {
        auto geom = sample_positions(cfg.n, model, derived_seed(cfg.seed, "geom", r));
        geoms.push_back(coupling_matrix(geom, model));
    }
    DtwaOptions opt;
    opt.step = cfg.dtwa_step;
    auto traces =
        dtwa_correlator(WoottersKind::InfiniteTemperature, geoms, g, cfg.n_t, grid, cfg.seed, opt);
    auto ramsey = dtwa_correlator(WoottersKind::Ramsey, geoms, g, cfg.n_t, grid,
                                  derived_seed(cfg.seed, "ramsey-batch", 0), opt);
    traces.push_back(ramsey.front());
    return traces;
}

std::vector<CorrelatorTrace> meanfield_traces(const RunConfig& cfg, bool cluster,
                                              std::vector<std::string>* notes) {
    const auto g = cfg.anisotropy();
    auto grid = time_grid(cfg.t_max, cfg.n_points);
    const DipolarModel model = model_from(cfg);
    MeanFieldOptions opt;
    opt.n_noise = cfg.n_noise;
    opt.tol = cfg.tol;
    opt.max_iter = cfg.max_iter;
    opt.substep = cfg.substep;

    std::vector<std::vector<CorrelatorTrace>> by_real(cfg.m);
    for (std::size_t r = 0; r < cfg.m; ++r) {
        auto geom = sample_positions(cfg.n, model, derived_seed(cfg.seed, "geom", r));
        auto jm = coupling_matrix(geom, model);
        opt.seed = derived_seed(cfg.seed, "meanfield", r);
        SelfConsistentResult res = cluster ? cdmft_solve(jm, g, cfg.j0_threshold, grid, opt)
                                           : dmft_solve(jm, g, grid, opt);
        if (notes) {
            std::ostringstream os;
            os << "realization " << r << (res.converged ? " converged" : " NOT converged")
               << " after " << res.iterations << " iterations; distances:";
            for (std::size_t it = 0; it < res.iteration_distance.size(); ++it)
                os << " " << it << ":" << res.iteration_distance[it];
            notes->push_back(os.str());
        }
        if (!res.converged)
            throw NumericalError("mean-field self-consistency did not converge within " +
                                 std::to_string(cfg.max_iter) + " iterations; final distance " +
                                 std::to_string(res.iteration_distance.back()));
        by_real[r] = {res.ensemble_average(0), res.ensemble_average(1), res.ensemble_average(2)};
    }
    std::vector<CorrelatorTrace> out;
    for (std::size_t a = 0; a < 3; ++a) {
        std::vector<CorrelatorTrace> column;
        for (auto& reals : by_real) column.push_back(reals[a]);
        out.push_back(average_traces(column));
    }
    for (auto& tr : out) tr.meta["solver"] = cluster ? "cdmft" : "dmft";
    return out;
}

std::vector<CorrelatorTrace> protocol_traces(const RunConfig& cfg) {
    const auto g = cfg.anisotropy();
    auto grid = time_grid(cfg.t_max, cfg.n_points);
    const DipolarModel model = model_from(cfg);
    WindingPlane plane = cfg.plane == "XY" ? WindingPlane::XY
                                           : (cfg.plane == "YZ" ? WindingPlane::YZ : WindingPlane::ZX);
    std::vector<CorrelatorTrace> reals;
    for (std::size_t r = 0; r < cfg.m; ++r) {
        auto geom = sample_positions(cfg.n, model, derived_seed(cfg.seed, "geom", r));
        auto h = build_hamiltonian(coupling_matrix(geom, model), g);
        reals.push_back(simulate_do_protocol(h, cfg.disorder_w, cfg.tau_wind, plane, grid,
                                             cfg.n_disorder,
                                             derived_seed(cfg.seed, "do", r)));
    }
    return {average_traces(reals)};
}

} // namespace

std::vector<CorrelatorTrace> compute_traces(const RunConfig& cfg,
                                            std::vector<std::string>* notes) {
    cfg.validate();
    if (cfg.solver == "exact") return exact_traces(cfg, false);
    if (cfg.solver == "sy") return exact_traces(cfg, true);
    if (cfg.solver == "dtwa") return dtwa_traces(cfg);
    if (cfg.solver == "dmft") return meanfield_traces(cfg, false, notes);
    if (cfg.solver == "cdmft") return meanfield_traces(cfg, true, notes);
    if (cfg.solver == "do-protocol") return protocol_traces(cfg);
    if (cfg.solver == "pair") {
        auto grid = time_grid(cfg.t_max, cfg.n_points);
        std::vector<CorrelatorTrace> out;
        for (int axis : {0, 1, 2})
            out.push_back(pair_disorder_average(cfg.anisotropy(), axis, grid, cfg.pair_l,
                                                cfg.n_t, derived_seed(cfg.seed, "pair", axis)));
        return out;
    }
    if (cfg.solver == "oracle-ising") {
        auto grid = time_grid(cfg.t_max, cfg.n_points);
        return {ising_classical_oracle(cfg.n, cfg.m, model_from(cfg), grid, cfg.seed)};
    }
    throw ConfigError("unknown solver '" + cfg.solver + "'");
}

void run(const RunConfig& cfg) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out / "traces");

    std::vector<std::string> notes;
    auto traces = compute_traces(cfg, &notes);

    std::vector<std::pair<std::string, std::string>> files;  // relpath, hash
    for (const auto& tr : traces) {
        std::string rel = "traces/" + tr.axis + ".csv";
        std::string body = trace_to_csv(tr);
        write_file_atomic(cfg.out / rel, body);
        files.emplace_back(rel, content_hash(body));
    }

    // fits: one row per fitted trace, plus a structured record
    std::ostringstream fits, records;
    fits << "lambda_or_theta,axis,tau,nu,tau_err,nu_err\n";
    std::string param = cfg.lambda ? fmt_g17(*cfg.lambda) : (cfg.theta ? fmt_g17(*cfg.theta) : "");
    const std::string gstr = cfg.anisotropy().str();
    for (const auto& tr : traces) {
        FitOptions fopt;
        fopt.c_min = cfg.c_min;
        try {
            auto fit = fit_stretched_exponential(tr, fopt);
            fit.window_sensitive = tr.axis == "ZZ";
            fits << param << ',' << tr.axis << ',' << fmt_g17(fit.tau) << ',' << fmt_g17(fit.nu)
                 << ',' << fmt_g17(fit.tau_err) << ',' << fmt_g17(fit.nu_err) << '\n';
            records << fit_record(fit, tr.axis, gstr) << "\n";
        } catch (const InputError& e) {
            records << "axis = " << tr.axis << "\nfit_skipped = " << e.what() << "\n\n";
        }
    }
    write_file_atomic(cfg.out / "fits.csv", fits.str());
    files.emplace_back("fits.csv", content_hash(fits.str()));
    write_file_atomic(cfg.out / "fit_records.txt", records.str());
    files.emplace_back("fit_records.txt", content_hash(records.str()));

    if (!notes.empty()) {
        std::ostringstream conv;
        for (const auto& line : notes) conv << line << "\n";
        write_file_atomic(cfg.out / "convergence.txt", conv.str());
        files.emplace_back("convergence.txt", content_hash(conv.str()));
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream man;
    man << "artifact = dxl " << kVersion << "\n";
    for (const auto& [k, v] : cfg.echo()) man << k << " = " << v << "\n";
    man << "kappa = " << fmt_g17(conventions().kappa) << "\n";
    man << "wall_time_s = " << wall << "\n";
    for (const auto& [rel, hash] : files) man << "file = " << rel << " " << hash << "\n";
    write_file_atomic(cfg.out / "manifest.txt", man.str());
}

namespace {

bool point_complete(const std::filesystem::path& dir) {
    std::ifstream in(dir / "manifest.txt");
    if (!in) return false;
    std::string line;
    bool any = false;
    while (std::getline(in, line)) {
        if (line.rfind("file = ", 0) != 0) continue;
        std::istringstream ls(line.substr(7));
        std::string rel, hash;
        if (!(ls >> rel >> hash)) return false;
        std::error_code ec;
        if (!std::filesystem::exists(dir / rel, ec)) return false;
        if (content_hash(slurp(dir / rel)) != hash) return false;
        any = true;
    }
    return any;
}

} // namespace

void run_sweep(const SweepSpec& sweep, const std::filesystem::path& out_dir) {
    sweep.validate();
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    std::ostringstream summary, failures;
    summary << "lambda_or_theta,axis,tau,nu,tau_err,nu_err,label\n";
    std::size_t n_failed = 0;

    for (std::size_t idx = 0; idx < sweep.values.size(); ++idx) {
        const double value = sweep.values[idx];
        RunConfig cfg = sweep.base;
        cfg.lambda.reset();
        cfg.theta.reset();
        cfg.g_explicit.reset();
        if (sweep.parameter == "lambda") cfg.lambda = value;
        else cfg.theta = value;
        char name[48];
        std::snprintf(name, sizeof name, "point_%03zu", idx);
        cfg.out = out_dir / name;

        try {
            if (!point_complete(cfg.out)) run(cfg);
            // collect rows from the point's fits.csv
            std::ifstream fin(cfg.out / "fits.csv");
            std::string line;
            std::getline(fin, line);  // header
            const std::string label = special_point_label(sweep.parameter, value);
            while (std::getline(fin, line)) {
                if (line.empty()) continue;
                summary << line << ',' << label << '\n';
            }
        } catch (const std::exception& e) {
            ++n_failed;
            failures << name << " value=" << fmt_g17(value) << " error: " << e.what() << "\n";
        }
    }
    write_file_atomic(out_dir / "summary.csv", summary.str());
    if (n_failed > 0) write_file_atomic(out_dir / "failures.txt", failures.str());
    if (n_failed == sweep.values.size())
        throw NumericalError("sweep campaign failed: all " + std::to_string(n_failed) +
                             " points failed");
}

} // namespace dxl
