#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "dxl/cli/config.hpp"
#include "dxl/cli/runner.hpp"
#include "dxl/core/csv.hpp"
#include "dxl/core/rng.hpp"
#include "dxl/exact/calibration.hpp"
#include "dxl/exact/pair.hpp"
#include "dxl/model/dipolar.hpp"

using namespace dxl;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
    fs::path p = fs::temp_directory_path() / ("dxl_test_" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

RunConfig minimal_exact() {
    RunConfig cfg;
    cfg.solver = "exact";
    cfg.n = 2;
    cfg.m = 1;
    cfg.g_explicit = AnisotropyVector{0, 0, 1};
    cfg.t_max = 1.0;
    cfg.n_points = 11;
    cfg.seed = 7;
    return cfg;
}

} // namespace

TEST_CASE("config file parsing and validation") {
    auto dir = temp_dir("cfg");
    {
        std::ofstream out(dir / "run.cfg");
        out << "# a comment\n"
            << "solver = exact\n"
            << "n = 8\n"
            << "lambda = 0.5\n"
            << "seed = 7\n";
    }
    auto cfg = parse_config_file(dir / "run.cfg");
    cfg.validate();
    CHECK(cfg.solver == "exact");
    CHECK(cfg.n == 8);
    CHECK(cfg.lambda == 0.5);
    // production-sized defaults
    CHECK(cfg.m == 100);
    CHECK(cfg.n_t == 2000);

    // conflicting anisotropy specs
    RunConfig both = cfg;
    apply_key(both, "theta", "0.3");
    CHECK_THROWS_AS(both.validate(), ConfigError);

    // unknown key names the field
    bool threw = false;
    try {
        apply_key(cfg, "nonsense", "1");
    } catch (const ConfigError& e) {
        threw = true;
        CHECK(std::string(e.what()).find("nonsense") != std::string::npos);
    }
    CHECK(threw);

    CHECK_THROWS_AS(apply_key(cfg, "n", "-3"), ConfigError);
}

TEST_CASE("run writes traces, fits and a complete manifest") {
    auto dir = temp_dir("run");
    auto cfg = minimal_exact();
    cfg.out = dir / "out";
    run(cfg);

    auto xx = read_trace_csv(cfg.out / "traces" / "XX.csv");
    // the Ising pair trace is the pair oracle at the realized coupling
    DipolarModel model;
    auto geom = sample_positions(2, model, RngStream(7, "geom", 0).next_u64());
    auto jm = coupling_matrix(geom, model);
    for (std::size_t q = 0; q < xx.size(); ++q)
        CHECK(xx.value[q] ==
              doctest::Approx(pair_exact({0, 0, 1}, jm(0, 1), 0, xx.time[q])).epsilon(1e-10));

    // manifest lists every artifact with its content hash
    std::ifstream man(cfg.out / "manifest.txt");
    REQUIRE(man.good());
    std::string line;
    std::size_t n_files = 0;
    bool has_kappa = false;
    while (std::getline(man, line)) {
        if (line.rfind("kappa = ", 0) == 0) has_kappa = true;
        if (line.rfind("file = ", 0) != 0) continue;
        std::istringstream ls(line.substr(7));
        std::string rel, hash;
        ls >> rel >> hash;
        CHECK(fs::exists(cfg.out / rel));
        CHECK(content_hash(slurp(cfg.out / rel)) == hash);
        ++n_files;
    }
    CHECK(has_kappa);
    CHECK(n_files >= 5);  // XX,YY,ZZ,ramsey + fits + records
    // no stray temp files
    for (const auto& e : fs::recursive_directory_iterator(cfg.out))
        CHECK(e.path().extension() != ".tmp");
}

TEST_CASE("reruns are byte-identical and independent of DXL_THREADS") {
    auto dir = temp_dir("det");
    RunConfig cfg;
    cfg.solver = "dtwa";
    cfg.n = 4;
    cfg.m = 2;
    cfg.n_t = 64;
    cfg.lambda = 0.5;
    cfg.t_max = 0.5;
    cfg.n_points = 6;
    cfg.seed = 3;
    cfg.dtwa_step = 0.005;

    setenv("DXL_THREADS", "1", 1);
    cfg.out = dir / "a";
    run(cfg);
    setenv("DXL_THREADS", "2", 1);
    cfg.out = dir / "b";
    run(cfg);
    unsetenv("DXL_THREADS");

    for (const char* rel : {"traces/XX.csv", "traces/YY.csv", "traces/ZZ.csv",
                            "traces/ramsey.csv", "fits.csv"})
        CHECK(slurp(dir / "a" / rel) == slurp(dir / "b" / rel));
}

TEST_CASE("sweep: labels, summary, resume") {
    auto dir = temp_dir("sweep");
    SweepSpec spec;
    spec.parameter = "theta";
    spec.values = {-M_PI / 4, 0.0, M_PI / 4, M_PI / 2};
    spec.base = minimal_exact();
    spec.base.g_explicit.reset();
    spec.base.n = 4;
    run_sweep(spec, dir);

    auto summary = slurp(dir / "summary.csv");
    CHECK(summary.find("Ising") != std::string::npos);
    CHECK(summary.find("Heisenberg") != std::string::npos);
    CHECK(summary.find("XY") != std::string::npos);
    CHECK(summary.find("dipolar") != std::string::npos);

    // resume: completed points keep their outputs untouched
    auto stamp = fs::last_write_time(dir / "point_001" / "traces" / "XX.csv");
    fs::remove(dir / "point_002" / "traces" / "XX.csv");  // damage one point
    run_sweep(spec, dir);
    CHECK(fs::last_write_time(dir / "point_001" / "traces" / "XX.csv") == stamp);
    CHECK(fs::exists(dir / "point_002" / "traces" / "XX.csv"));

    // single-point sweep produces the same fit rows as a plain run
    SweepSpec single;
    single.parameter = "lambda";
    single.values = {0.5};
    single.base = minimal_exact();
    single.base.g_explicit.reset();
    single.base.n = 4;
    run_sweep(single, dir / "single");
    RunConfig plain = single.base;
    plain.lambda = 0.5;
    plain.out = dir / "plain";
    run(plain);
    auto sweep_fits = slurp(dir / "single" / "point_000" / "fits.csv");
    auto plain_fits = slurp(dir / "plain" / "fits.csv");
    CHECK(sweep_fits == plain_fits);
}

TEST_CASE("solver and oracle dispatch smoke checks") {
    auto dir = temp_dir("smoke");

    RunConfig oracle;
    oracle.solver = "oracle-ising";
    oracle.n = 16;
    oracle.m = 3;
    oracle.g_explicit = AnisotropyVector{0, 0, 1};
    oracle.t_max = 0.8;
    oracle.n_points = 9;
    oracle.out = dir / "oracle";
    run(oracle);
    auto tr = read_trace_csv(oracle.out / "traces" / "XX.csv");
    CHECK(tr.value[0] == 1.0);

    RunConfig pair;
    pair.solver = "pair";
    pair.n_t = 2000;
    pair.lambda = 0.5;
    pair.t_max = 0.5;
    pair.n_points = 6;
    pair.out = dir / "pair";
    run(pair);
    CHECK(fs::exists(pair.out / "traces" / "ZZ.csv"));

    RunConfig proto;
    proto.solver = "do-protocol";
    proto.n = 4;
    proto.m = 1;
    proto.n_disorder = 50;
    proto.lambda = 0.3;
    proto.t_max = 0.5;
    proto.n_points = 6;
    proto.plane = "YZ";
    proto.out = dir / "do";
    run(proto);
    CHECK(fs::exists(proto.out / "traces" / "do_YZ.csv"));
}

TEST_CASE("sweep grid validation") {
    SweepSpec spec;
    spec.parameter = "theta";
    spec.values = {0.1, 0.3, 0.2};
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    spec.values = {};
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    spec.parameter = "g";
    spec.values = {0.1};
    CHECK_THROWS_AS(spec.validate(), ConfigError);
}

TEST_CASE("binary exit codes") {
    const char* bin = std::getenv("DXL_BIN");
    if (!bin) return;  // only meaningful under ctest, which sets DXL_BIN
    auto dir = temp_dir("exit");
    auto code = [&](const std::string& args) {
        std::string cmd = std::string(bin) + " " + args + " >/dev/null 2>&1";
        int st = std::system(cmd.c_str());
        return WEXITSTATUS(st);
    };
    CHECK(code("calibrate-kappa") == 0);
    // conflicting anisotropy specs
    CHECK(code("run --solver exact --n 4 --lambda 0.1 --theta 0.2 --out " +
               (dir / "a").string()) == 2);
    // over the spin cap
    CHECK(code("run --solver exact --n 25 --m 1 --lambda 0.1 --out " +
               (dir / "b").string()) == 4);
    // accuracy guard: dTWA norm drift on an unresolved strong pair
    CHECK(code("run --solver dtwa --n 8 --m 1 --n_t 8 --lambda -1 --t_max 2 "
               "--n_points 5 --seed 14 --dtwa_step 0.02 --out " +
               (dir / "c").string()) == 3);
}
