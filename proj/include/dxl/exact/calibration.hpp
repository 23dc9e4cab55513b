#pragma once

namespace dxl {

// Global convention factor relating correlator arguments g_nu J t to the
// S = sigma/2 operator convention. Determined once per process by comparing
// dense two-spin evolution against the closed-form product of cosines
// (expected value 1/2); all convention-sensitive formulas read it from here.
struct Conventions {
    double kappa;
};

const Conventions& conventions();

// Runs the dense-oracle comparison from scratch and returns kappa together
// with the worst deviation |pair_exact - dense| over a randomized check set.
struct CalibrationReport {
    double kappa;
    double max_deviation;
    int n_checks;
};
CalibrationReport calibrate_kappa(int n_checks = 20, unsigned long long seed = 20240901ull);

} // namespace dxl
