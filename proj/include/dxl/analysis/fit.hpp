#pragma once
#include <optional>
#include <string>
#include <vector>

#include "dxl/core/trace.hpp"

namespace dxl {

// Stretched-exponential fit a exp(-(t/tau)^nu) with the amplitude fixed to
// the first trace value and the window truncated at the first point below
// c_min (that point excluded).
struct StretchedExpFit {
    double amplitude = 1.0;
    double tau = 0.0;
    double nu = 0.0;
    double tau_err = 0.0;   // covariance-based, from the LM Jacobian
    double nu_err = 0.0;
    double c_min = 0.2;
    std::size_t truncation_index = 0;  // first index past the fit window
    std::size_t n_points = 0;
    double residual_norm = 0.0;
    bool window_sensitive = false;     // set for Z-axis fits by callers
};

struct FitOptions {
    double c_min = 0.2;
    bool weighted = false;  // weight residuals by 1/stderr when available
};

StretchedExpFit fit_stretched_exponential(const CorrelatorTrace& trace, const FitOptions& opt = {});

// ln(-ln C) against ln t; points with C <= 0, C >= 1 or t <= 0 are skipped.
struct TripleLogPoint {
    double ln_t;
    double ln_neg_ln_c;
};
struct TripleLogResult {
    std::vector<TripleLogPoint> points;
    std::size_t skipped = 0;
};
TripleLogResult triple_log_coordinates(const CorrelatorTrace& trace);

// Structured text record for one fit.
std::string fit_record(const StretchedExpFit& fit, const std::string& axis, const std::string& g);

} // namespace dxl
