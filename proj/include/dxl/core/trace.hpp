#pragma once
#include <map>
#include <string>
#include <vector>

#include "dxl/core/errors.hpp"

namespace dxl {

// A disorder/trajectory-averaged time series C(t) with per-point standard
// errors. Times are in units of 1/J; C(0) = 1 up to solver tolerance.
struct CorrelatorTrace {
    std::string axis;                      // "XX", "YY", "ZZ", "ramsey", ...
    std::vector<double> time;              // strictly increasing from 0
    std::vector<double> value;
    std::vector<double> stderr_;           // empty or same length as value
    std::map<std::string, std::string> meta;  // solver, N, M, seed, kappa, g, ...

    std::size_t size() const { return time.size(); }

    void validate() const {
        if (time.empty() || time.front() != 0.0)
            throw InputError("trace time grid must start at 0");
        for (std::size_t k = 1; k < time.size(); ++k)
            if (!(time[k] > time[k - 1]))
                throw InputError("trace time grid must be strictly increasing");
        if (value.size() != time.size())
            throw InputError("trace value/time length mismatch");
        if (!stderr_.empty() && stderr_.size() != time.size())
            throw InputError("trace stderr/time length mismatch");
    }
};

// Uniform grid 0..t_max with n points (n >= 2).
inline std::vector<double> time_grid(double t_max, std::size_t n) {
    if (n < 2 || !(t_max > 0))
        throw InputError("time grid needs n >= 2 points and t_max > 0");
    std::vector<double> t(n);
    for (std::size_t k = 0; k < n; ++k)
        t[k] = t_max * static_cast<double>(k) / static_cast<double>(n - 1);
    return t;
}

} // namespace dxl
