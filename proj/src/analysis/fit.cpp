#include "dxl/analysis/fit.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "dxl/core/errors.hpp"

namespace dxl {

namespace {

struct Window {
    std::vector<double> t, c, w;
    std::size_t trunc = 0;
};

Window fit_window(const CorrelatorTrace& tr, const FitOptions& opt, double a) {
    Window win;
    std::size_t trunc = tr.size();
    for (std::size_t k = 0; k < tr.size(); ++k) {
        if (tr.value[k] < opt.c_min || tr.value[k] <= 0.0) {
            trunc = k;
            break;
        }
    }
    win.trunc = trunc;
    for (std::size_t k = 1; k < trunc; ++k) {  // t = 0 carries no shape information
        win.t.push_back(tr.time[k]);
        win.c.push_back(tr.value[k]);
        double sigma = (opt.weighted && !tr.stderr_.empty() && tr.stderr_[k] > 0)
                           ? tr.stderr_[k]
                           : 1.0;
        win.w.push_back(1.0 / sigma);
    }
    (void)a;
    return win;
}

// Linear regression of ln(-ln(C/a)) on ln t for the starting point.
void initial_guess(const Window& win, double a, double& tau, double& nu) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < win.t.size(); ++k) {
        double r = win.c[k] / a;
        if (!(r > 0.0) || !(r < 1.0)) continue;
        double x = std::log(win.t[k]);
        double y = std::log(-std::log(r));
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++n;
    }
    if (n >= 2 && sxx * n - sx * sx > 0) {
        nu = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        double b = (sy - nu * sx) / n;
        if (nu > 0 && std::isfinite(b)) {
            tau = std::exp(-b / nu);
            if (std::isfinite(tau) && tau > 0) return;
        }
    }
    tau = win.t.empty() ? 1.0 : win.t.back();
    nu = 1.0;
}

} // namespace

StretchedExpFit fit_stretched_exponential(const CorrelatorTrace& trace, const FitOptions& opt) {
    trace.validate();
    StretchedExpFit fit;
    fit.c_min = opt.c_min;
    fit.amplitude = trace.value.front();
    const double a = fit.amplitude;
    if (!(a > 0)) throw InputError("fit: first trace value must be positive");

    Window win = fit_window(trace, opt, a);
    fit.truncation_index = win.trunc;
    fit.n_points = win.t.size();
    if (fit.n_points < 4)
        throw InputError("fit: fewer than 4 usable points above the threshold");

    double tau, nu;
    initial_guess(win, a, tau, nu);

    // Levenberg-Marquardt in (ln tau, ln nu); residuals r_k = w_k (model - C_k).
    double p0 = std::log(tau), p1 = std::log(std::max(nu, 1e-3));
    const std::size_t m = win.t.size();
    Eigen::VectorXd r(m);
    Eigen::MatrixXd jac(m, 2);
    auto eval = [&](double lp0, double lp1, Eigen::VectorXd& rr) {
        double tt = std::exp(lp0), vv = std::exp(lp1);
        double ss = 0;
        for (std::size_t k = 0; k < m; ++k) {
            double model = a * std::exp(-std::pow(win.t[k] / tt, vv));
            rr[k] = win.w[k] * (model - win.c[k]);
            ss += rr[k] * rr[k];
        }
        return ss;
    };
    double cost = eval(p0, p1, r);
    double lambda = 1e-3;
    for (int it = 0; it < 400; ++it) {
        double tt = std::exp(p0), vv = std::exp(p1);
        for (std::size_t k = 0; k < m; ++k) {
            double u = std::pow(win.t[k] / tt, vv);
            double model = a * std::exp(-u);
            // d model / d ln tau = a e^{-u} u nu ; d model / d ln nu = -a e^{-u} u ln(t/tau) nu
            jac(k, 0) = win.w[k] * model * u * vv;
            jac(k, 1) = win.w[k] * (-model * u * std::log(win.t[k] / tt) * vv);
        }
        Eigen::Matrix2d jtj = jac.transpose() * jac;
        Eigen::Vector2d jtr = jac.transpose() * r;
        Eigen::Matrix2d damped = jtj;
        damped(0, 0) += lambda * jtj(0, 0);
        damped(1, 1) += lambda * jtj(1, 1);
        Eigen::Vector2d step = damped.ldlt().solve(-jtr);
        double n0 = p0 + step[0], n1 = p1 + step[1];
        Eigen::VectorXd r2(m);
        double cost2 = eval(n0, n1, r2);
        if (cost2 < cost) {
            p0 = n0; p1 = n1; r = r2;
            double rel = cost - cost2;
            cost = cost2;
            lambda = std::max(lambda * 0.33, 1e-14);
            if (rel < 1e-16 * (1.0 + cost) && step.norm() < 1e-13) break;
        } else {
            lambda *= 3.0;
            if (lambda > 1e12) break;
        }
    }

    fit.tau = std::exp(p0);
    fit.nu = std::exp(p1);
    fit.residual_norm = std::sqrt(cost);

    // parameter errors from the Jacobian at the solution
    {
        double tt = fit.tau, vv = fit.nu;
        for (std::size_t k = 0; k < m; ++k) {
            double u = std::pow(win.t[k] / tt, vv);
            double model = a * std::exp(-u);
            jac(k, 0) = win.w[k] * model * u * vv;
            jac(k, 1) = win.w[k] * (-model * u * std::log(win.t[k] / tt) * vv);
        }
        Eigen::Matrix2d jtj = jac.transpose() * jac;
        double dof = m > 2 ? static_cast<double>(m - 2) : 1.0;
        double s2 = cost / dof;
        Eigen::Matrix2d cov = jtj.inverse() * s2;
        fit.tau_err = fit.tau * std::sqrt(std::max(0.0, cov(0, 0)));
        fit.nu_err = fit.nu * std::sqrt(std::max(0.0, cov(1, 1)));
    }
    return fit;
}

TripleLogResult triple_log_coordinates(const CorrelatorTrace& trace) {
    TripleLogResult res;
    for (std::size_t k = 0; k < trace.size(); ++k) {
        double c = trace.value[k], t = trace.time[k];
        if (!(t > 0.0) || !(c > 0.0) || !(c < 1.0)) {
            ++res.skipped;
            continue;
        }
        res.points.push_back({std::log(t), std::log(-std::log(c))});
    }
    return res;
}

std::string fit_record(const StretchedExpFit& fit, const std::string& axis,
                       const std::string& g) {
    std::ostringstream os;
    os << "axis = " << axis << "\n"
       << "g = " << g << "\n"
       << "tau_inv_J = " << fit.tau << "\n"
       << "nu = " << fit.nu << "\n"
       << "tau_err = " << fit.tau_err << "\n"
       << "nu_err = " << fit.nu_err << "\n"
       << "c_min = " << fit.c_min << "\n"
       << "n_points = " << fit.n_points << "\n"
       << "residual = " << fit.residual_norm << "\n"
       << "window_sensitive = " << (fit.window_sensitive ? "true" : "false") << "\n";
    return os.str();
}

} // namespace dxl
