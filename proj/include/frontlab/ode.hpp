#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "frontlab/errors.hpp"

namespace frontlab {

/// Tolerances and sampling for adaptive time integration.
struct SolverConfig {
    double rtol = 1e-8;
    double atol = 1e-8;
    double t_max = 100.0;
    double dt_out = 1.0;
    double dt_init = 0.0;  // <= 0: pick automatically

    void validate() const {
        if (!(rtol > 0.0) || !(atol > 0.0)) throw std::invalid_argument("tolerances must be positive");
        if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be positive");
        if (!(dt_out > 0.0)) throw std::invalid_argument("dt_out must be positive");
        if (dt_out > t_max) throw std::invalid_argument("dt_out must not exceed t_max");
    }
};

namespace detail {

// Dormand-Prince 5(4) tableau.
inline constexpr double dp_c2 = 1.0 / 5.0, dp_c3 = 3.0 / 10.0, dp_c4 = 4.0 / 5.0,
                        dp_c5 = 8.0 / 9.0;
inline constexpr double dp_a21 = 1.0 / 5.0;
inline constexpr double dp_a31 = 3.0 / 40.0, dp_a32 = 9.0 / 40.0;
inline constexpr double dp_a41 = 44.0 / 45.0, dp_a42 = -56.0 / 15.0, dp_a43 = 32.0 / 9.0;
inline constexpr double dp_a51 = 19372.0 / 6561.0, dp_a52 = -25360.0 / 2187.0,
                        dp_a53 = 64448.0 / 6561.0, dp_a54 = -212.0 / 729.0;
inline constexpr double dp_a61 = 9017.0 / 3168.0, dp_a62 = -355.0 / 33.0,
                        dp_a63 = 46732.0 / 5247.0, dp_a64 = 49.0 / 176.0,
                        dp_a65 = -5103.0 / 18656.0;
inline constexpr double dp_a71 = 35.0 / 384.0, dp_a73 = 500.0 / 1113.0, dp_a74 = 125.0 / 192.0,
                        dp_a75 = -2187.0 / 6784.0, dp_a76 = 11.0 / 84.0;
// y1 - yhat1, difference between the 5th and 4th order results.
inline constexpr double dp_e1 = 71.0 / 57600.0, dp_e3 = -71.0 / 16695.0, dp_e4 = 71.0 / 1920.0,
                        dp_e5 = -17253.0 / 339200.0, dp_e6 = 22.0 / 525.0, dp_e7 = -1.0 / 40.0;

inline bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace detail

/// Adaptive Dormand-Prince 4(5) integration of y' = rhs(t, y).
///
/// rhs(t, y, dydt) fills dydt; observer(t, y) is called at t0 and then at
/// every multiple of cfg.dt_out up to cfg.t_max (steps are clipped to land
/// exactly on sampling times). Error control uses the mixed norm
/// sqrt(mean((e_i / (atol + rtol*max(|yـi|,|y1_i|)))^2)) with Hairer's
/// stabilized step-size controller; a step is accepted only when the
/// estimate is within tolerance.
///
/// Throws StiffFailure when the step underflows below 1e-14 * t_max and
/// Divergence when the state stops being finite.
template <class RHS, class Observer>
inline void integrate_dopri5(RHS&& rhs, std::vector<double> y, double t0, const SolverConfig& cfg,
                             Observer&& observer) {
    using namespace detail;
    cfg.validate();
    const std::size_t n = y.size();
    const double t_end = t0 + cfg.t_max;
    const double dt_min = 1e-14 * cfg.t_max;

    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), y1(n);

    if (!all_finite(y)) throw Divergence(t0);
    observer(t0, y);
    double next_out = t0 + cfg.dt_out;
    long out_index = 1;

    double t = t0;
    double dt = cfg.dt_init > 0.0 ? cfg.dt_init
                                  : std::min(cfg.dt_out, std::max(1e-12, 1e-6 * cfg.t_max));

    rhs(t, y, k1);  // FSAL: k1 always holds the derivative at (t, y)

    // Hairer DOPRI5 controller constants.
    const double safe = 0.9, fac1 = 0.2, fac2 = 10.0, beta = 0.04;
    const double expo1 = 0.2 - beta * 0.75;
    double err_old = 1e-4;
    bool rejected = false;

    while (t < t_end - 1e-14 * cfg.t_max) {
        const bool hit_output = t + dt >= next_out - 1e-14 * cfg.t_max;
        const double h = hit_output ? next_out - t : dt;

        const double* __restrict py = y.data();
        const double* __restrict pk1 = k1.data();
        const double* __restrict pk2 = k2.data();
        const double* __restrict pk3 = k3.data();
        const double* __restrict pk4 = k4.data();
        const double* __restrict pk5 = k5.data();
        const double* __restrict pk6 = k6.data();
        double* __restrict pt = ytmp.data();

        for (std::size_t i = 0; i < n; ++i) pt[i] = py[i] + h * dp_a21 * pk1[i];
        rhs(t + dp_c2 * h, ytmp, k2);
        for (std::size_t i = 0; i < n; ++i)
            pt[i] = py[i] + h * (dp_a31 * pk1[i] + dp_a32 * pk2[i]);
        rhs(t + dp_c3 * h, ytmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            pt[i] = py[i] + h * (dp_a41 * pk1[i] + dp_a42 * pk2[i] + dp_a43 * pk3[i]);
        rhs(t + dp_c4 * h, ytmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            pt[i] = py[i] +
                    h * (dp_a51 * pk1[i] + dp_a52 * pk2[i] + dp_a53 * pk3[i] + dp_a54 * pk4[i]);
        rhs(t + dp_c5 * h, ytmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            pt[i] = py[i] + h * (dp_a61 * pk1[i] + dp_a62 * pk2[i] + dp_a63 * pk3[i] +
                                 dp_a64 * pk4[i] + dp_a65 * pk5[i]);
        rhs(t + h, ytmp, k6);
        double* __restrict p1 = y1.data();
        for (std::size_t i = 0; i < n; ++i)
            p1[i] = py[i] + h * (dp_a71 * pk1[i] + dp_a73 * pk3[i] + dp_a74 * pk4[i] +
                                 dp_a75 * pk5[i] + dp_a76 * pk6[i]);
        rhs(t + h, y1, k7);
        const double* __restrict pk7 = k7.data();

        double err_sq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = h * (dp_e1 * pk1[i] + dp_e3 * pk3[i] + dp_e4 * pk4[i] +
                                  dp_e5 * pk5[i] + dp_e6 * pk6[i] + dp_e7 * pk7[i]);
            const double sc = cfg.atol + cfg.rtol * std::max(std::abs(py[i]), std::abs(p1[i]));
            const double q = e / sc;
            err_sq += q * q;
        }
        double err = std::sqrt(err_sq / static_cast<double>(n));

        if (!std::isfinite(err)) {
            if (!all_finite(y)) throw Divergence(t);
            // trial state blew up; retry with a much smaller step
            dt = 0.1 * h;
            if (dt < dt_min) throw StiffFailure(t);
            rejected = true;
            continue;
        }

        if (err <= 1.0) {
            t += h;
            y.swap(y1);
            k1.swap(k7);

            const double fac11 = std::pow(err, expo1);
            double fac = fac11 / std::pow(err_old, beta);
            fac = std::max(1.0 / fac2, std::min(1.0 / fac1, fac / safe));
            double dt_new = h / fac;
            if (rejected) dt_new = std::min(dt_new, h);  // no growth right after a rejection
            rejected = false;
            err_old = std::max(err, 1e-4);
            if (!hit_output || h >= dt) dt = dt_new;

            if (hit_output) {
                if (!all_finite(y)) throw Divergence(t);
                observer(next_out, y);
                ++out_index;
                next_out = t0 + static_cast<double>(out_index) * cfg.dt_out;
                if (next_out > t_end + 1e-14 * cfg.t_max) break;
            }
        } else {
            const double fac11 = std::pow(err, expo1);
            dt = h / std::min(1.0 / fac1, fac11 / safe);
            rejected = true;
            if (dt < dt_min) throw StiffFailure(t);
        }
    }
}

}  // namespace frontlab
