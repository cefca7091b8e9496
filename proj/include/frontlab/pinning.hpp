#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "frontlab/errors.hpp"
#include "frontlab/kinkfit.hpp"

namespace frontlab {

/// Closed-form pinning threshold and stall state for the point-defect
/// reduction at baseline alpha.
struct PinningAnalysis {
    double r;       // sqrt(1 - a + a^2)
    double z_min;   // argmin of R(U(z))
    double min_R;   // minimum of R(U(z)), negative
    double beta_c;  // critical point-defect strength
    double x0_pin;  // predicted stopping position
    double w_pin;   // predicted width at pinning
};

/// Evaluate the pinning criterion. Requires 0 < a < 1/2 (rightward front)
/// and alpha > 0.
inline PinningAnalysis analyze(double a, double alpha) {
    if (!(a > 0.0 && a < 0.5)) throw std::domain_error("front not rightward: require 0 < a < 1/2");
    if (!(alpha > 0.0)) throw std::domain_error("require alpha > 0");
    PinningAnalysis out{};
    out.r = std::sqrt(1.0 - a + a * a);
    out.z_min = std::log((1.0 + out.r) / a);
    const double opar = 1.0 + a + out.r;  // 1 + a + r
    out.min_R = -a * a * (1.0 + out.r) * (a + out.r) / (opar * opar * opar);
    const double shape = std::sqrt(1.0 + 3.0 * (1.0 - 2.0 * a) * (1.0 - a + out.r) / opar);
    out.w_pin = std::sqrt(2.0 / alpha) / shape;
    out.x0_pin = -out.w_pin * out.z_min;
    out.beta_c = std::sqrt(0.5 * alpha) * (1.0 - 2.0 * a) * opar * opar * opar /
                 (a * a * (1.0 + out.r) * (a + out.r) * shape);
    return out;
}

/// Outcome of the numerical pinning decision rule.
struct PinningVerdict {
    bool pinned = false;
    double x0_final = 0.0;
    double w_final = 0.0;
    double t_decided = 0.0;
};

/// Decide whether a trajectory pinned on the defect.
///
/// Pinned: |x0'| stays below 1e-4 * free_speed over the trailing 50 time
/// units and the front sits within 10 widths of the defect. Not pinned:
/// x0 passes the defect center by 10 * max(w, defect_extent). Anything
/// else throws PinningUndecided.
inline PinningVerdict detect_pinning(const FrontTrajectory& traj, double free_speed,
                                     double defect_extent, double center = 0.0) {
    if (!(free_speed > 0.0)) throw std::invalid_argument("free_speed must be positive");
    const std::vector<double> v = traj.speed();
    if (v.empty()) throw PinningUndecided();

    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::size_t j = i + 1;  // trajectory index of this speed sample
        if (traj.x0[j] > center + 10.0 * std::max(traj.w[j], defect_extent))
            return {false, traj.x0[j], traj.w[j], traj.t[j]};
    }

    const std::size_t last = traj.size() - 2;
    const double t_last = traj.t[last];
    const double window_start = t_last - 50.0;
    if (traj.t[1] > window_start + 1e-9) throw PinningUndecided();  // too short to cover 50 units

    bool stalled = true;
    const double stall = 1e-4 * free_speed;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::size_t j = i + 1;
        if (traj.t[j] < window_start) continue;
        const bool near =
            std::abs(traj.x0[j] - center) <= 10.0 * std::max(traj.w[j], defect_extent);
        if (std::abs(v[i]) >= stall || !near) {
            stalled = false;
            break;
        }
    }
    if (stalled) return {true, traj.x0[last], traj.w[last], t_last};
    throw PinningUndecided();
}

/// One bisection probe.
struct ThresholdProbe {
    double amplitude;
    PinningVerdict verdict;
};

/// Bisection output: the final bracket and every probe run on the way.
struct ThresholdResult {
    double critical;
    double bracket_lo;
    double bracket_hi;
    std::vector<ThresholdProbe> probes;
};

/// Bisect a pinning threshold over an amplitude. `run` maps an amplitude
/// to a pinning verdict; run(lo) must not pin and run(hi) must pin.
/// Stops when the bracket shrinks below rel_tol relative to its midpoint
/// and returns the midpoint of the final bracket.
inline ThresholdResult find_threshold(const std::function<PinningVerdict(double)>& run, double lo,
                                      double hi, double rel_tol = 1e-2) {
    if (!(lo < hi)) throw std::invalid_argument("require lo < hi");
    ThresholdResult out{};
    const PinningVerdict v_lo = run(lo);
    out.probes.push_back({lo, v_lo});
    const PinningVerdict v_hi = run(hi);
    out.probes.push_back({hi, v_hi});
    if (v_lo.pinned || !v_hi.pinned)
        throw std::invalid_argument("no sign change: bracket ends give the same pinning verdict");

    while (hi - lo > rel_tol * 0.5 * (hi + lo)) {
        const double mid = 0.5 * (lo + hi);
        const PinningVerdict v = run(mid);
        out.probes.push_back({mid, v});
        if (v.pinned)
            hi = mid;
        else
            lo = mid;
    }
    out.bracket_lo = lo;
    out.bracket_hi = hi;
    out.critical = 0.5 * (lo + hi);
    return out;
}

}  // namespace frontlab
