#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "frontlab/defects.hpp"
#include "frontlab/kinkfit.hpp"

namespace frontlab {

/// Defect profile recovered from a front trajectory via the adiabatic
/// relation s(x0) = (2/(1-2a)) x0'/w, sorted by position.
struct TopographyEstimate {
    std::vector<double> x0;
    std::vector<double> s_est;
    double a = 0.0;
    std::string scheme = "centered";  // time-differentiation scheme
    int smooth_window = 0;   // 0 = no smoothing applied
    bool monotone = true;    // false: x0 was not strictly monotone (adiabatic assumption violated)
    std::string source;      // trajectory id, set by the caller
};

/// Relative errors of an estimate against a known defect.
struct TopographyResiduals {
    double sup_norm_rel;
    double l2_rel;
};

/// Reconstruct s along the traversed region. The time derivative is the
/// trajectory's centered difference, so both endpoint samples are dropped.
/// An odd smooth_window > 1 applies a centered moving average to s_est.
inline TopographyEstimate reconstruct(const FrontTrajectory& traj, double a,
                                      int smooth_window = 0) {
    if (std::abs(1.0 - 2.0 * a) < 1e-12)
        throw std::invalid_argument("a = 1/2 is degenerate: zero free speed");
    if (traj.size() < 3) throw std::invalid_argument("trajectory needs at least 3 samples");
    if (smooth_window != 0 && (smooth_window < 3 || smooth_window % 2 == 0))
        throw std::invalid_argument("smooth window must be odd and >= 3");

    const std::vector<double> v = traj.speed();
    TopographyEstimate est;
    est.a = a;
    est.smooth_window = smooth_window;
    est.x0.resize(v.size());
    est.s_est.resize(v.size());
    const double factor = 2.0 / (1.0 - 2.0 * a);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::size_t j = i + 1;
        if (!(traj.w[j] > 0.0)) throw std::invalid_argument("trajectory width must be positive");
        est.x0[i] = traj.x0[j];
        est.s_est[i] = factor * v[i] / traj.w[j];
    }

    bool increasing = true, decreasing = true;
    for (std::size_t i = 0; i + 1 < est.x0.size(); ++i) {
        if (!(est.x0[i + 1] > est.x0[i])) increasing = false;
        if (!(est.x0[i + 1] < est.x0[i])) decreasing = false;
    }
    est.monotone = increasing || decreasing;

    if (smooth_window > 1) {
        const int half = smooth_window / 2;
        std::vector<double> smoothed(est.s_est.size());
        for (std::size_t i = 0; i < est.s_est.size(); ++i) {
            const std::size_t lo = i >= static_cast<std::size_t>(half) ? i - half : 0;
            const std::size_t hi = std::min(est.s_est.size(), i + half + 1);
            smoothed[i] = std::accumulate(est.s_est.begin() + lo, est.s_est.begin() + hi, 0.0) /
                          static_cast<double>(hi - lo);
        }
        est.s_est = std::move(smoothed);
    }

    if (decreasing) {
        std::reverse(est.x0.begin(), est.x0.end());
        std::reverse(est.s_est.begin(), est.s_est.end());
    } else if (!increasing) {
        std::vector<std::size_t> order(est.x0.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t l, std::size_t r) { return est.x0[l] < est.x0[r]; });
        TopographyEstimate sorted = est;
        for (std::size_t i = 0; i < order.size(); ++i) {
            sorted.x0[i] = est.x0[order[i]];
            sorted.s_est[i] = est.s_est[order[i]];
        }
        est = std::move(sorted);
    }
    return est;
}

/// Compare an estimate to the true defect over the traversed region.
inline TopographyResiduals residual(const TopographyEstimate& est, const DefectSpec& truth) {
    if (!pointwise_evaluable(truth))
        throw std::invalid_argument("residual requires an evaluable truth defect");
    if (est.x0.empty()) throw std::invalid_argument("empty topography estimate");
    double max_diff = 0.0, max_true = 0.0, sum_diff2 = 0.0, sum_true2 = 0.0;
    for (std::size_t i = 0; i < est.x0.size(); ++i) {
        const double s_true = eval_defect(truth, est.x0[i]);
        const double diff = est.s_est[i] - s_true;
        max_diff = std::max(max_diff, std::abs(diff));
        max_true = std::max(max_true, std::abs(s_true));
        sum_diff2 += diff * diff;
        sum_true2 += s_true * s_true;
    }
    return {max_diff / max_true, std::sqrt(sum_diff2 / sum_true2)};
}

}  // namespace frontlab
