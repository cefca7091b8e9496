#pragma once

#include <stdexcept>
#include <string>

namespace frontlab {

/// Time integration gave up: step size underflowed below 1e-14 * t_max.
struct StiffFailure : std::runtime_error {
    double t;
    explicit StiffFailure(double time)
        : std::runtime_error("stiff failure: step size underflow at t = " + std::to_string(time)),
          t(time) {}
};

/// State picked up NaN/Inf during integration.
struct Divergence : std::runtime_error {
    double t;
    explicit Divergence(double time)
        : std::runtime_error("divergence: non-finite state at t = " + std::to_string(time)),
          t(time) {}
};

/// Front profile cannot be located in the field (no quantile crossing,
/// or the fit window contains no cells).
struct FrontNotVisible : std::runtime_error {
    explicit FrontNotVisible(const std::string& what) : std::runtime_error(what) {}
};

/// Pinning decision rule did not fire within the trajectory.
struct PinningUndecided : std::runtime_error {
    PinningUndecided() : std::runtime_error("pinning undecided - increase t_max") {}
};

}  // namespace frontlab
