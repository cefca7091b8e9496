#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "frontlab/defects.hpp"
#include "frontlab/errors.hpp"
#include "frontlab/ode.hpp"

namespace frontlab {

/// Bistable threshold of R(u) = u(1-u)(u-a).
struct ReactionParams {
    double a = 0.3;

    void validate() const {
        if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("require 0 < a < 1");
    }
};

/// Uniform cell-centered grid on [x_min, x_max] with n cells.
struct Grid {
    double x_min;
    double x_max;
    int n;

    double h() const { return (x_max - x_min) / n; }
    double center(int k) const { return x_min + (k + 0.5) * h(); }

    std::vector<double> centers() const {
        std::vector<double> x(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) x[static_cast<std::size_t>(k)] = center(k);
        return x;
    }

    void validate() const {
        if (n < 3) throw std::invalid_argument("grid too small (n >= 3 required)");
        if (!(x_max > x_min)) throw std::invalid_argument("require x_max > x_min");
    }
};

/// Concentration samples on a grid at one time.
struct FieldState {
    Grid grid;
    double t = 0.0;
    std::vector<double> u;
};

inline double reaction(double u, double a) { return u * (1.0 - u) * (u - a); }

/// Decreasing kink profile: 1 at -inf, 0 at +inf, 1/2 at x0.
inline double exact_kink(double x, double x0, double w) {
    double z = (x - x0) / w;
    if (z > 700.0) z = 700.0;
    if (z < -700.0) z = -700.0;
    return 1.0 / (1.0 + std::exp(z));
}

/// Front speed in a homogeneous medium, c = sqrt(s/2)(1-2a).
inline double homogeneous_speed(double s, double a) {
    if (!(s > 0.0)) throw std::domain_error("homogeneous speed requires s > 0");
    return std::sqrt(0.5 * s) * (1.0 - 2.0 * a);
}

/// Equilibrium front width, w = sqrt(2/s).
inline double homogeneous_width(double s) {
    if (!(s > 0.0)) throw std::domain_error("homogeneous width requires s > 0");
    return std::sqrt(2.0 / s);
}

/// Kink sampled at the cell centers.
inline FieldState kink_field(const Grid& grid, double x0, double w, double t = 0.0) {
    grid.validate();
    FieldState state{grid, t, {}};
    state.u.resize(static_cast<std::size_t>(grid.n));
    for (int k = 0; k < grid.n; ++k)
        state.u[static_cast<std::size_t>(k)] = exact_kink(grid.center(k), x0, w);
    return state;
}

/// Method-of-lines right-hand side: 3-point Laplacian with homogeneous
/// Neumann ends plus s_k R(u_k), with s_k the cell average of the defect
/// (exact per-cell mass; midpoint sampling loses the pinning position of
/// narrow defects on coarse grids).
class MolRhs {
public:
    MolRhs(const Grid& grid, const DefectSpec& defect, ReactionParams params)
        : a_(params.a), inv_h2_(1.0 / (grid.h() * grid.h())) {
        grid.validate();
        params.validate();
        if (!pointwise_evaluable(defect))
            throw std::invalid_argument("pde solver rejects dirac defects");
        s_.resize(static_cast<std::size_t>(grid.n));
        const double h = grid.h();
        for (int k = 0; k < grid.n; ++k) {
            const double left = grid.x_min + k * h;
            s_[static_cast<std::size_t>(k)] = cell_average(defect, left, left + h);
        }
    }

    void operator()(double /*t*/, const std::vector<double>& u, std::vector<double>& dudt) const {
        const std::size_t n = u.size();
        const double* __restrict pu = u.data();
        const double* __restrict ps = s_.data();
        double* __restrict pd = dudt.data();
        const double a = a_;
        const double ih2 = inv_h2_;
        pd[0] = (pu[1] - pu[0]) * ih2 + ps[0] * reaction(pu[0], a);
        for (std::size_t k = 1; k + 1 < n; ++k)
            pd[k] = (pu[k + 1] + pu[k - 1] - 2.0 * pu[k]) * ih2 + ps[k] * reaction(pu[k], a);
        pd[n - 1] = (pu[n - 2] - pu[n - 1]) * ih2 + ps[n - 1] * reaction(pu[n - 1], a);
    }

    const std::vector<double>& sampled_defect() const { return s_; }

private:
    double a_;
    double inv_h2_;
    std::vector<double> s_;
};

/// Per-cell time derivatives of one field state.
inline std::vector<double> rhs(const FieldState& state, const DefectSpec& defect,
                               ReactionParams params) {
    MolRhs f(state.grid, defect, params);
    std::vector<double> dudt(state.u.size());
    f(state.t, state.u, dudt);
    return dudt;
}

/// Integrate the semi-discrete equation, sampling at t = 0, dt_out, 2 dt_out, ...
inline std::vector<FieldState> integrate(const FieldState& u0, const DefectSpec& defect,
                                         ReactionParams params, const SolverConfig& cfg) {
    MolRhs f(u0.grid, defect, params);
    std::vector<FieldState> out;
    out.reserve(static_cast<std::size_t>(cfg.t_max / cfg.dt_out) + 2);
    integrate_dopri5(f, u0.u, u0.t, cfg, [&](double t, const std::vector<double>& u) {
        out.push_back(FieldState{u0.grid, t, u});
    });
    return out;
}

/// Conservation-law speed estimate: trapezoidal quadrature of s(x) R(u)
/// over the grid. Requires the front to be contained (u near 1 on the
/// left edge, near 0 on the right) unless check_orientation is false.
inline double speed_functional(const FieldState& state, const DefectSpec& defect,
                               ReactionParams params, bool check_orientation = true) {
    params.validate();
    if (!pointwise_evaluable(defect))
        throw std::invalid_argument("speed functional requires an evaluable defect");
    const std::size_t n = state.u.size();
    if (n < 3) throw std::invalid_argument("grid too small");
    if (check_orientation) {
        if (std::abs(state.u.front() - 1.0) > 0.1 || std::abs(state.u.back()) > 0.1)
            throw FrontNotVisible("front not contained in the domain");
    }
    const double h = state.grid.h();
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double f =
            eval_defect(defect, state.grid.center(static_cast<int>(k))) * reaction(state.u[k], params.a);
        sum += (k == 0 || k + 1 == n) ? 0.5 * f : f;
    }
    return sum * h;
}

}  // namespace frontlab
