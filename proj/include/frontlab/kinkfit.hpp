#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "frontlab/errors.hpp"
#include "frontlab/pde.hpp"

namespace frontlab {

/// Collective coordinates of the front.
struct KinkState {
    double x0 = 0.0;
    double w = 1.0;
};

/// Fitted (t, x0, w, fit_error) series; speed is derived by centered
/// differences with both endpoints dropped.
struct FrontTrajectory {
    std::vector<double> t;
    std::vector<double> x0;
    std::vector<double> w;
    std::vector<double> fit_error;

    std::size_t size() const { return t.size(); }

    /// x0'(t_i) for interior samples, length size()-2.
    std::vector<double> speed() const {
        std::vector<double> v;
        if (t.size() < 3) return v;
        v.resize(t.size() - 2);
        for (std::size_t i = 1; i + 1 < t.size(); ++i)
            v[i - 1] = (x0[i + 1] - x0[i - 1]) / (t[i + 1] - t[i - 1]);
        return v;
    }
};

/// Least-squares fit gave up before reaching the convergence criteria.
struct FitNotConverged : std::runtime_error {
    KinkState best;
    double error;
    FitNotConverged(const std::string& what, KinkState b, double e)
        : std::runtime_error(what), best(b), error(e) {}
};

namespace detail {

inline constexpr double kWindowHalfWidthZ = 4.59511985013459;  // ln 99
inline constexpr double kTwoLnThree = 2.19722457733622;        // 2 ln 3

// Cell index range [lo, hi) where 0.01 < model kink < 0.99.
inline std::pair<int, int> fit_window(const Grid& grid, const KinkState& k) {
    const double h = grid.h();
    const double half = k.w * kWindowHalfWidthZ;
    int lo = static_cast<int>(std::floor((k.x0 - half - grid.x_min) / h - 0.5)) + 1;
    int hi = static_cast<int>(std::ceil((k.x0 + half - grid.x_min) / h - 0.5));
    lo = std::max(lo, 0);
    hi = std::min(hi, grid.n);
    return {lo, hi};
}

}  // namespace detail

/// Normalized squared residual between the field and the model kink:
/// E = (1/n) sum of r_i^2 with the sum restricted to cells where
/// 0.01 < u_model < 0.99 and n the total cell count. Throws
/// FrontNotVisible when the window has no cells.
inline double fit_error(const FieldState& state, const KinkState& k) {
    if (!(k.w > 0.0)) throw std::invalid_argument("kink width must be positive");
    const auto [lo, hi] = detail::fit_window(state.grid, k);
    if (lo >= hi) throw FrontNotVisible("front not visible: fit window is empty");
    double sum = 0.0;
    for (int i = lo; i < hi; ++i) {
        const double r =
            state.u[static_cast<std::size_t>(i)] - exact_kink(state.grid.center(i), k.x0, k.w);
        sum += r * r;
    }
    return sum / static_cast<double>(state.grid.n);
}

/// Quantile-based starting point: x0 from the midpoint of the u=0.75 and
/// u=0.25 crossings, w from their separation (= 2 w ln 3 for the kink).
inline KinkState initial_guess(const FieldState& state) {
    const std::size_t n = state.u.size();
    auto crossing = [&](double level) -> double {
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (state.u[i] >= level && state.u[i + 1] < level) {
                const double x_i = state.grid.center(static_cast<int>(i));
                const double frac = (state.u[i] - level) / (state.u[i] - state.u[i + 1]);
                return x_i + frac * state.grid.h();
            }
        }
        throw FrontNotVisible("front not visible: no crossing of u = " + std::to_string(level));
    };
    const double x75 = crossing(0.75);
    const double x25 = crossing(0.25);
    if (x25 <= x75)
        throw FrontNotVisible("front not visible: quantile crossings out of order");
    return KinkState{0.5 * (x75 + x25), (x25 - x75) / detail::kTwoLnThree};
}

namespace detail {

// Internal optimization objective: the window-mean squared residual with
// the window anchored once per outer iteration (the mask is recomputed
// per iteration, not per evaluation). A window that follows the model at
// every evaluation turns the landscape into a staircase of wells spaced
// by the cell size, which wedges line searches and makes the minimizer
// depend on the approach path; anchoring keeps every line search smooth
// and the converged (state, window) pair self-consistent.
struct FitObjective {
    const FieldState& state;
    int lo = 0, hi = 0;
    double inv_m = 0.0;

    FitObjective(const FieldState& s, const KinkState& guess) : state(s) { anchor(guess); }

    void anchor(const KinkState& k) {
        const auto [l, h] = fit_window(state.grid, k);
        lo = l;
        hi = h;
        inv_m = lo < hi ? 1.0 / static_cast<double>(hi - lo) : 0.0;
    }

    bool empty() const { return lo >= hi; }

    double operator()(const KinkState& k) const {
        if (k.w < 1e-6) return 1e30 * (1.0 + (1e-6 - k.w));  // keep widths positive
        double sum = 0.0;
        for (int i = lo; i < hi; ++i) {
            const double r =
                state.u[static_cast<std::size_t>(i)] - exact_kink(state.grid.center(i), k.x0, k.w);
            sum += r * r;
        }
        return sum * inv_m;
    }

    // Closed-form partials of the logistic model over the anchored window.
    void gradient(const KinkState& k, double& dx0, double& dw) const {
        dx0 = 0.0;
        dw = 0.0;
        if (empty() || k.w < 1e-6) return;
        for (int i = lo; i < hi; ++i) {
            const double x = state.grid.center(i);
            const double z = (x - k.x0) / k.w;
            const double m = exact_kink(x, k.x0, k.w);
            const double r = state.u[static_cast<std::size_t>(i)] - m;
            const double mm = m * (1.0 - m);
            dx0 += r * mm;
            dw += r * mm * z;
        }
        const double scale = -2.0 * inv_m / k.w;
        dx0 *= scale;
        dw *= scale;
    }
};

// Brent line minimization on [ax, cx] with bx inside (NR-style).
template <class F1D>
inline double brent_min(F1D&& f, double ax, double bx, double cx, double tol, double& fmin) {
    constexpr int kMaxIter = 100;
    constexpr double kGolden = 0.3819660112501051;
    double a = std::min(ax, cx), b = std::max(ax, cx);
    double x = bx, wp = bx, v = bx;
    double fx = f(x), fw = fx, fv = fx;
    double d = 0.0, e = 0.0;
    for (int iter = 0; iter < kMaxIter; ++iter) {
        const double xm = 0.5 * (a + b);
        const double tol1 = tol * std::abs(x) + 1e-18;
        const double tol2 = 2.0 * tol1;
        if (std::abs(x - xm) <= tol2 - 0.5 * (b - a)) break;
        bool golden = true;
        if (std::abs(e) > tol1) {
            const double r = (x - wp) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - wp) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::abs(q);
            const double e_old = e;
            e = d;
            if (std::abs(p) < std::abs(0.5 * q * e_old) && p > q * (a - x) && p < q * (b - x)) {
                d = p / q;
                const double u = x + d;
                if (u - a < tol2 || b - u < tol2) d = (xm - x >= 0.0 ? tol1 : -tol1);
                golden = false;
            }
        }
        if (golden) {
            e = (x >= xm) ? a - x : b - x;
            d = kGolden * e;
        }
        const double u = (std::abs(d) >= tol1) ? x + d : x + (d >= 0.0 ? tol1 : -tol1);
        const double fu = f(u);
        if (fu <= fx) {
            if (u >= x) a = x; else b = x;
            v = wp; fv = fw;
            wp = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) a = u; else b = u;
            if (fu <= fw || wp == x) {
                v = wp; fv = fw;
                wp = u; fw = fu;
            } else if (fu <= fv || v == x || v == wp) {
                v = u; fv = fu;
            }
        }
    }
    fmin = fx;
    return x;
}

// Bracket a minimum of f along alpha >= 0 starting from [0, step].
template <class F1D>
inline void bracket_min(F1D&& f, double step, double& ax, double& bx, double& cx) {
    constexpr double kGrow = 1.618033988749895;
    ax = 0.0;
    bx = step;
    double fa = f(ax), fb = f(bx);
    while (fb > fa && bx > 1e-16) {  // shrink until downhill
        bx *= 0.25;
        fb = f(bx);
    }
    cx = bx * kGrow + bx;
    double fc = f(cx);
    int guard = 0;
    while (fc < fb && guard++ < 60) {
        ax = bx; fa = fb;
        bx = cx; fb = fc;
        cx = bx + kGrow * (bx - ax);
        fc = f(cx);
    }
    (void)fa;
}

}  // namespace detail

/// Result of a converged least-squares fit.
struct FitResult {
    KinkState state;
    double error = 0.0;
    int iterations = 0;
};

/// Minimize the windowed squared residual over (x0, w) by Polak-Ribiere
/// conjugate gradients with Brent line minimizations, re-anchoring the
/// fit window on the refined state after every iteration. Converges when
/// successive objective values stop moving (differences < 1e-14 over
/// three iterations) or the gradient norm drops below 1e-11; throws
/// FitNotConverged (carrying the best state) after 200 iterations. The
/// reported error is fit_error at the minimizer.
inline FitResult fit(const FieldState& state, const KinkState& guess) {
    if (!(guess.w > 0.0)) throw std::invalid_argument("kink width must be positive");
    detail::FitObjective obj(state, guess);
    if (obj.empty()) throw FrontNotVisible("front not visible: fit window is empty");

    KinkState p = guess;
    double e_old = obj(p);
    if (e_old >= 1e29) throw FrontNotVisible("front not visible: fit window is empty");

    double gx, gw;
    obj.gradient(p, gx, gw);
    double dx = -gx, dw = -gw;

    constexpr int kMaxIter = 200;
    int plateau = 0;  // consecutive iterations with |dE| below the threshold
    int prev_lo = obj.lo, prev_hi = obj.hi;
    bool anchor_frozen = false;
    for (int iter = 1; iter <= kMaxIter; ++iter) {
        const double dnorm = std::hypot(dx, dw);
        if (dnorm == 0.0) return {p, fit_error(state, p), iter};

        auto along = [&](double alpha) {
            return obj(KinkState{p.x0 + alpha * dx, p.w + alpha * dw});
        };
        double ax, bx, cx;
        detail::bracket_min(along, std::min(1.0, 0.5 / dnorm), ax, bx, cx);
        double e_new;
        const double alpha = detail::brent_min(along, ax, bx, cx, 3e-14, e_new);
        if (e_new <= e_old) {
            p.x0 += alpha * dx;
            p.w += alpha * dw;
        } else {
            e_new = e_old;
        }

        // converged once the objective stops moving for two iterations in a
        // row; the extra pass lets the final conjugate step land
        plateau = std::abs(e_new - e_old) < 1e-14 ? plateau + 1 : 0;
        if (plateau >= 3) return {p, fit_error(state, p), iter};

        // re-anchor the window on the refined state for the next iteration.
        // When the minimum sits exactly on a window-boundary knife edge the
        // anchors 2-cycle (A -> B -> A); freeze on the lexicographically
        // smaller window so the endgame is smooth and path-independent.
        if (!anchor_frozen) {
            const int cur_lo = obj.lo, cur_hi = obj.hi;
            obj.anchor(p);
            if (obj.empty()) throw FrontNotVisible("front not visible: fit window is empty");
            if (obj.lo == prev_lo && obj.hi == prev_hi &&
                (obj.lo != cur_lo || obj.hi != cur_hi)) {
                if (std::pair(cur_lo, cur_hi) < std::pair(obj.lo, obj.hi)) {
                    obj.lo = cur_lo;
                    obj.hi = cur_hi;
                    obj.inv_m = 1.0 / static_cast<double>(cur_hi - cur_lo);
                }
                anchor_frozen = true;
            }
            prev_lo = cur_lo;
            prev_hi = cur_hi;
        }
        e_old = obj(p);

        double gx1, gw1;
        obj.gradient(p, gx1, gw1);
        if (std::hypot(gx1, gw1) < 1e-11) return {p, fit_error(state, p), iter};

        const double denom = gx * gx + gw * gw;
        double beta = denom > 0.0 ? ((gx1 - gx) * gx1 + (gw1 - gw) * gw1) / denom : 0.0;
        beta = std::max(0.0, beta);
        dx = -gx1 + beta * dx;
        dw = -gw1 + beta * dw;
        if (dx * gx1 + dw * gw1 >= 0.0) {  // not a descent direction; restart
            dx = -gx1;
            dw = -gw1;
        }
        gx = gx1;
        gw = gw1;
    }
    throw FitNotConverged("fit did not converge within 200 iterations", p,
                          fit_error(state, p));
}

/// Fit every snapshot, warm-starting each fit from the previous result.
inline FrontTrajectory trajectory(const std::vector<FieldState>& states) {
    if (states.size() < 3)
        throw std::invalid_argument("trajectory requires at least 3 snapshots");
    FrontTrajectory traj;
    traj.t.reserve(states.size());
    traj.x0.reserve(states.size());
    traj.w.reserve(states.size());
    traj.fit_error.reserve(states.size());

    KinkState warm;
    for (std::size_t i = 0; i < states.size(); ++i) {
        try {
            if (i == 0) warm = initial_guess(states[i]);
            const FitResult r = fit(states[i], warm);
            warm = r.state;
            traj.t.push_back(states[i].t);
            traj.x0.push_back(r.state.x0);
            traj.w.push_back(r.state.w);
            traj.fit_error.push_back(r.error);
        } catch (const FrontNotVisible& e) {
            throw FrontNotVisible("snapshot " + std::to_string(i) + ": " + e.what());
        } catch (const FitNotConverged& e) {
            throw FitNotConverged("snapshot " + std::to_string(i) + ": " + e.what(), e.best,
                                  e.error);
        }
    }
    return traj;
}

}  // namespace frontlab
