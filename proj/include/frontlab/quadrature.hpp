#pragma once

#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

namespace frontlab {

namespace detail {

// Gauss-Kronrod 7-15 nodes and weights (QUADPACK qk15).
inline constexpr double kGK15Nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kGK15WeightsK[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double kGK15WeightsG[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class F>
inline void qk15(F&& f, double a, double b, double& result, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double resk = 0.0, resg = 0.0;
    for (int j = 0; j < 8; ++j) {
        const double dx = h * kGK15Nodes[j];
        const double fsum = (j == 7) ? f(c) : f(c - dx) + f(c + dx);
        resk += kGK15WeightsK[j] * fsum;
        // odd-indexed Kronrod nodes (plus the center) are the Gauss-7 nodes
        if (j % 2 == 1 || j == 7) resg += kGK15WeightsG[j / 2] * fsum;
    }
    result = resk * h;
    err = std::abs((resk - resg) * h);
}

struct QuadInterval {
    double a, b, value, err;
    bool operator<(const QuadInterval& o) const {
        if (err != o.err) return err < o.err;
        return a > o.a;  // deterministic tie break
    }
};

}  // namespace detail

/// Globally adaptive Gauss-Kronrod 7-15 quadrature of f over [a, b].
/// Splits [a, b] into `initial_subdiv` equal pieces first so narrow
/// features are not missed by the coarse rule, then refines the interval
/// with the largest error estimate until the total is below abs_tol.
template <class F>
inline double integrate(F&& f, double a, double b, double abs_tol = 1e-12,
                        int initial_subdiv = 1, int max_intervals = 4000) {
    if (initial_subdiv < 1) initial_subdiv = 1;
    std::priority_queue<detail::QuadInterval> q;
    double total = 0.0, total_err = 0.0;
    const double step = (b - a) / initial_subdiv;
    for (int i = 0; i < initial_subdiv; ++i) {
        const double lo = a + i * step;
        const double hi = (i + 1 == initial_subdiv) ? b : a + (i + 1) * step;
        detail::QuadInterval iv{lo, hi, 0.0, 0.0};
        detail::qk15(f, lo, hi, iv.value, iv.err);
        total += iv.value;
        total_err += iv.err;
        q.push(iv);
    }
    int n = initial_subdiv;
    while (total_err > abs_tol && n < max_intervals && !q.empty()) {
        const detail::QuadInterval worst = q.top();
        q.pop();
        total -= worst.value;
        total_err -= worst.err;
        const double mid = 0.5 * (worst.a + worst.b);
        for (const auto& [lo, hi] : {std::pair{worst.a, mid}, std::pair{mid, worst.b}}) {
            detail::QuadInterval iv{lo, hi, 0.0, 0.0};
            detail::qk15(f, lo, hi, iv.value, iv.err);
            total += iv.value;
            total_err += iv.err;
            q.push(iv);
        }
        ++n;
    }
    return total;
}

}  // namespace frontlab
