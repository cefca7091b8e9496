#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>

namespace frontlab {

/// Homogeneous medium, s(x) = s everywhere.
struct ConstantDefect {
    double s;
};

/// s(x) = s0 + s1 * exp(-(x-center)^2 / (2 d)).
/// d enters exactly as written (not squared), so it carries length^2 units.
struct GaussianDefect {
    double s0;
    double s1;
    double d;
    double center = 0.0;
};

/// s(x) = s_l + (s_r - s_l)/2 * (1 + tanh((x-center)/d)).
struct TanhDefect {
    double s_l;
    double s_r;
    double d;
    double center = 0.0;
};

/// s(x) = alpha + beta * delta(x). Not pointwise evaluable.
struct DiracDefect {
    double alpha;
    double beta;
};

/// s(x) = alpha + beta * H(x), with H(0) = 1/2.
struct HeavisideDefect {
    double alpha;
    double beta;
};

using DefectSpec =
    std::variant<ConstantDefect, GaussianDefect, TanhDefect, DiracDefect, HeavisideDefect>;

inline bool pointwise_evaluable(const DefectSpec& spec) {
    return !std::holds_alternative<DiracDefect>(spec);
}

/// Evaluate s(x). Throws std::invalid_argument for the Dirac variant.
inline double eval_defect(const DefectSpec& spec, double x) {
    return std::visit(
        [x](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, ConstantDefect>) {
                return d.s;
            } else if constexpr (std::is_same_v<T, GaussianDefect>) {
                const double r = x - d.center;
                return d.s0 + d.s1 * std::exp(-r * r / (2.0 * d.d));
            } else if constexpr (std::is_same_v<T, TanhDefect>) {
                return d.s_l + 0.5 * (d.s_r - d.s_l) * (1.0 + std::tanh((x - d.center) / d.d));
            } else if constexpr (std::is_same_v<T, HeavisideDefect>) {
                if (x < 0.0) return d.alpha;
                if (x > 0.0) return d.alpha + d.beta;
                return d.alpha + 0.5 * d.beta;
            } else {
                throw std::invalid_argument("dirac defect is not pointwise evaluable");
            }
        },
        spec);
}

/// Analytic s'(x) for the smooth variants. Heaviside/Dirac are rejected.
inline double eval_defect_derivative(const DefectSpec& spec, double x) {
    return std::visit(
        [x](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, ConstantDefect>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, GaussianDefect>) {
                const double r = x - d.center;
                return -d.s1 * r / d.d * std::exp(-r * r / (2.0 * d.d));
            } else if constexpr (std::is_same_v<T, TanhDefect>) {
                const double c = std::cosh((x - d.center) / d.d);
                return 0.5 * (d.s_r - d.s_l) / (d.d * c * c);
            } else {
                throw std::invalid_argument("defect has no pointwise derivative");
            }
        },
        spec);
}

/// Baseline level far to the left of the defect (where the front starts).
inline double left_level(const DefectSpec& spec) {
    return std::visit(
        [](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, ConstantDefect>) return d.s;
            else if constexpr (std::is_same_v<T, GaussianDefect>) return d.s0;
            else if constexpr (std::is_same_v<T, TanhDefect>) return d.s_l;
            else return d.alpha;
        },
        spec);
}

/// Characteristic half-width of the defect feature, used by the pinning
/// escape rule. Idealized (zero-width) defects report 0.
inline double defect_extent(const DefectSpec& spec) {
    return std::visit(
        [](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, GaussianDefect>) return std::sqrt(d.d);
            else if constexpr (std::is_same_v<T, TanhDefect>) return d.d;
            else return 0.0;
        },
        spec);
}

inline double defect_center(const DefectSpec& spec) {
    return std::visit(
        [](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, GaussianDefect> || std::is_same_v<T, TanhDefect>)
                return d.center;
            else
                return 0.0;
        },
        spec);
}

namespace detail {

// ln cosh without overflow for large arguments
inline double log_cosh(double y) {
    const double ay = std::abs(y);
    return ay + std::log1p(std::exp(-2.0 * ay)) - M_LN2;
}

}  // namespace detail

/// Average of s over the cell [a, b], in closed form per variant. This is
/// the finite-volume sampling of the defect: the per-cell mass is exact at
/// any resolution, which keeps strong narrow defects faithful on coarse
/// grids. Dirac defects are rejected.
inline double cell_average(const DefectSpec& spec, double a, double b) {
    if (!(b > a)) throw std::invalid_argument("cell_average requires b > a");
    return std::visit(
        [&](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, ConstantDefect>) {
                return d.s;
            } else if constexpr (std::is_same_v<T, GaussianDefect>) {
                // antiderivative of exp(-x^2/(2d)) is sqrt(pi d/2) erf(x/sqrt(2d))
                const double root = std::sqrt(2.0 * d.d);
                const double scale = std::sqrt(0.5 * M_PI * d.d);
                const double hi = scale * std::erf((b - d.center) / root);
                const double lo = scale * std::erf((a - d.center) / root);
                return d.s0 + d.s1 * (hi - lo) / (b - a);
            } else if constexpr (std::is_same_v<T, TanhDefect>) {
                // antiderivative of tanh(x/d) is d ln cosh(x/d)
                const double hi = d.d * detail::log_cosh((b - d.center) / d.d);
                const double lo = d.d * detail::log_cosh((a - d.center) / d.d);
                return d.s_l + 0.5 * (d.s_r - d.s_l) * (1.0 + (hi - lo) / (b - a));
            } else if constexpr (std::is_same_v<T, HeavisideDefect>) {
                const double above = std::max(0.0, b - std::max(a, 0.0));
                return d.alpha + d.beta * above / (b - a);
            } else {
                throw std::invalid_argument("dirac defect is not pointwise evaluable");
            }
        },
        spec);
}

/// Dirac defect with the same baseline and the same integrated bump mass:
/// alpha = s0, beta = s1 * sqrt(2 pi d).
inline DiracDefect dirac_equivalent(const DefectSpec& spec) {
    const auto* g = std::get_if<GaussianDefect>(&spec);
    if (!g) throw std::invalid_argument("dirac_equivalent requires a gaussian defect");
    if (g->center != 0.0)
        throw std::invalid_argument("dirac_equivalent requires a defect centered at 0");
    return DiracDefect{g->s0, g->s1 * std::sqrt(2.0 * M_PI * g->d)};
}

/// Heaviside defect with the same left level and the same jump:
/// alpha = s_l, beta = s_r - s_l.
inline HeavisideDefect heaviside_equivalent(const DefectSpec& spec) {
    const auto* t = std::get_if<TanhDefect>(&spec);
    if (!t) throw std::invalid_argument("heaviside_equivalent requires a tanh defect");
    if (t->center != 0.0)
        throw std::invalid_argument("heaviside_equivalent requires a defect centered at 0");
    return HeavisideDefect{t->s_l, t->s_r - t->s_l};
}

inline std::string defect_kind_name(const DefectSpec& spec) {
    return std::visit(
        [](const auto& d) -> std::string {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, ConstantDefect>) return "constant";
            else if constexpr (std::is_same_v<T, GaussianDefect>) return "gaussian";
            else if constexpr (std::is_same_v<T, TanhDefect>) return "tanh";
            else if constexpr (std::is_same_v<T, DiracDefect>) return "dirac";
            else return "heaviside";
        },
        spec);
}

}  // namespace frontlab
