#pragma once

#include <cmath>
#include <stdexcept>
#include <variant>
#include <vector>

#include "frontlab/defects.hpp"
#include "frontlab/kinkfit.hpp"
#include "frontlab/ode.hpp"
#include "frontlab/quadrature.hpp"

namespace frontlab {

/// The five z-integrals of the kink ansatz U(z) = 1/(1+e^z) that enter the
/// reduced equations. Values are exact.
struct MomentConstants {
    double u_prime;      // int U' dz
    double z_u_prime;    // int z U' dz
    double u_u_prime;    // int U U' dz
    double z_u_u_prime;  // int z U U' dz
    double u_prime_sq;   // int U'^2 dz
};

inline constexpr MomentConstants kKinkMoments{-1.0, 0.0, -0.5, 0.5, 1.0 / 6.0};

/// Kink profile in the reduced variable, numerically stable for any z.
inline double kink_profile(double z) {
    if (z >= 0.0) {
        const double e = std::exp(-z);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(z));
}

/// R(U(z)) = -e^z (-1+a+a e^z) / (1+e^z)^3, evaluated through the stable
/// logistic form U(1-U)(U-a).
inline double source_R(double z, double a) {
    const double u = kink_profile(z);
    return u * (1.0 - u) * (u - a);
}

/// (1-2U(z)) R(U(z)) = e^z (1-e^z)(-1+a+a e^z) / (1+e^z)^4.
inline double source_R2(double z, double a) {
    const double u = kink_profile(z);
    return (1.0 - 2.0 * u) * u * (1.0 - u) * (u - a);
}

/// int_y^inf R(U(z)) dz = 1/(2(1+e^y)^2) - a/(1+e^y).
inline double heaviside_source_1(double y, double a) {
    const double u = kink_profile(y);
    return (0.5 * u - a) * u;
}

/// int_y^inf (1-2U) R(U) dz = -2/(3(1+e^y)^3) + (1+2a)/(2(1+e^y)^2) - a/(1+e^y).
inline double heaviside_source_2(double y, double a) {
    const double u = kink_profile(y);
    return ((-2.0 / 3.0 * u + 0.5 * (1.0 + 2.0 * a)) * u - a) * u;
}

/// Full two-moment system with the defect under the z-integrals.
struct GeneralModel {
    DefectSpec defect;
};

/// Wide-defect limit: s frozen at the front position.
struct AdiabaticModel {
    DefectSpec defect;
};

/// Adiabatic limit sharpened with the first Taylor term of s around x0.
struct AdiabaticTaylorModel {
    DefectSpec defect;
};

/// Point defect s(x) = alpha + beta delta(x).
struct DiracModel {
    double alpha;
    double beta;
};

/// Step defect s(x) = alpha + beta H(x).
struct HeavisideModel {
    double alpha;
    double beta;
};

using CvModel =
    std::variant<GeneralModel, AdiabaticModel, AdiabaticTaylorModel, DiracModel, HeavisideModel>;

/// Rate of change of the collective coordinates.
struct CvRates {
    double x0_dot;
    double w_dot;
};

namespace detail {

// Quadrature window and tolerance for the general model. The integrands
// decay like e^-|z|, so [-40, 40] truncates far below the tolerance; the
// pre-split keeps narrow defects from slipping between coarse nodes.
inline constexpr double kCvQuadHalfWidth = 40.0;
inline constexpr double kCvQuadTol = 1e-10;
inline constexpr int kCvQuadSubdiv = 80;

}  // namespace detail

/// Evaluate (x0', w') for the given reduced model. Throws std::domain_error
/// for non-positive widths; the general model rejects Dirac defects.
inline CvRates cv_rhs(const CvModel& model, const KinkState& state, double a) {
    if (!(state.w > 0.0)) throw std::domain_error("kink width must be positive");
    const double w = state.w;
    const double x0 = state.x0;

    return std::visit(
        [&](const auto& m) -> CvRates {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, GeneralModel>) {
                if (!pointwise_evaluable(m.defect))
                    throw std::invalid_argument(
                        "general model rejects dirac defects (use the dirac model)");
                const double i1 = integrate(
                    [&](double z) { return eval_defect(m.defect, w * z + x0) * source_R(z, a); },
                    -detail::kCvQuadHalfWidth, detail::kCvQuadHalfWidth, detail::kCvQuadTol,
                    detail::kCvQuadSubdiv);
                const double i2 = integrate(
                    [&](double z) { return eval_defect(m.defect, w * z + x0) * source_R2(z, a); },
                    -detail::kCvQuadHalfWidth, detail::kCvQuadHalfWidth, detail::kCvQuadTol,
                    detail::kCvQuadSubdiv);
                return {w * i1, 1.0 / (3.0 * w) + w * i2};
            } else if constexpr (std::is_same_v<T, AdiabaticModel>) {
                const double s = eval_defect(m.defect, x0);
                return {0.5 * (1.0 - 2.0 * a) * w * s, 1.0 / (3.0 * w) - w * s / 6.0};
            } else if constexpr (std::is_same_v<T, AdiabaticTaylorModel>) {
                const double s = eval_defect(m.defect, x0);
                const double sp = eval_defect_derivative(m.defect, x0);
                return {0.5 * (1.0 - 2.0 * a) * w * s - 0.5 * w * w * sp,
                        1.0 / (3.0 * w) - w * s / 6.0 + 0.5 * (1.0 - 2.0 * a) * w * w * sp};
            } else if constexpr (std::is_same_v<T, DiracModel>) {
                const double y = -x0 / w;
                return {0.5 * m.alpha * w * (1.0 - 2.0 * a) + m.beta * source_R(y, a),
                        1.0 / (3.0 * w) - m.alpha * w / 6.0 + m.beta * source_R2(y, a)};
            } else {
                const double y = -x0 / w;
                return {0.5 * m.alpha * w * (1.0 - 2.0 * a) + m.beta * w * heaviside_source_1(y, a),
                        1.0 / (3.0 * w) - m.alpha * w / 6.0 +
                            m.beta * w * heaviside_source_2(y, a)};
            }
        },
        model);
}

/// Integrate the reduced (x0, w) system with the same adaptive RK 4(5)
/// machinery as the full solver. fit_error is 0 by construction.
inline FrontTrajectory integrate_cv(const CvModel& model, const KinkState& init, double a,
                                    const SolverConfig& cfg) {
    if (!(init.w > 0.0)) throw std::domain_error("kink width must be positive");
    FrontTrajectory traj;
    auto rhs = [&](double /*t*/, const std::vector<double>& y, std::vector<double>& dydt) {
        const CvRates r = cv_rhs(model, KinkState{y[0], y[1]}, a);
        dydt[0] = r.x0_dot;
        dydt[1] = r.w_dot;
    };
    integrate_dopri5(rhs, std::vector<double>{init.x0, init.w}, 0.0, cfg,
                     [&](double t, const std::vector<double>& y) {
                         traj.t.push_back(t);
                         traj.x0.push_back(y[0]);
                         traj.w.push_back(y[1]);
                         traj.fit_error.push_back(0.0);
                     });
    return traj;
}

/// Reduced model matching an experiment defect for a given model kind.
enum class CvKind { General, Adiabatic, AdiabaticTaylor, Dirac, Heaviside };

/// Build the reduced model from a defect spec. Dirac/Heaviside kinds accept
/// either the idealized defect itself or the smooth defect it idealizes
/// (gaussian -> dirac with matched mass, tanh -> heaviside with matched jump).
inline CvModel make_cv_model(CvKind kind, const DefectSpec& defect) {
    switch (kind) {
        case CvKind::General:
            if (!pointwise_evaluable(defect))
                throw std::invalid_argument("general model rejects dirac defects");
            return GeneralModel{defect};
        case CvKind::Adiabatic:
            if (!pointwise_evaluable(defect))
                throw std::invalid_argument("adiabatic model requires an evaluable defect");
            return AdiabaticModel{defect};
        case CvKind::AdiabaticTaylor:
            if (std::holds_alternative<DiracDefect>(defect) ||
                std::holds_alternative<HeavisideDefect>(defect))
                throw std::invalid_argument("adiabatic-taylor model requires a smooth defect");
            return AdiabaticTaylorModel{defect};
        case CvKind::Dirac:
            if (const auto* d = std::get_if<DiracDefect>(&defect))
                return DiracModel{d->alpha, d->beta};
            if (std::holds_alternative<GaussianDefect>(defect)) {
                const DiracDefect d = dirac_equivalent(defect);
                return DiracModel{d.alpha, d.beta};
            }
            throw std::invalid_argument("dirac model requires a dirac or gaussian defect");
        case CvKind::Heaviside:
            if (const auto* h = std::get_if<HeavisideDefect>(&defect))
                return HeavisideModel{h->alpha, h->beta};
            if (std::holds_alternative<TanhDefect>(defect)) {
                const HeavisideDefect h = heaviside_equivalent(defect);
                return HeavisideModel{h.alpha, h.beta};
            }
            throw std::invalid_argument("heaviside model requires a heaviside or tanh defect");
    }
    throw std::logic_error("unknown cv model kind");
}

}  // namespace frontlab
