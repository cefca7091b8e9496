#pragma once

// Test-side oracles: independent quadrature/minimization routes used to
// freeze expected values. Kept out of the library on purpose.

#include <cmath>
#include <random>

#include "frontlab/cv.hpp"
#include "frontlab/quadrature.hpp"

namespace oracles {

// U(z) and U'(z) = -U(1-U) for the kink ansatz.
inline double kink_u(double z) { return frontlab::kink_profile(z); }
inline double kink_uprime(double z) {
    const double u = kink_u(z);
    return -u * (1.0 - u);
}

struct KinkMoments {
    double u_prime, z_u_prime, u_u_prime, z_u_u_prime, u_prime_sq;
};

// The five moment integrals by adaptive quadrature over [-60, 60]
// (integrands decay like e^-|z|).
inline KinkMoments compute_kink_moments(double tol = 1e-13) {
    const double z_max = 60.0;
    auto quad = [&](auto f) { return frontlab::integrate(f, -z_max, z_max, tol, 120); };
    KinkMoments m{};
    m.u_prime = quad([](double z) { return kink_uprime(z); });
    m.z_u_prime = quad([](double z) { return z * kink_uprime(z); });
    m.u_u_prime = quad([](double z) { return kink_u(z) * kink_uprime(z); });
    m.z_u_u_prime = quad([](double z) { return z * kink_u(z) * kink_uprime(z); });
    m.u_prime_sq = quad([](double z) { return kink_uprime(z) * kink_uprime(z); });
    return m;
}

// Golden-section minimizer for the 1D source-term oracle.
template <class F>
inline double golden_min(F&& f, double a, double b, double tol = 1e-12) {
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

// Deterministic uniform sampler for property tests.
struct Uniform {
    std::mt19937 rng;
    explicit Uniform(unsigned seed) : rng(seed) {}
    double operator()(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    }
};

}  // namespace oracles
