#include "doctest.h"

#include <cmath>
#include <vector>

#include "frontlab/cv.hpp"
#include "frontlab/pde.hpp"
#include "frontlab/pinning.hpp"
#include "oracles.hpp"

using namespace frontlab;

TEST_CASE("analytic pinning values for a = alpha = 0.3") {
    const PinningAnalysis p = analyze(0.3, 0.3);
    CHECK(std::abs(p.beta_c - 5.88) <= 0.01);
    CHECK(std::abs(p.x0_pin - (-3.47)) <= 0.01);
    CHECK(std::abs(p.w_pin - 1.89) <= 0.01);
    CHECK(p.r == doctest::Approx(std::sqrt(0.79)).epsilon(1e-14));
    CHECK(p.min_R < 0.0);
}

TEST_CASE("closed-form z_min and min_R match numerical minimization") {
    for (double a : {0.1, 0.2, 0.3, 0.4, 0.45}) {
        const PinningAnalysis p = analyze(a, 1.0);
        const double z_num =
            oracles::golden_min([&](double z) { return source_R(z, a); }, 0.0, 12.0, 1e-13);
        CHECK(std::abs(p.z_min - z_num) < 1e-5);
        CHECK(std::abs(p.min_R - source_R(z_num, a)) < 1e-10);
        // at the true minimum the derivative vanishes to high accuracy
        const double eps = 1e-6;
        CHECK(std::abs(source_R(p.z_min + eps, a) - source_R(p.z_min - eps, a)) < 1e-10);
    }
}

TEST_CASE("balance identity at the critical point") {
    for (double a : {0.1, 0.3, 0.45}) {
        for (double alpha : {0.2, 0.3, 1.5}) {
            const PinningAnalysis p = analyze(a, alpha);
            const double balance = alpha * p.w_pin * 0.5 * (1.0 - 2.0 * a) + p.beta_c * p.min_R;
            CHECK(std::abs(balance) < 1e-12);
        }
    }
}

TEST_CASE("critical mass scales as sqrt(alpha)") {
    const PinningAnalysis p1 = analyze(0.3, 0.3);
    const PinningAnalysis p4 = analyze(0.3, 1.2);
    CHECK(p4.beta_c == doctest::Approx(2.0 * p1.beta_c).epsilon(1e-12));
}

TEST_CASE("first stationarity equation balances exactly at the predicted state") {
    const PinningAnalysis p = analyze(0.3, 0.3);
    const CvRates r = cv_rhs(DiracModel{0.3, p.beta_c}, {p.x0_pin, p.w_pin}, 0.3);
    CHECK(std::abs(r.x0_dot) < 1e-12);
    // w' at the assumed stall locus is reported, not asserted to vanish
    MESSAGE("w_dot at analytic pinning state: ", r.w_dot);
}

TEST_CASE("analyze rejects leftward fronts and bad baselines") {
    CHECK_THROWS_AS(analyze(0.5, 0.3), std::domain_error);
    CHECK_THROWS_AS(analyze(0.7, 0.3), std::domain_error);
    CHECK_THROWS_AS(analyze(0.3, 0.0), std::domain_error);
}

namespace {

FrontTrajectory synthetic_stall(double x_target, double tau, double t_max, double dt) {
    FrontTrajectory traj;
    for (double t = 0.0; t <= t_max + 1e-12; t += dt) {
        traj.t.push_back(t);
        traj.x0.push_back(x_target * (1.0 - std::exp(-t / tau)) - 0.0);
        traj.w.push_back(1.8);
        traj.fit_error.push_back(0.0);
    }
    return traj;
}

FrontTrajectory synthetic_cruise(double x_start, double c, double t_max, double dt) {
    FrontTrajectory traj;
    for (double t = 0.0; t <= t_max + 1e-12; t += dt) {
        traj.t.push_back(t);
        traj.x0.push_back(x_start + c * t);
        traj.w.push_back(2.58);
        traj.fit_error.push_back(0.0);
    }
    return traj;
}

}  // namespace

TEST_CASE("detect_pinning: stalled front is pinned") {
    const FrontTrajectory traj = synthetic_stall(-2.7, 5.0, 150.0, 1.0);
    const PinningVerdict v = detect_pinning(traj, 0.155, 0.55);
    CHECK(v.pinned);
    CHECK(v.x0_final == doctest::Approx(-2.7).epsilon(1e-4));
    CHECK(v.w_final == doctest::Approx(1.8));
    CHECK(v.t_decided == doctest::Approx(149.0));
}

TEST_CASE("detect_pinning: cruising front escapes") {
    const FrontTrajectory traj = synthetic_cruise(-20.0, 0.155, 320.0, 1.0);
    const PinningVerdict v = detect_pinning(traj, 0.155, 0.5);
    CHECK(!v.pinned);
    // escape mark is 10 * max(w, extent) = 25.8 past the defect center
    CHECK(v.x0_final >= 25.8);
    CHECK(v.t_decided == doctest::Approx((25.8 + 20.0) / 0.155).epsilon(0.02));
}

TEST_CASE("detect_pinning: short or ambiguous trajectories are undecided") {
    CHECK_THROWS_AS(detect_pinning(synthetic_stall(-2.7, 5.0, 30.0, 1.0), 0.155, 0.55),
                    PinningUndecided);
    CHECK_THROWS_AS(detect_pinning(synthetic_cruise(-20.0, 0.155, 100.0, 1.0), 0.155, 0.5),
                    PinningUndecided);
}

TEST_CASE("zero dirac mass never pins") {
    SolverConfig cfg;
    cfg.rtol = cfg.atol = 1e-10;
    cfg.t_max = 350.0;
    cfg.dt_out = 1.0;
    const FrontTrajectory traj =
        integrate_cv(DiracModel{0.3, 0.0}, {-15.0, homogeneous_width(0.3)}, 0.3, cfg);
    const PinningVerdict v = detect_pinning(traj, homogeneous_speed(0.3, 0.3), 0.0);
    CHECK(!v.pinned);
}

namespace {

PinningVerdict dirac_probe(double beta, double t_max = 1200.0) {
    SolverConfig cfg;
    cfg.rtol = cfg.atol = 1e-10;
    cfg.t_max = t_max;
    cfg.dt_out = 1.0;
    const FrontTrajectory traj =
        integrate_cv(DiracModel{0.3, beta}, {-12.0, homogeneous_width(0.3)}, 0.3, cfg);
    return detect_pinning(traj, homogeneous_speed(0.3, 0.3), 0.0);
}

}  // namespace

TEST_CASE("bisected dirac threshold sits near the analytic estimate") {
    const ThresholdResult res =
        find_threshold([](double beta) { return dirac_probe(beta); }, 4.0, 8.0);
    const double analytic = analyze(0.3, 0.3).beta_c;
    CHECK(std::abs(res.critical - analytic) / analytic < 0.10);
    MESSAGE("measured cv dirac threshold: ", res.critical, " (analytic ", analytic, ")");

    // verdicts are monotone across the bracket
    bool seen_pinned = false;
    for (double beta : {4.0, 5.0, 6.0, 7.0, 8.0}) {
        const bool pinned = dirac_probe(beta).pinned;
        if (seen_pinned) CHECK(pinned);
        if (pinned) seen_pinned = true;
    }
    CHECK(seen_pinned);
}

TEST_CASE("find_threshold validates its bracket") {
    CHECK_THROWS_AS(find_threshold([](double) { return PinningVerdict{false, 0, 0, 0}; }, 1.0,
                                   2.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(find_threshold([](double) { return PinningVerdict{true, 0, 0, 0}; }, 1.0, 2.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(find_threshold([](double) { return PinningVerdict{true, 0, 0, 0}; }, 2.0, 1.0),
                    std::invalid_argument);
}

TEST_CASE("negative mass exploration (recorded, not asserted)") {
    // s stays positive down to beta = -alpha; probe a few negative masses
    // and record whether any of them pins.
    int pinned_count = 0;
    for (double beta : {-0.29, -0.2, -0.1}) {
        try {
            if (dirac_probe(beta, 600.0).pinned) ++pinned_count;
        } catch (const PinningUndecided&) {
            MESSAGE("beta ", beta, ": undecided after t = 600");
        }
    }
    MESSAGE("negative-beta probes pinned: ", pinned_count, "/3");
}
