#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "frontlab/kinkfit.hpp"
#include "frontlab/pde.hpp"

using namespace frontlab;

namespace {
const DefectSpec kGauss = GaussianDefect{0.3, 0.6, 2.0};
}

TEST_CASE("reaction term roots and values") {
    CHECK(reaction(0.0, 0.3) == 0.0);
    CHECK(reaction(1.0, 0.3) == 0.0);
    CHECK(reaction(0.3, 0.3) == 0.0);
    CHECK(reaction(0.5, 0.3) == doctest::Approx(0.05).epsilon(1e-14));
    CHECK(reaction(0.1, 0.3) == doctest::Approx(-0.018).epsilon(1e-14));
}

TEST_CASE("homogeneous speed and width") {
    CHECK(homogeneous_speed(2.0, 0.3) == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(homogeneous_width(2.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(homogeneous_speed(0.3, 0.5) == doctest::Approx(0.0));
    CHECK(homogeneous_speed(0.3, 0.3) == doctest::Approx(0.154919).epsilon(1e-5));
    CHECK(homogeneous_width(0.3) == doctest::Approx(2.581989).epsilon(1e-6));
    CHECK_THROWS_AS(homogeneous_speed(0.0, 0.3), std::domain_error);
    CHECK_THROWS_AS(homogeneous_width(-1.0), std::domain_error);
}

TEST_CASE("exact kink profile") {
    CHECK(exact_kink(3.0, 3.0, 1.7) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(exact_kink(2.0 * std::log(3.0), 0.0, 2.0) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(exact_kink(1e9, 0.0, 1.0) == doctest::Approx(0.0));
    CHECK(std::isfinite(exact_kink(1e300, 0.0, 1e-3)));
    CHECK(std::isfinite(exact_kink(-1e300, 0.0, 1e-3)));
}

TEST_CASE("grid centers match the cell-center formula") {
    const Grid g{-100.0, 100.0, 4000};
    CHECK(g.h() == doctest::Approx(0.05).epsilon(1e-14));
    CHECK(g.center(0) == doctest::Approx(-99.975).epsilon(1e-12));
    CHECK(g.center(3999) == doctest::Approx(99.975).epsilon(1e-12));
    CHECK_THROWS_AS((Grid{0.0, 1.0, 2}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((Grid{1.0, 0.0, 100}.validate()), std::invalid_argument);
}

TEST_CASE("equilibria are fixed points of the semi-discrete rhs") {
    const Grid g{-20.0, 20.0, 400};
    for (double level : {0.0, 1.0, 0.3}) {
        FieldState state{g, 0.0, std::vector<double>(400, level)};
        for (const DefectSpec& s :
             {kGauss, DefectSpec{TanhDefect{0.3, 1.0, 0.5}}, DefectSpec{ConstantDefect{0.7}}}) {
            const std::vector<double> dudt = rhs(state, s, {0.3});
            for (double d : dudt) CHECK(std::abs(d) < 1e-15);
        }
    }
}

TEST_CASE("rhs rejects dirac defects") {
    const Grid g{-10.0, 10.0, 100};
    FieldState state{g, 0.0, std::vector<double>(100, 0.0)};
    CHECK_THROWS_AS(rhs(state, DefectSpec{DiracDefect{0.3, 1.0}}, {0.3}), std::invalid_argument);
}

TEST_CASE("rhs of a kink equals -c u_x to second order in h") {
    // For the equilibrium traveling wave, u_t = -c u_x with
    // u_x = -U(1-U)/w, so the discrete rhs must approach c U(1-U)/w.
    const double s = 0.3, a = 0.3;
    const double c = homogeneous_speed(s, a);
    const double w = homogeneous_width(s);
    auto max_err = [&](int n) {
        const Grid g{-40.0, 40.0, n};
        const FieldState state = kink_field(g, 0.0, w);
        const std::vector<double> dudt = rhs(state, DefectSpec{ConstantDefect{s}}, {a});
        double worst = 0.0;
        for (int k = 1; k + 1 < n; ++k) {
            const double u = state.u[static_cast<std::size_t>(k)];
            worst = std::max(worst, std::abs(dudt[static_cast<std::size_t>(k)] - c * u * (1.0 - u) / w));
        }
        return worst;
    };
    const double e1 = max_err(800);
    const double e2 = max_err(1600);
    CHECK(e1 / e2 > 3.2);
    CHECK(e1 / e2 < 4.8);
}

TEST_CASE("zero field stays zero under integration") {
    const Grid g{-20.0, 20.0, 200};
    FieldState u0{g, 0.0, std::vector<double>(200, 0.0)};
    SolverConfig cfg;
    cfg.t_max = 5.0;
    cfg.dt_out = 1.0;
    const auto states = integrate(u0, kGauss, {0.3}, cfg);
    REQUIRE(states.size() == 6);
    for (const auto& st : states)
        for (double v : st.u) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("homogeneous kink travels at the analytic speed") {
    const double s = 0.3, a = 0.3;
    const double c = homogeneous_speed(s, a);
    const double w = homogeneous_width(s);
    const Grid g{-60.0, 60.0, 1200};  // h = 0.1
    const FieldState u0 = kink_field(g, -20.0, w);
    SolverConfig cfg;
    cfg.t_max = 60.0;
    cfg.dt_out = 2.0;
    const auto states = integrate(u0, DefectSpec{ConstantDefect{s}}, {a}, cfg);
    const FrontTrajectory traj = trajectory(states);
    const std::vector<double> v = traj.speed();

    // discard transients: average the second half of the speed series
    double mean = 0.0;
    std::size_t count = 0;
    for (std::size_t i = v.size() / 2; i < v.size(); ++i, ++count) mean += v[i];
    mean /= static_cast<double>(count);
    CHECK(mean == doctest::Approx(c).epsilon(0.01));
    CHECK(traj.w.back() == doctest::Approx(w).epsilon(0.01));

    // comparison principle: initial data in [0, 1] stays within 1e-6 slack
    for (const auto& st : states) {
        const auto [lo, hi] = std::minmax_element(st.u.begin(), st.u.end());
        CHECK(*lo > -1e-6);
        CHECK(*hi < 1.0 + 1e-6);
    }
}

TEST_CASE("halving tolerances barely moves the fitted trajectory") {
    const Grid g{-40.0, 40.0, 800};
    const FieldState u0 = kink_field(g, -10.0, homogeneous_width(0.3));
    auto run = [&](double tol) {
        SolverConfig cfg;
        cfg.rtol = cfg.atol = tol;
        cfg.t_max = 30.0;
        cfg.dt_out = 2.0;
        return trajectory(integrate(u0, DefectSpec{ConstantDefect{0.3}}, {0.3}, cfg));
    };
    const FrontTrajectory a = run(1e-6);
    const FrontTrajectory b = run(5e-7);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a.x0[i] - b.x0[i]) / std::abs(a.x0[i]));
    CHECK(worst < 10.0 * 1e-6);
}

TEST_CASE("speed functional returns the analytic speed for the equilibrium kink") {
    const double s = 0.5, a = 0.3;
    const Grid g{-50.0, 50.0, 2000};
    const FieldState state = kink_field(g, 0.0, homogeneous_width(s));
    const double est = speed_functional(state, DefectSpec{ConstantDefect{s}}, {a});
    CHECK(est == doctest::Approx(homogeneous_speed(s, a)).epsilon(1e-8));
}

TEST_CASE("speed functional orientation check") {
    const Grid g{-10.0, 10.0, 100};
    FieldState zero{g, 0.0, std::vector<double>(100, 0.0)};
    CHECK_THROWS_AS(speed_functional(zero, DefectSpec{ConstantDefect{0.3}}, {0.3}),
                    FrontNotVisible);
    // the raw quadrature is still available for the R(0) = 0 identity
    CHECK(speed_functional(zero, DefectSpec{ConstantDefect{0.3}}, {0.3}, false) ==
          doctest::Approx(0.0));
    CHECK_THROWS_AS(speed_functional(zero, DefectSpec{DiracDefect{0.3, 1.0}}, {0.3}, false),
                    std::invalid_argument);
}

TEST_CASE("speed functional vanishes on a pinned steady state") {
    // strong narrow bump; run to stall and evaluate the conservation-law
    // speed on the final field
    const Grid g{-60.0, 60.0, 1200};
    const DefectSpec defect = GaussianDefect{0.3, 7.0, 0.3};
    SolverConfig cfg;
    cfg.t_max = 250.0;
    cfg.dt_out = 250.0;
    const auto states = integrate(kink_field(g, -15.0, homogeneous_width(0.3)), defect, {0.3}, cfg);
    const double c = speed_functional(states.back(), defect, {0.3});
    CHECK(std::abs(c) < 1e-3);
}

TEST_CASE("a small narrow bump slows the front, then speeds it up") {
    const Grid g{-60.0, 60.0, 1200};
    const DefectSpec defect = GaussianDefect{0.3, 0.6, 0.3};
    SolverConfig cfg;
    cfg.t_max = 200.0;
    cfg.dt_out = 1.0;
    const auto states = integrate(kink_field(g, -15.0, homogeneous_width(0.3)), defect, {0.3}, cfg);
    const FrontTrajectory traj = trajectory(states);
    const std::vector<double> v = traj.speed();
    const double c_free = homogeneous_speed(0.3, 0.3);
    double dip = 1e300, peak = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (traj.x0[i + 1] < -1.0) dip = std::min(dip, v[i]);  // approaching the defect
        peak = std::max(peak, v[i]);
    }
    CHECK(dip < 0.95 * c_free);
    CHECK(peak > 1.05 * c_free);
    CHECK(traj.x0.back() > 10.0);  // breached, not pinned
}

TEST_CASE("blowing-up initial data reports stiff failure") {
    const Grid g{-10.0, 10.0, 50};
    FieldState u0{g, 0.0, std::vector<double>(50, 1e150)};
    SolverConfig cfg;
    cfg.t_max = 1.0;
    cfg.dt_out = 0.5;
    CHECK_THROWS_AS(integrate(u0, DefectSpec{ConstantDefect{0.3}}, {0.3}, cfg), StiffFailure);
}

TEST_CASE("non-finite initial data reports divergence") {
    const Grid g{-10.0, 10.0, 50};
    std::vector<double> u(50, 0.5);
    u[10] = std::nan("");
    SolverConfig cfg;
    cfg.t_max = 1.0;
    cfg.dt_out = 0.5;
    CHECK_THROWS_AS(integrate(FieldState{g, 0.0, u}, DefectSpec{ConstantDefect{0.3}}, {0.3}, cfg),
                    Divergence);
}

TEST_CASE("reaction params validation") {
    CHECK_THROWS_AS(ReactionParams{0.0}.validate(), std::invalid_argument);
    CHECK_THROWS_AS(ReactionParams{1.0}.validate(), std::invalid_argument);
    CHECK_NOTHROW(ReactionParams{0.3}.validate());
}
