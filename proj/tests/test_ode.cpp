#include "doctest.h"

#include <cmath>
#include <vector>

#include "frontlab/ode.hpp"

using namespace frontlab;

TEST_CASE("exponential decay hits the tolerance") {
    auto rhs = [](double, const std::vector<double>& y, std::vector<double>& d) { d[0] = -y[0]; };
    SolverConfig cfg;
    cfg.rtol = cfg.atol = 1e-10;
    cfg.t_max = 5.0;
    cfg.dt_out = 1.0;
    std::vector<double> ts, ys;
    integrate_dopri5(rhs, std::vector<double>{1.0}, 0.0, cfg,
                     [&](double t, const std::vector<double>& y) {
                         ts.push_back(t);
                         ys.push_back(y[0]);
                     });
    REQUIRE(ts.size() == 6);
    for (std::size_t i = 0; i < ts.size(); ++i) {
        CHECK(ts[i] == doctest::Approx(static_cast<double>(i)).epsilon(1e-14));
        CHECK(ys[i] == doctest::Approx(std::exp(-ts[i])).epsilon(1e-8));
    }
}

TEST_CASE("harmonic oscillator stays on the circle") {
    auto rhs = [](double, const std::vector<double>& y, std::vector<double>& d) {
        d[0] = y[1];
        d[1] = -y[0];
    };
    SolverConfig cfg;
    cfg.rtol = cfg.atol = 1e-10;
    cfg.t_max = 20.0;
    cfg.dt_out = 0.5;
    double worst = 0.0;
    integrate_dopri5(rhs, std::vector<double>{1.0, 0.0}, 0.0, cfg,
                     [&](double, const std::vector<double>& y) {
                         worst = std::max(worst, std::abs(y[0] * y[0] + y[1] * y[1] - 1.0));
                     });
    CHECK(worst < 1e-8);
}

TEST_CASE("tightening tolerances tightens the answer") {
    auto rhs = [](double t, const std::vector<double>& y, std::vector<double>& d) {
        d[0] = std::cos(t) * y[0];
    };
    auto run = [&](double tol) {
        SolverConfig cfg;
        cfg.rtol = cfg.atol = tol;
        cfg.t_max = 10.0;
        cfg.dt_out = 10.0;
        double last = 0.0;
        integrate_dopri5(rhs, std::vector<double>{1.0}, 0.0, cfg,
                         [&](double, const std::vector<double>& y) { last = y[0]; });
        return last;
    };
    const double exact = std::exp(std::sin(10.0));
    CHECK(std::abs(run(1e-6) - exact) < 1e-5);
    CHECK(std::abs(run(1e-10) - exact) < 1e-9);
    CHECK(std::abs(run(1e-10) - exact) < std::abs(run(1e-4) - exact));
}

TEST_CASE("divergent problems raise the right errors") {
    // Finite-time blow-up: y' = y^2 from y(0) = 1 blows up at t = 1.
    auto rhs = [](double, const std::vector<double>& y, std::vector<double>& d) {
        d[0] = y[0] * y[0];
    };
    SolverConfig cfg;
    cfg.rtol = cfg.atol = 1e-8;
    cfg.t_max = 2.0;
    cfg.dt_out = 0.1;
    CHECK_THROWS_AS(
        integrate_dopri5(rhs, std::vector<double>{1.0}, 0.0, cfg,
                         [](double, const std::vector<double>&) {}),
        StiffFailure);

    const double nan = std::nan("");
    CHECK_THROWS_AS(
        integrate_dopri5(rhs, std::vector<double>{nan}, 0.0, cfg,
                         [](double, const std::vector<double>&) {}),
        Divergence);
}

TEST_CASE("config validation") {
    SolverConfig cfg;
    cfg.dt_out = 200.0;
    cfg.t_max = 100.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.dt_out = 1.0;
    CHECK_NOTHROW(cfg.validate());
    cfg.rtol = -1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
