#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "clsk/chen.hpp"
#include "clsk/integrate.hpp"
#include "clsk/lyapunov.hpp"
#include "clsk/presets.hpp"

using namespace clsk;

TEST_CASE("chen flow at fixed points and a reference state") {
    NodeModel m;
    CHECK(chen_flow({0, 0, 0}, m).norm() == 0.0);

    Eigen::Vector3d f = chen_flow({1, 1, 1}, m);
    CHECK(f(0) == doctest::Approx(0.0));
    CHECK(f(1) == doctest::Approx(20.0));
    CHECK(f(2) == doctest::Approx(-5.0 / 3.0));

    // nontrivial equilibrium: x1 = x2 = sqrt(b(2c-a)), x3 = 2c - a
    const double x12 = std::sqrt(56.0);
    CHECK(chen_flow({x12, x12, 21.0}, m).norm() < 1e-12);

    CHECK_THROWS_AS(chen_flow({std::nan(""), 0, 0}, m), std::domain_error);
}

TEST_CASE("jacobian matches finite differences and analytic values") {
    NodeModel m;
    Eigen::Matrix3d j0 = chen_jacobian({0, 0, 0}, m);
    Eigen::Matrix3d expect;
    expect << -35, 35, 0, -7, 28, 0, 0, 0, -8.0 / 3.0;
    CHECK((j0 - expect).cwiseAbs().maxCoeff() < 1e-12);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-100.0, 100.0);
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::Vector3d x{u(rng), u(rng), u(rng)};
        Eigen::Matrix3d jac = chen_jacobian(x, m);
        CHECK(jac.trace() == doctest::Approx(-m.a + m.c - m.b));
        const double h = 1e-5;
        for (int c = 0; c < 3; ++c) {
            Eigen::Vector3d dx = Eigen::Vector3d::Zero();
            dx(c) = h;
            Eigen::Vector3d col = (chen_flow(x + dx, m) - chen_flow(x - dx, m)) / (2 * h);
            for (int r = 0; r < 3; ++r)
                CHECK(jac(r, c) == doctest::Approx(col(r)).epsilon(1e-6));
        }
    }
}

TEST_CASE("rk4 integrator accuracy") {
    OdeRhs decay = [](const Eigen::VectorXd& x, Eigen::VectorXd& dx) { dx = -x; };
    Eigen::VectorXd x0(1);
    x0 << 1.0;

    auto traj = integrate_ode(decay, x0, 0.01, 100);
    CHECK(traj.size() == 101);
    CHECK(std::abs(traj.back()(0) - std::exp(-1.0)) < 1e-8);

    OdeRhs still = [](const Eigen::VectorXd&, Eigen::VectorXd& dx) { dx.setZero(); };
    Eigen::VectorXd c0(3);
    c0 << 1, 2, 3;
    auto flat = integrate_ode(still, c0, 0.1, 50);
    for (const auto& s : flat) CHECK((s - c0).norm() == 0.0);

    // fourth-order convergence on the same problem over one time unit
    auto err_at = [&](double dt) {
        auto t = integrate_ode(decay, x0, dt, std::lround(1.0 / dt));
        return std::abs(t.back()(0) - std::exp(-1.0));
    };
    CHECK(err_at(0.02) / err_at(0.01) >= 8.0);
}

TEST_CASE("harmonic oscillator energy drift") {
    OdeRhs osc = [](const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
        dx(0) = x(1);
        dx(1) = -x(0);
    };
    Eigen::VectorXd x(2);
    x << 1.0, 0.0;
    double max_drift = 0.0;
    integrate_ode_observed(osc, x, 0.01, 10000, [&](long, const Eigen::VectorXd& y) {
        max_drift = std::max(max_drift, std::abs(y.squaredNorm() - 1.0));
    });
    CHECK(max_drift < 1e-6);
}

TEST_CASE("divergence error names the offending step") {
    OdeRhs blowup = [](const Eigen::VectorXd& x, Eigen::VectorXd& dx) { dx = x.array().square(); };
    Eigen::VectorXd x0(1);
    x0 << 2.0;
    try {
        integrate_ode(blowup, x0, 0.1, 1000, 1e3);
        FAIL("expected divergence");
    } catch (const DivergenceError& e) {
        CHECK(e.step > 0);
        CHECK(std::string(e.what()).find(std::to_string(e.step)) != std::string::npos);
    }
}

TEST_CASE("largest Lyapunov exponent signs") {
    NodeModel m;
    const Eigen::Matrix3d g = presets::gamma();
    CHECK(max_lyapunov(m, 0.0, g, 300.0) > 0.5);     // free Chen system is chaotic
    CHECK(max_lyapunov(m, -20.0, g, 300.0) < -0.5);  // deep in the stable region
}

TEST_CASE("msf sweep threshold rule") {
    NodeModel m;
    const Eigen::Matrix3d g = presets::gamma();

    MsfCurve curve = msf_sweep(m, g, {-15.0, -12.0, -9.0, -6.0}, 2, 500.0);
    CHECK(curve.threshold == -9.0);
    CHECK(curve.samples.size() == 4);
    for (std::size_t i = 0; i < curve.samples.size(); ++i) {
        if (curve.samples[i].first < curve.threshold) CHECK(curve.samples[i].second < 0.0);
        if (i > 0) CHECK(curve.samples[i].first > curve.samples[i - 1].first);
    }

    CHECK_THROWS_AS(msf_sweep(m, g, {-20.0, -15.0}, 1, 200.0), ThresholdNotFound);
    CHECK_THROWS_AS(msf_sweep(m, g, {}, 1), std::invalid_argument);
}
