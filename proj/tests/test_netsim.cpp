#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "clsk/netsim.hpp"
#include "clsk/presets.hpp"

using namespace clsk;

namespace {

double mean_tail_error(const NetworkTrajectory& traj, int i, int j, std::size_t tail) {
    auto e = sync_error_series(traj, i, j);
    REQUIRE(e.size() >= tail);
    return std::accumulate(e.end() - static_cast<long>(tail), e.end(), 0.0) /
           static_cast<double>(tail);
}

}  // namespace

TEST_CASE("stack/unstack round trip") {
    NetworkState s = random_state(5, 3, 11);
    s.t = 2.5;
    NetworkState back = unstack_state(stack_state(s), 5, 3, s.t);
    CHECK((back.x - s.x).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.ctrl - s.ctrl).cwiseAbs().maxCoeff() == 0.0);
    CHECK(back.t == s.t);
}

TEST_CASE("full synchronization manifold is invariant") {
    // identical initial conditions inside the stable full-sync regime stay
    // identical to rounding error over 100 time units
    CouplingTopology topo{presets::xi1(), presets::gamma(), 25.0, 8};
    NetworkState s0 = random_state(8, 0, 3);
    for (int i = 1; i < 8; ++i) s0.x.row(i) = s0.x.row(0);

    auto traj = integrate_network(s0, topo, {}, std::nullopt, 0.005, 20000, 40);
    for (int i = 1; i < 8; ++i) {
        auto e = sync_error_series(traj, 0, i);
        for (double v : e) CHECK(v < 1e-9);
    }
}

TEST_CASE("clusters form at the operating coupling strength") {
    CouplingTopology topo{presets::xi1(), presets::gamma(), 7.0, 8};
    NetworkState s0 = random_state(8, 0, 2);
    auto traj = integrate_network(s0, topo, {}, std::nullopt, 0.005, 24000, 40);

    const std::size_t tail = 100;  // last 20 time units
    // intra-cluster pairs of the Xi_1 pattern
    for (auto [i, j] : std::vector<std::pair<int, int>>{{0, 7}, {1, 6}, {2, 5}, {3, 4}})
        CHECK(mean_tail_error(traj, i, j, tail) < 1e-3);
    // neighbouring clusters stay apart
    CHECK(mean_tail_error(traj, 0, 1, tail) > 0.1);
    CHECK(mean_tail_error(traj, 2, 3, tail) > 0.1);
}

TEST_CASE("pinning control induces the per-symbol cluster patterns") {
    auto sys = presets::example2(20.0);

    // symbol 1 decouples the first two control nodes: split pattern
    {
        NetworkState s0 = random_state(5, 3, 4);
        auto traj = integrate_network(s0, sys.topology(1), sys.model, sys.control(1), 0.005,
                                      24000, 40);
        const std::size_t tail = 100;
        CHECK(mean_tail_error(traj, 0, 1, tail) < 1e-3);
        CHECK(mean_tail_error(traj, 2, 3, tail) < 1e-3);
        CHECK(mean_tail_error(traj, 0, 2, tail) > 0.1);
        CHECK(mean_tail_error(traj, 0, 4, tail) > 0.1);
        // synchronization is induced: no node locks onto its control node
        CHECK(mean_tail_error(traj, 0, 5, tail) > 0.1);
        CHECK(mean_tail_error(traj, 2, 6, tail) > 0.1);
        CHECK(mean_tail_error(traj, 4, 7, tail) > 0.1);
    }

    // symbol 0 couples them: the first four nodes merge into one cluster
    {
        NetworkState s0 = random_state(5, 3, 5);
        auto traj = integrate_network(s0, sys.topology(0), sys.model, sys.control(0), 0.005,
                                      24000, 40);
        const std::size_t tail = 100;
        CHECK(mean_tail_error(traj, 0, 1, tail) < 1e-3);
        CHECK(mean_tail_error(traj, 0, 2, tail) < 1e-3);
        CHECK(mean_tail_error(traj, 0, 3, tail) < 1e-3);
        CHECK(mean_tail_error(traj, 0, 4, tail) > 0.1);
    }
}

TEST_CASE("pin vector size is checked") {
    auto sys = presets::example2();
    auto topo = sys.topology(0);
    auto ctrl = sys.control(0);
    ctrl->pin.pop_back();
    CHECK_THROWS_AS(make_network_rhs(topo, sys.model, ctrl), std::invalid_argument);
}

TEST_CASE("noise columns carry the inner coupling structure") {
    CouplingTopology topo{presets::xi1(), presets::gamma(), 7.0, 8};
    NoiseConfig noise;
    noise.sigma = 0.5;
    noise.links = {{0, 1}, {2, -1}};

    Eigen::MatrixXd g = noise_columns(noise, topo, 1);
    REQUIRE(g.rows() == 3 * 9);
    REQUIRE(g.cols() == 2);

    // Gamma*1 = (0,1,0): only second state components are driven
    CHECK(g(3 * 0 + 1, 0) == 0.5);
    CHECK(g(3 * 1 + 1, 0) == -0.5);
    CHECK(g(3 * 2 + 1, 1) == 0.5);  // one-sided pin link
    g(3 * 0 + 1, 0) = g(3 * 1 + 1, 0) = g(3 * 2 + 1, 1) = 0.0;
    CHECK(g.cwiseAbs().maxCoeff() == 0.0);  // everything else, control rows included, is zero

    noise.links = {{0, 9}};
    CHECK_THROWS_AS(noise_columns(noise, topo, 1), std::invalid_argument);
}

TEST_CASE("one Euler step from the origin places noise on the linked nodes only") {
    CouplingTopology topo{presets::xi1(), presets::gamma(), 7.0, 8};
    NoiseConfig noise;
    noise.sigma = 1.0;
    noise.links = {{0, 1}};
    noise.seed = 5;

    NetworkState s0;
    s0.x = Eigen::MatrixXd::Zero(8, 3);
    s0.ctrl = Eigen::MatrixXd(0, 3);
    auto traj =
        integrate_network_sde(s0, topo, {}, std::nullopt, noise, 0.01, 1, 1, SdeScheme::euler);
    REQUIRE(traj.x.size() == 2);

    const Eigen::MatrixXd& x1 = traj.x.back();
    CHECK(x1(0, 1) != 0.0);
    CHECK(x1(1, 1) == -x1(0, 1));
    CHECK(x1(0, 0) == 0.0);
    CHECK(x1(0, 2) == 0.0);
    for (int i = 2; i < 8; ++i) CHECK(x1.row(i).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("noisy integration is reproducible and sigma = 0 matches the ode") {
    CouplingTopology topo{presets::xi1(), presets::gamma(), 7.0, 8};
    NetworkState s0 = random_state(8, 0, 6);
    NoiseConfig noise;
    noise.sigma = 0.3;
    noise.links = {{0, 1}, {2, 3}, {4, 5}, {6, 7}};
    noise.seed = 21;

    auto a = integrate_network_sde(s0, topo, {}, std::nullopt, noise, 0.005, 2000, 40);
    auto b = integrate_network_sde(s0, topo, {}, std::nullopt, noise, 0.005, 2000, 40);
    CHECK((a.x.back() - b.x.back()).cwiseAbs().maxCoeff() == 0.0);

    noise.seed = 22;
    auto c = integrate_network_sde(s0, topo, {}, std::nullopt, noise, 0.005, 2000, 40);
    CHECK((a.x.back() - c.x.back()).cwiseAbs().maxCoeff() > 0.0);

    noise.sigma = 0.0;
    auto quiet = integrate_network_sde(s0, topo, {}, std::nullopt, noise, 0.005, 2000, 40);
    auto det = integrate_network(s0, topo, {}, std::nullopt, 0.005, 2000, 40);
    CHECK((quiet.x.back() - det.x.back()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(quiet.times == det.times);
}

TEST_CASE("spatiotemporal scan") {
    auto system_at = [](double eps) {
        return ScanSystem{CouplingTopology{presets::xi1(), presets::gamma(), eps, 8},
                          std::nullopt};
    };
    auto points = spatiotemporal_scan(system_at, {}, {0.0, 7.0, 25.0}, 60.0, 20.0, 0.005, 9, 2);
    REQUIRE(points.size() == 3);
    for (const auto& p : points) CHECK_FALSE(p.diverged);

    // eps = 0: independent chaotic nodes, every pair stays apart
    for (int i = 0; i < 8; ++i)
        for (int j = i + 1; j < 8; ++j) CHECK(points[0].mean_err(i, j) > 0.1);

    // eps = 7: cluster pattern of Xi_1
    CHECK(points[1].mean_err(0, 7) < 1e-3);
    CHECK(points[1].mean_err(3, 4) < 1e-3);
    CHECK(points[1].mean_err(0, 1) > 0.1);

    // eps = 25: full synchronization
    for (int i = 0; i < 8; ++i)
        for (int j = i + 1; j < 8; ++j) CHECK(points[2].mean_err(i, j) < 1e-3);

    // a numerically unstable point is flagged and the scan continues
    auto bad = spatiotemporal_scan(system_at, {}, {7.0, 7.0}, 20.0, 10.0, 0.5, 9, 1);
    CHECK(bad[0].diverged);
    CHECK(bad[1].diverged);
}
