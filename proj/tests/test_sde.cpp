#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "clsk/sde.hpp"

using namespace clsk;

namespace {

// exact composition of (dW, I10) over consecutive substeps of width delta:
// each substep's increment is integrated over the time remaining after it
NoiseDraw aggregate(const std::vector<NoiseDraw>& fine, std::size_t lo, std::size_t count,
                    double delta) {
    NoiseDraw out;
    for (std::size_t i = 0; i < count; ++i) {
        out.I10 += fine[lo + i].I10 +
                   static_cast<double>(count - 1 - i) * delta * fine[lo + i].dW;
        out.dW += fine[lo + i].dW;
    }
    return out;
}

}  // namespace

TEST_CASE("increment moments") {
    std::mt19937_64 rng(42);
    const double h = 0.01;
    std::vector<NoiseDraw> d(1);
    double m_w = 0.0, m_ww = 0.0, m_ii = 0.0, m_wi = 0.0;
    const int n = 200000;
    for (int k = 0; k < n; ++k) {
        draw_increments(rng, h, d);
        m_w += d[0].dW;
        m_ww += d[0].dW * d[0].dW;
        m_ii += d[0].I10 * d[0].I10;
        m_wi += d[0].dW * d[0].I10;
    }
    CHECK(m_w / n == doctest::Approx(0.0).epsilon(1).scale(std::sqrt(h / n) * 5));
    CHECK(m_ww / n == doctest::Approx(h).epsilon(0.02));            // E[dW^2] = h
    CHECK(m_ii / n == doctest::Approx(h * h * h / 3.0).epsilon(0.02));  // E[I10^2] = h^3/3
    CHECK(m_wi / n == doctest::Approx(h * h / 2.0).epsilon(0.02));  // E[dW I10] = h^2/2
}

TEST_CASE("Ornstein-Uhlenbeck mean at t = 1") {
    OdeRhs drift = [](const Eigen::VectorXd& x, Eigen::VectorXd& dx) { dx = -x; };
    Eigen::MatrixXd G(1, 1);
    G << 0.5;
    const double h = 0.01;
    const int paths = 10000;
    double mean = 0.0;
    for (int p = 0; p < paths; ++p) {
        Eigen::VectorXd x(1);
        x << 1.0;
        integrate_sde_observed(drift, x, h, 100, G, 1000 + static_cast<std::uint64_t>(p),
                               SdeScheme::sra1, nullptr);
        mean += x(0);
    }
    mean /= paths;
    // stationary std ~ 0.35, so the standard error of the mean is ~0.0035
    CHECK(mean == doctest::Approx(std::exp(-1.0)).epsilon(0.05));
}

TEST_CASE("strong convergence order on a linear additive-noise SDE") {
    // dx = -x dt + 0.5 dW over [0, 1], shared Wiener paths at delta = 2.5e-4
    OdeRhs drift = [](const Eigen::VectorXd& x, Eigen::VectorXd& dx) { dx = -x; };
    Eigen::MatrixXd G(1, 1);
    G << 0.5;
    const double delta = 2.5e-4;
    const long n_fine = 4000;
    const std::vector<double> dts = {4e-3, 2e-3, 1e-3};
    const int paths = 200;

    std::vector<double> errs(dts.size(), 0.0);
    Rk4Workspace ws;
    ws.resize(1);
    std::vector<NoiseDraw> one(1);
    for (int p = 0; p < paths; ++p) {
        std::mt19937_64 rng(500 + static_cast<std::uint64_t>(p));
        std::vector<NoiseDraw> fine(static_cast<std::size_t>(n_fine));
        for (auto& d : fine) {
            draw_increments(rng, delta, one);
            d = one[0];
        }
        Eigen::VectorXd xref(1);
        xref << 1.0;
        for (const auto& d : fine) sra1_step(drift, xref, delta, G, {d}, ws);

        for (std::size_t di = 0; di < dts.size(); ++di) {
            const double h = dts[di];
            const std::size_t sub = static_cast<std::size_t>(std::lround(h / delta));
            Eigen::VectorXd x(1);
            x << 1.0;
            for (std::size_t k = 0; k < static_cast<std::size_t>(n_fine) / sub; ++k)
                sra1_step(drift, x, h, G, {aggregate(fine, k * sub, sub, delta)}, ws);
            errs[di] += std::abs(x(0) - xref(0));
        }
    }
    for (auto& e : errs) e /= paths;

    // least-squares slope of log(err) vs log(dt)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < dts.size(); ++i) {
        const double lx = std::log(dts[i]), ly = std::log(errs[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = static_cast<double>(dts.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    INFO("errors: ", errs[0], " ", errs[1], " ", errs[2], " slope: ", slope);
    CHECK(slope >= 1.4);
}

TEST_CASE("Euler-Maruyama agrees with SRA1 in distribution on the linear problem") {
    OdeRhs drift = [](const Eigen::VectorXd& x, Eigen::VectorXd& dx) { dx = -x; };
    Eigen::MatrixXd G(1, 1);
    G << 0.5;
    double m_sra = 0.0, m_em = 0.0;
    for (int p = 0; p < 4000; ++p) {
        Eigen::VectorXd a(1), b(1);
        a << 1.0;
        b << 1.0;
        integrate_sde_observed(drift, a, 0.005, 200, G, 77 + static_cast<std::uint64_t>(p),
                               SdeScheme::sra1, nullptr);
        integrate_sde_observed(drift, b, 0.005, 200, G, 77 + static_cast<std::uint64_t>(p),
                               SdeScheme::euler, nullptr);
        m_sra += a(0);
        m_em += b(0);
    }
    CHECK(m_sra / 4000 == doctest::Approx(m_em / 4000).epsilon(0.05));
}

TEST_CASE("same seed reproduces the path bitwise") {
    OdeRhs drift = [](const Eigen::VectorXd& x, Eigen::VectorXd& dx) { dx = -x; };
    Eigen::MatrixXd G(1, 2);
    G << 0.3, 0.2;
    Eigen::VectorXd a(1), b(1);
    a << 1.0;
    b << 1.0;
    integrate_sde_observed(drift, a, 0.01, 500, G, 9, SdeScheme::sra1, nullptr);
    integrate_sde_observed(drift, b, 0.01, 500, G, 9, SdeScheme::sra1, nullptr);
    CHECK(a(0) == b(0));
}

TEST_CASE("sde divergence raises") {
    OdeRhs blowup = [](const Eigen::VectorXd& x, Eigen::VectorXd& dx) { dx = x.array().square(); };
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(1, 1);
    Eigen::VectorXd x(1);
    x << 5.0;
    CHECK_THROWS_AS(
        integrate_sde_observed(blowup, x, 0.1, 1000, G, 1, SdeScheme::sra1, nullptr, 1e3),
        DivergenceError);
}
