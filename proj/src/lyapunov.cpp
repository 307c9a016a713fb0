#include "clsk/lyapunov.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "clsk/integrate.hpp"

namespace clsk {

double max_lyapunov(const NodeModel& m, double eta, const Eigen::Matrix3d& Gamma,
                    double horizon, double dt, const LyapunovOptions& opts) {
    if (dt <= 0.0) throw std::invalid_argument("max_lyapunov: dt must be positive");
    const Eigen::Matrix3d M = eta * Gamma;

    // joint state y = (s, z); z is renormalized, so the bound only guards s
    OdeRhs rhs = [&](const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
        const Eigen::Vector3d s = y.head<3>();
        const Eigen::Vector3d z = y.tail<3>();
        dy.head<3>() = chen_flow(s, m);
        dy.tail<3>() = (chen_jacobian(s, m) + M) * z;
    };

    Eigen::VectorXd y(6);
    y << 1.0, 1.0, 1.0, 1.0, 0.0, 0.0;

    Rk4Workspace ws;
    ws.resize(6);

    const long nt = std::lround(opts.transient / dt);
    for (long k = 0; k < nt; ++k) {
        rk4_step(rhs, y, dt, ws);
        if (!y.head<3>().allFinite() || y.head<3>().cwiseAbs().maxCoeff() > opts.bound)
            throw DivergenceError(k + 1);
        y.tail<3>().normalize();
    }

    const long n = std::lround(horizon / dt);
    double lsum = 0.0;
    for (long k = 0; k < n; ++k) {
        rk4_step(rhs, y, dt, ws);
        if (!y.head<3>().allFinite() || y.head<3>().cwiseAbs().maxCoeff() > opts.bound)
            throw DivergenceError(k + 1);
        if ((k + 1) % opts.renorm_every == 0) {
            const double nz = y.tail<3>().norm();
            lsum += std::log(nz);
            y.tail<3>() /= nz;
        }
    }
    return lsum / (static_cast<double>(n) * dt);
}

MsfCurve msf_sweep(const NodeModel& m, const Eigen::Matrix3d& Gamma,
                   const std::vector<double>& eta_grid, int jobs,
                   double horizon, double dt, const LyapunovOptions& opts) {
    if (eta_grid.empty()) throw std::invalid_argument("msf_sweep: empty grid");
    for (std::size_t i = 1; i < eta_grid.size(); ++i)
        if (eta_grid[i] <= eta_grid[i - 1])
            throw std::invalid_argument("msf_sweep: grid must be strictly increasing");

    std::vector<double> mu(eta_grid.size());
    if (jobs <= 1 || eta_grid.size() == 1) {
        for (std::size_t i = 0; i < eta_grid.size(); ++i)
            mu[i] = max_lyapunov(m, eta_grid[i], Gamma, horizon, dt, opts);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= eta_grid.size()) return;
                mu[i] = max_lyapunov(m, eta_grid[i], Gamma, horizon, dt, opts);
            }
        };
        const int nw = std::min<int>(jobs, static_cast<int>(eta_grid.size()));
        std::vector<std::thread> pool;
        for (int w = 0; w < nw; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    MsfCurve curve;
    curve.samples.reserve(eta_grid.size());
    for (std::size_t i = 0; i < eta_grid.size(); ++i)
        curve.samples.emplace_back(eta_grid[i], mu[i]);

    // first grid point with mu >= 0; everything below must be stable
    std::size_t k = 0;
    while (k < eta_grid.size() && mu[k] < 0.0) ++k;
    if (k == 0 || k == eta_grid.size())
        throw ThresholdNotFound();
    curve.threshold = eta_grid[k];
    return curve;
}

}  // namespace clsk
