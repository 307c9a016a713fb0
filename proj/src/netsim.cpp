#include "clsk/netsim.hpp"

#include <atomic>
#include <thread>

namespace clsk {

OdeRhs make_network_rhs(const CouplingTopology& topo, const NodeModel& m,
                        const std::optional<ControlNetwork>& ctrl) {
    const int N = topo.N;
    const int L = ctrl ? static_cast<int>(ctrl->A.rows()) : 0;
    if (ctrl && static_cast<int>(ctrl->pin.size()) != N)
        throw std::invalid_argument("make_network_rhs: pin map must cover every node");
    const Eigen::MatrixXd Xi = topo.Xi;
    const Eigen::Matrix3d Gamma = topo.Gamma;
    const double eps = topo.epsilon;
    const Eigen::MatrixXd A = ctrl ? ctrl->A : Eigen::MatrixXd();
    const std::vector<int> pin = ctrl ? ctrl->pin : std::vector<int>();
    const double alpha_eps = ctrl ? ctrl->alpha * eps : 0.0;

    return [=](const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
        if (y.size() != 3 * (N + L))
            throw std::invalid_argument("network_rhs: state size mismatch");
        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>> X(y.data(), N + L, 3);
        Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>> D(dy.data(), N + L, 3);
        for (int i = 0; i < N + L; ++i)
            D.row(i) = chen_flow(X.row(i).transpose(), m).transpose();
        // coupling: eps * Xi X Gamma^T over the network nodes
        D.topRows(N).noalias() += eps * (Xi * X.topRows(N)) * Gamma.transpose();
        if (L > 0) {
            for (int i = 0; i < N; ++i)
                D.row(i) += alpha_eps * (Gamma * (X.row(N + pin[i]) - X.row(i)).transpose()).transpose();
            D.bottomRows(L).noalias() += (A * X.bottomRows(L)) * Gamma.transpose();
        }
    };
}

Eigen::VectorXd stack_state(const NetworkState& s) {
    const int N = static_cast<int>(s.x.rows());
    const int L = static_cast<int>(s.ctrl.rows());
    Eigen::VectorXd y(3 * (N + L));
    for (int i = 0; i < N; ++i) y.segment<3>(3 * i) = s.x.row(i).transpose();
    for (int k = 0; k < L; ++k) y.segment<3>(3 * (N + k)) = s.ctrl.row(k).transpose();
    return y;
}

NetworkState unstack_state(const Eigen::VectorXd& y, int N, int L, double t) {
    NetworkState s;
    s.x.resize(N, 3);
    s.ctrl.resize(L, 3);
    for (int i = 0; i < N; ++i) s.x.row(i) = y.segment<3>(3 * i).transpose();
    for (int k = 0; k < L; ++k) s.ctrl.row(k) = y.segment<3>(3 * (N + k)).transpose();
    s.t = t;
    return s;
}

NetworkState random_state(int N, int L, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    NetworkState s;
    s.x.resize(N, 3);
    s.ctrl.resize(L, 3);
    for (int i = 0; i < N; ++i)
        for (int c = 0; c < 3; ++c) s.x(i, c) = u(rng);
    for (int k = 0; k < L; ++k)
        for (int c = 0; c < 3; ++c) s.ctrl(k, c) = u(rng);
    return s;
}

namespace {

NetworkTrajectory run_observed(const NetworkState& s0, const CouplingTopology& topo,
                               const NodeModel& m, const std::optional<ControlNetwork>& ctrl,
                               const NoiseConfig* noise, double dt, long n, int store_stride,
                               SdeScheme scheme, double bound) {
    if (dt <= 0.0 || n < 1 || store_stride < 1)
        throw std::invalid_argument("integrate_network: dt > 0, n >= 1, stride >= 1 required");
    const int N = topo.N;
    const int L = ctrl ? static_cast<int>(ctrl->A.rows()) : 0;
    OdeRhs rhs = make_network_rhs(topo, m, ctrl);
    Eigen::VectorXd y = stack_state(s0);

    NetworkTrajectory traj;
    traj.dt_store = dt * store_stride;
    auto observer = [&](long k, const Eigen::VectorXd& yk) {
        if (k % store_stride != 0) return;
        traj.times.push_back(s0.t + static_cast<double>(k) * dt);
        NetworkState s = unstack_state(yk, N, L, 0.0);
        traj.x.push_back(std::move(s.x));
        traj.ctrl.push_back(std::move(s.ctrl));
    };

    if (noise) {
        Eigen::MatrixXd G = noise_columns(*noise, topo, L);
        integrate_sde_observed(rhs, y, dt, n, G, noise->seed, scheme, observer, bound);
    } else {
        integrate_ode_observed(rhs, y, dt, n, observer, bound);
    }
    return traj;
}

}  // namespace

NetworkTrajectory integrate_network(const NetworkState& s0, const CouplingTopology& topo,
                                    const NodeModel& m, const std::optional<ControlNetwork>& ctrl,
                                    double dt, long n, int store_stride, double bound) {
    return run_observed(s0, topo, m, ctrl, nullptr, dt, n, store_stride, SdeScheme::sra1, bound);
}

Eigen::MatrixXd noise_columns(const NoiseConfig& noise, const CouplingTopology& topo, int L) {
    const int N = topo.N;
    const Eigen::Vector3d gsum = topo.Gamma * Eigen::Vector3d::Ones();
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(3 * (N + L), static_cast<Eigen::Index>(noise.links.size()));
    for (std::size_t l = 0; l < noise.links.size(); ++l) {
        const auto& link = noise.links[l];
        if (link.a < 0 || link.a >= N || link.b >= N)
            throw std::invalid_argument("noise_columns: noisy link endpoint out of range");
        G.col(static_cast<Eigen::Index>(l)).segment<3>(3 * link.a) = noise.sigma * gsum;
        if (link.b >= 0)
            G.col(static_cast<Eigen::Index>(l)).segment<3>(3 * link.b) = -noise.sigma * gsum;
    }
    return G;
}

NetworkTrajectory integrate_network_sde(const NetworkState& s0, const CouplingTopology& topo,
                                        const NodeModel& m,
                                        const std::optional<ControlNetwork>& ctrl,
                                        const NoiseConfig& noise, double dt, long n,
                                        int store_stride, SdeScheme scheme, double bound) {
    if (noise.sigma < 0.0)
        throw std::invalid_argument("integrate_network_sde: sigma must be nonnegative");
    if (noise.sigma == 0.0 || noise.links.empty())
        return run_observed(s0, topo, m, ctrl, nullptr, dt, n, store_stride, scheme, bound);
    return run_observed(s0, topo, m, ctrl, &noise, dt, n, store_stride, scheme, bound);
}

std::vector<double> sync_error_series(const NetworkTrajectory& traj, int i, int j) {
    if (i == j) throw std::invalid_argument("sync_error_series: i and j must differ");
    auto row = [&](const std::size_t k, int idx) -> Eigen::RowVector3d {
        const int N = static_cast<int>(traj.x[k].rows());
        return idx < N ? Eigen::RowVector3d(traj.x[k].row(idx))
                       : Eigen::RowVector3d(traj.ctrl[k].row(idx - N));
    };
    std::vector<double> out(traj.x.size());
    for (std::size_t k = 0; k < traj.x.size(); ++k)
        out[k] = (row(k, i) - row(k, j)).norm();
    return out;
}

std::vector<ScanPoint> spatiotemporal_scan(const std::function<ScanSystem(double)>& system_at,
                                           const NodeModel& m, const std::vector<double>& grid,
                                           double transient, double window, double dt,
                                           std::uint64_t seed, int jobs) {
    if (grid.empty()) throw std::invalid_argument("spatiotemporal_scan: empty grid");
    std::vector<ScanPoint> out(grid.size());

    auto run_point = [&](std::size_t gi) {
        ScanPoint& pt = out[gi];
        pt.param = grid[gi];
        ScanSystem sys = system_at(grid[gi]);
        const int N = sys.topo.N;
        const int L = sys.ctrl ? static_cast<int>(sys.ctrl->A.rows()) : 0;
        pt.mean_err = Eigen::MatrixXd::Zero(N + L, N + L);
        try {
            NetworkState s = random_state(N, L, seed);
            OdeRhs rhs = make_network_rhs(sys.topo, m, sys.ctrl);
            Eigen::VectorXd y = stack_state(s);
            integrate_ode_observed(rhs, y, dt, std::lround(transient / dt), nullptr);
            const long nw = std::lround(window / dt);
            long counted = 0;
            auto observer = [&](long k, const Eigen::VectorXd& yk) {
                if (k == 0) return;
                Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>> X(
                    yk.data(), N + L, 3);
                for (int i = 0; i < N + L; ++i)
                    for (int j = i + 1; j < N + L; ++j)
                        pt.mean_err(i, j) += (X.row(i) - X.row(j)).norm();
                ++counted;
            };
            integrate_ode_observed(rhs, y, dt, nw, observer);
            pt.mean_err /= static_cast<double>(counted);
            pt.mean_err = (pt.mean_err + pt.mean_err.transpose()).eval();
        } catch (const DivergenceError&) {
            pt.diverged = true;
        }
    };

    if (jobs <= 1 || grid.size() == 1) {
        for (std::size_t gi = 0; gi < grid.size(); ++gi) run_point(gi);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            for (;;) {
                const std::size_t gi = next.fetch_add(1);
                if (gi >= grid.size()) return;
                run_point(gi);
            }
        };
        const int nw = std::min<int>(jobs, static_cast<int>(grid.size()));
        std::vector<std::thread> pool;
        for (int w = 0; w < nw; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return out;
}

}  // namespace clsk
