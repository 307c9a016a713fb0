#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "clsk/chen.hpp"
#include "clsk/sde.hpp"
#include "clsk/topology.hpp"

namespace clsk {

/// A link carrying an independent scalar Wiener process. For an ordinary
/// network link set b >= 0; the increment enters node a with +sigma and node b
/// with -sigma through Gamma. For a pin link set b = -1: only the pinned node
/// a receives the increment (the control node is noise-free).
struct NoisyLink {
    int a = 0;
    int b = -1;
};

struct NoiseConfig {
    double sigma = 0.0;
    std::vector<NoisyLink> links;
    std::uint64_t seed = 0;
};

struct NetworkState {
    Eigen::MatrixXd x;     // N x 3 node states
    Eigen::MatrixXd ctrl;  // L x 3 control-node states (0 rows without control)
    double t = 0.0;
};

struct NetworkTrajectory {
    double dt_store = 0.0;
    std::vector<double> times;
    std::vector<Eigen::MatrixXd> x;     // per stored sample, N x 3
    std::vector<Eigen::MatrixXd> ctrl;  // per stored sample, L x 3
};

/// Stacked right-hand side of the (optionally pinned) network:
///   dx_i = f(x_i) + eps sum_j xi_ij Gamma x_j + alpha eps Gamma (xt_{pin(i)} - x_i)
///   dxt_k = f(xt_k) + sum_l A_kl Gamma xt_l
/// State layout: node i occupies entries [3i, 3i+3), control node k entries
/// [3(N+k), 3(N+k)+3).
OdeRhs make_network_rhs(const CouplingTopology& topo, const NodeModel& m,
                        const std::optional<ControlNetwork>& ctrl);

Eigen::VectorXd stack_state(const NetworkState& s);
NetworkState unstack_state(const Eigen::VectorXd& y, int N, int L, double t);

/// Random initial state, per-component uniform in [-5, 5].
NetworkState random_state(int N, int L, std::uint64_t seed);

NetworkTrajectory integrate_network(const NetworkState& s0, const CouplingTopology& topo,
                                    const NodeModel& m, const std::optional<ControlNetwork>& ctrl,
                                    double dt, long n, int store_stride = 1, double bound = 1e6);

/// Diffusion columns for the noisy links: one column per link, +sigma*Gamma*1
/// at node a, -sigma*Gamma*1 at node b (b >= 0).
Eigen::MatrixXd noise_columns(const NoiseConfig& noise, const CouplingTopology& topo, int L);

/// Strong order-1.5 SRA1 integration (Euler-Maruyama available as
/// cross-check). With sigma = 0 or no noisy links the deterministic RK4
/// driver is used, so the degenerate path matches integrate_network exactly.
NetworkTrajectory integrate_network_sde(const NetworkState& s0, const CouplingTopology& topo,
                                        const NodeModel& m,
                                        const std::optional<ControlNetwork>& ctrl,
                                        const NoiseConfig& noise, double dt, long n,
                                        int store_stride = 1,
                                        SdeScheme scheme = SdeScheme::sra1,
                                        double bound = 1e6);

/// ||x_i(t) - x_j(t)|| per stored sample; indices N..N+L-1 address control nodes.
std::vector<double> sync_error_series(const NetworkTrajectory& traj, int i, int j);

struct ScanSystem {
    CouplingTopology topo;
    std::optional<ControlNetwork> ctrl;
};

struct ScanPoint {
    double param = 0.0;
    bool diverged = false;
    Eigen::MatrixXd mean_err;  // (N+L) x (N+L) time-averaged pairwise error norms
};

/// For each grid value, builds the system, integrates past the transient and
/// time-averages all pairwise synchronization errors over the window. All
/// grid points start from the same seeded initial state. Divergent points are
/// flagged and the scan continues.
std::vector<ScanPoint> spatiotemporal_scan(const std::function<ScanSystem(double)>& system_at,
                                           const NodeModel& m, const std::vector<double>& grid,
                                           double transient, double window, double dt,
                                           std::uint64_t seed, int jobs = 1);

}  // namespace clsk
