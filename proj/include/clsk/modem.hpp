#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "clsk/netsim.hpp"
#include "clsk/topology.hpp"

namespace clsk {

/// Per-symbol transmitter configuration: the outer coupling matrix and, when
/// a control network is present, the control coupling matrix for the symbol.
struct SymbolConfig {
    Eigen::MatrixXd Xi;
    std::optional<Eigen::MatrixXd> A;
};

/// A complete CLSK communication system: network, symbol alphabet and the
/// transmitter/receiver split. Node indices are 0-based.
struct CommSystem {
    std::string name;
    int N = 0;
    NodeModel model;
    Eigen::Matrix3d Gamma = Eigen::Matrix3d::Zero();
    double epsilon = 1.0;
    std::vector<SymbolConfig> symbols;
    std::vector<ClusterPattern> patterns;  // one per symbol
    std::vector<int> tx_nodes;
    std::vector<int> rx_nodes;
    std::vector<std::pair<int, int>> control_links;
    std::vector<NoisyLink> noisy_links;
    std::vector<int> pin;  // empty without a control network
    double alpha = 0.0;

    bool has_control() const { return !pin.empty(); }
    int control_count() const {
        return has_control() ? static_cast<int>(symbols.front().A->rows()) : 0;
    }
    CouplingTopology topology(int symbol) const;
    std::optional<ControlNetwork> control(int symbol) const;
    RequirementReport requirements() const;
};

struct RequirementError : std::runtime_error {
    explicit RequirementError(const std::string& msg)
        : std::runtime_error("design requirements violated: " + msg) {}
};

struct TransmitConfig {
    double dt = 0.005;
    int sf = 200;           // stored samples per symbol
    int store_stride = 40;  // integration steps per stored sample; T_b = sf*stride*dt
    double settle = 50.0;   // noise-free settling time on the first symbol's topology
    std::uint64_t seed = 1;
    SdeScheme scheme = SdeScheme::sra1;
    double symbol_time() const { return sf * store_stride * dt; }
};

struct ScheduleSegment {
    double t0 = 0.0;
    double t1 = 0.0;
    int symbol = 0;
};

/// Piecewise-constant control schedule: the n-th symbol occupies
/// [n T_b, (n+1) T_b). Throws when a bit has no mapped symbol.
std::vector<ScheduleSegment> schedule_controls(const std::vector<int>& bits, int num_symbols,
                                               double T_b);

/// Receiver-observable result of one transmission: stored receiver-node
/// states and channel-link error norms, sf samples per symbol.
struct Transmission {
    std::vector<int> rx_nodes;
    std::vector<std::pair<int, int>> channel_links;
    double dt_store = 0.0;
    int sf = 0;
    std::vector<double> times;
    std::vector<Eigen::MatrixXd> rx_states;      // per sample: N_R x 3
    std::vector<Eigen::VectorXd> channel_errors;  // per sample: one norm per channel link
};

/// Integrates the scheduled transmission (SDE when sigma > 0), state carried
/// continuously across symbol boundaries. Throws on requirement failure.
Transmission transmit(const std::vector<int>& bits, const CommSystem& sys, double sigma,
                      const TransmitConfig& cfg);

/// Trapezoidal energy of the squared error norm between two equally-sampled
/// 3-d traces.
double error_energy(const std::vector<Eigen::Vector3d>& xi, const std::vector<Eigen::Vector3d>& xj,
                    double dt);

/// E_ij[n] from a transmission: samples n*sf .. (n+1)*sf-1 of receiver traces
/// i and j (indices into rx_nodes).
double error_energy(const Transmission& tx, int i, int j, int n);

/// Full receiver energy matrix of symbol window n.
Eigen::MatrixXd energy_matrix(const Transmission& tx, int n);

/// gamma_n: mean over all N_R^2 entries, zero diagonal included.
double threshold(const Eigen::MatrixXd& E);

/// alpha_ij = 1 iff E_ij <= gamma.
Eigen::MatrixXd sync_matrix(const Eigen::MatrixXd& E, double gamma);

/// B_m over the receiver nodes: 1 iff i and j share a cluster of the pattern.
/// Throws when a receiver node is missing from the pattern.
Eigen::MatrixXd reference_matrix(const ClusterPattern& pattern, const std::vector<int>& rx_nodes);

/// argmax_m sum(A .* B_m); score ties break toward the reference with fewer
/// ones (needed when one pattern refines another), then the lowest index.
std::pair<int, std::vector<double>> detect(const Eigen::MatrixXd& A,
                                           const std::vector<Eigen::MatrixXd>& refs);

/// Detects every symbol window of a transmission.
std::vector<int> detect_bits(const Transmission& tx, const CommSystem& sys);

struct TrialResult {
    long bits = 0;    // bits counted (first symbol excluded when requested)
    long errors = 0;
    std::vector<int> detected;
};

/// Streaming transmit-and-detect: accumulates per-symbol receiver energies
/// on the fly without storing traces; used by the BER harness.
TrialResult run_trial(const std::vector<int>& bits, const CommSystem& sys, double sigma,
                      const TransmitConfig& cfg, bool exclude_first = true);

}  // namespace clsk
