#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace clsk {

/// Outer coupling matrix Xi (diffusive, symmetric), inner coupling matrix
/// Gamma and coupling strength epsilon. Node indices are 0-based throughout.
struct CouplingTopology {
    Eigen::MatrixXd Xi;
    Eigen::Matrix3d Gamma;
    double epsilon = 1.0;
    int N = 0;
};

/// Partition of {0..N-1} into clusters, outer index = cluster.
using ClusterPattern = std::vector<std::vector<int>>;

struct ValidationIssue {
    std::string what;
    int i = -1;
    int j = -1;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
};

/// Checks zero row sums, symmetry, nonnegative off-diagonals, the Laplacian
/// spectrum ordering 0 = l1 > l2 >= ... and connectivity (l2 < 0 strictly).
ValidationReport validate_topology(const CouplingTopology& t);

/// True iff Delta*Xi*Delta == Xi entrywise (tol 1e-12). Throws on size
/// mismatch or if Delta is not a permutation matrix.
bool is_symmetry(const Eigen::MatrixXd& Xi, const Eigen::MatrixXd& Delta, double tol = 1e-12);

/// Orbits of an involutory permutation: 2-cycles and fixed points, ordered by
/// smallest member. Throws if Delta^2 != I.
ClusterPattern pattern_from_symmetry(const Eigen::MatrixXd& Delta);

struct SpectralSplit {
    Eigen::MatrixXd Psi;              // orthogonal; transverse columns first
    Eigen::MatrixXd Omega;            // transverse block of Psi' Xi Psi
    Eigen::MatrixXd Phi;              // synchronous block
    Eigen::VectorXd transverse_eigs;  // descending
    Eigen::VectorXd sync_eigs;        // descending, sync_eigs[0] ~ 0
    double lambda_min = 0.0;          // min |transverse eigenvalue|
    double lambda2s_abs = 0.0;        // |second synchronous eigenvalue|
};

/// Block-diagonalizes Xi with the basis induced by the involutory symmetry
/// Delta: pair differences (e_i - e_j)/sqrt(2) span the transverse subspace,
/// pair sums and fixed-point basis vectors the synchronous one.
SpectralSplit block_diagonalize(const Eigen::MatrixXd& Xi, const Eigen::MatrixXd& Delta,
                                const ClusterPattern& pattern);

/// Strict eigenvalue condition |lambda_2^s| < lambda_min.
bool check_eigenvalue_condition(const SpectralSplit& split);

struct NoRangeError : std::runtime_error {
    NoRangeError() : std::runtime_error("eigenvalue condition violated: no admissible coupling range") {}
};

/// Admissible coupling interval [|eta_bar|/lambda_min, |eta_bar|/|lambda_2^s|].
std::pair<double, double> epsilon_range(double eta_bar, const SpectralSplit& split);

/// Control coupling weights omega_kl = sum_{i in G_k} sum_{j in G_l} xi_ij / N_k.
Eigen::MatrixXd control_weights(const Eigen::MatrixXd& Xi, const ClusterPattern& pattern);

/// Control-strength thresholds alpha_1 = |eta_bar|/eps - lambda_min and
/// alpha_2 = |eta_bar|/eps (formulaic values; empirical onsets come from
/// spatiotemporal sweeps).
std::pair<double, double> alpha_thresholds(double eta_bar, double epsilon, double lambda_min);

/// Auxiliary pinning-control network: L control nodes with coupling matrix A,
/// pin[i] = control node driving network node i, strength alpha.
struct ControlNetwork {
    Eigen::MatrixXd A;
    std::vector<int> pin;
    double alpha = 0.0;
};

struct RequirementReport {
    bool capacity_ok = false;       // (i)  M > 1
    bool patterns_ok = false;       // (ii) patterns pairwise distinct
    bool channel_ok = false;        // (iii) channel-link endpoints never share a cluster
    bool control_scope_ok = false;  // (iv) couplings differing across symbols lie on control links
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};

/// Design-requirement checks over the per-symbol coupling matrices. Channel
/// links are the links (in any symbol's Xi) joining a transmitter node to a
/// receiver node.
RequirementReport check_requirements(const std::vector<Eigen::MatrixXd>& xis,
                                     const std::vector<ClusterPattern>& patterns,
                                     const std::vector<int>& tx_nodes,
                                     const std::vector<int>& rx_nodes,
                                     const std::vector<std::pair<int, int>>& control_links);

/// Channel links implied by a node split: links of any Xi with one endpoint
/// on each side, as ordered (min,max) pairs.
std::vector<std::pair<int, int>> channel_links(const std::vector<Eigen::MatrixXd>& xis,
                                               const std::vector<int>& tx_nodes,
                                               const std::vector<int>& rx_nodes);

}  // namespace clsk
