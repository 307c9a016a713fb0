#include "clsk/topology.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace clsk {

namespace {

bool is_permutation_matrix(const Eigen::MatrixXd& D) {
    if (D.rows() != D.cols()) return false;
    const int n = static_cast<int>(D.rows());
    for (int i = 0; i < n; ++i) {
        int row_ones = 0, col_ones = 0;
        for (int j = 0; j < n; ++j) {
            const double r = D(i, j), c = D(j, i);
            if (r != 0.0 && r != 1.0) return false;
            if (r == 1.0) ++row_ones;
            if (c == 1.0) ++col_ones;
        }
        if (row_ones != 1 || col_ones != 1) return false;
    }
    return true;
}

ClusterPattern normalized(const ClusterPattern& p) {
    ClusterPattern q = p;
    for (auto& c : q) std::sort(c.begin(), c.end());
    std::sort(q.begin(), q.end());
    return q;
}

}  // namespace

ValidationReport validate_topology(const CouplingTopology& t) {
    ValidationReport rep;
    const auto& Xi = t.Xi;
    if (Xi.rows() != Xi.cols() || Xi.rows() != t.N) {
        rep.issues.push_back({"Xi dimensions inconsistent with N", -1, -1});
        return rep;
    }
    const double tol = 1e-9;
    for (int i = 0; i < t.N; ++i) {
        if (std::abs(Xi.row(i).sum()) > tol)
            rep.issues.push_back({"nonzero row sum", i, -1});
        for (int j = 0; j < t.N; ++j) {
            if (std::abs(Xi(i, j) - Xi(j, i)) > tol)
                rep.issues.push_back({"not symmetric", i, j});
            if (i != j && Xi(i, j) < -tol)
                rep.issues.push_back({"negative off-diagonal entry", i, j});
        }
    }
    if (t.epsilon <= 0.0)
        rep.issues.push_back({"epsilon not positive", -1, -1});
    if (rep.ok()) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Xi);
        Eigen::VectorXd ev = es.eigenvalues();  // ascending
        if (std::abs(ev(t.N - 1)) > tol)
            rep.issues.push_back({"largest eigenvalue not zero", -1, -1});
        if (t.N > 1 && ev(t.N - 2) >= -tol)
            rep.issues.push_back({"second eigenvalue not negative (network disconnected)", -1, -1});
    }
    return rep;
}

bool is_symmetry(const Eigen::MatrixXd& Xi, const Eigen::MatrixXd& Delta, double tol) {
    if (Xi.rows() != Xi.cols() || Delta.rows() != Delta.cols() || Xi.rows() != Delta.rows())
        throw std::invalid_argument("is_symmetry: dimension mismatch");
    if (!is_permutation_matrix(Delta))
        throw std::invalid_argument("is_symmetry: Delta is not a permutation matrix");
    return ((Delta * Xi * Delta) - Xi).cwiseAbs().maxCoeff() <= tol;
}

ClusterPattern pattern_from_symmetry(const Eigen::MatrixXd& Delta) {
    if (!is_permutation_matrix(Delta))
        throw std::invalid_argument("pattern_from_symmetry: not a permutation matrix");
    const int n = static_cast<int>(Delta.rows());
    if (((Delta * Delta) - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() > 0.0)
        throw std::invalid_argument("pattern_from_symmetry: permutation is not involutory");
    std::vector<int> image(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (Delta(i, j) == 1.0) image[i] = j;
    ClusterPattern pattern;
    std::vector<bool> seen(n, false);
    for (int i = 0; i < n; ++i) {
        if (seen[i]) continue;
        seen[i] = true;
        std::vector<int> orbit{i};
        if (image[i] != i) {
            seen[image[i]] = true;
            orbit.push_back(image[i]);
        }
        pattern.push_back(std::move(orbit));
    }
    return pattern;
}

SpectralSplit block_diagonalize(const Eigen::MatrixXd& Xi, const Eigen::MatrixXd& Delta,
                                const ClusterPattern& pattern) {
    if (!is_symmetry(Xi, Delta))
        throw std::invalid_argument("block_diagonalize: Delta is not a symmetry of Xi");
    if (normalized(pattern) != normalized(pattern_from_symmetry(Delta)))
        throw std::invalid_argument("block_diagonalize: pattern inconsistent with Delta");

    const int n = static_cast<int>(Xi.rows());
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    std::vector<Eigen::VectorXd> trans, sync;
    for (const auto& cluster : pattern) {
        if (cluster.size() == 2) {
            Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
            v(cluster[0]) = inv_sqrt2;
            v(cluster[1]) = -inv_sqrt2;
            trans.push_back(v);
            Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
            w(cluster[0]) = inv_sqrt2;
            w(cluster[1]) = inv_sqrt2;
            sync.push_back(w);
        } else {
            Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
            w(cluster[0]) = 1.0;
            sync.push_back(w);
        }
    }
    const int T = static_cast<int>(trans.size());
    const int S = static_cast<int>(sync.size());
    if (T == 0)
        throw std::invalid_argument("block_diagonalize: symmetry has no transverse directions");

    SpectralSplit split;
    split.Psi.resize(n, n);
    for (int k = 0; k < T; ++k) split.Psi.col(k) = trans[k];
    for (int k = 0; k < S; ++k) split.Psi.col(T + k) = sync[k];

    Eigen::MatrixXd Theta = split.Psi.transpose() * Xi * split.Psi;
    if (Theta.topRightCorner(T, S).cwiseAbs().maxCoeff() > 1e-9)
        throw std::runtime_error("block_diagonalize: decomposition failed to block-diagonalize Xi");

    split.Omega = Theta.topLeftCorner(T, T);
    split.Phi = Theta.bottomRightCorner(S, S);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eo(split.Omega);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ep(split.Phi);
    split.transverse_eigs = eo.eigenvalues().reverse();
    split.sync_eigs = ep.eigenvalues().reverse();
    split.lambda_min = split.transverse_eigs.cwiseAbs().minCoeff();
    split.lambda2s_abs = S > 1 ? std::abs(split.sync_eigs(1)) : 0.0;
    return split;
}

bool check_eigenvalue_condition(const SpectralSplit& split) {
    return split.lambda2s_abs < split.lambda_min;
}

std::pair<double, double> epsilon_range(double eta_bar, const SpectralSplit& split) {
    if (!check_eigenvalue_condition(split))
        throw NoRangeError();
    const double mag = std::abs(eta_bar);
    return {mag / split.lambda_min, mag / split.lambda2s_abs};
}

Eigen::MatrixXd control_weights(const Eigen::MatrixXd& Xi, const ClusterPattern& pattern) {
    const int L = static_cast<int>(pattern.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(L, L);
    for (int k = 0; k < L; ++k)
        for (int l = 0; l < L; ++l) {
            double s = 0.0;
            for (int i : pattern[k])
                for (int j : pattern[l]) s += Xi(i, j);
            A(k, l) = s / static_cast<double>(pattern[k].size());
        }
    return A;
}

std::pair<double, double> alpha_thresholds(double eta_bar, double epsilon, double lambda_min) {
    if (epsilon <= 0.0)
        throw std::invalid_argument("alpha_thresholds: epsilon must be positive");
    const double a2 = std::abs(eta_bar) / epsilon;
    return {a2 - lambda_min, a2};
}

std::vector<std::pair<int, int>> channel_links(const std::vector<Eigen::MatrixXd>& xis,
                                               const std::vector<int>& tx_nodes,
                                               const std::vector<int>& rx_nodes) {
    std::set<int> tx(tx_nodes.begin(), tx_nodes.end());
    std::set<int> rx(rx_nodes.begin(), rx_nodes.end());
    std::set<std::pair<int, int>> links;
    for (const auto& Xi : xis) {
        const int n = static_cast<int>(Xi.rows());
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (Xi(i, j) != 0.0 &&
                    ((tx.count(i) && rx.count(j)) || (rx.count(i) && tx.count(j))))
                    links.insert({i, j});
    }
    return {links.begin(), links.end()};
}

RequirementReport check_requirements(const std::vector<Eigen::MatrixXd>& xis,
                                     const std::vector<ClusterPattern>& patterns,
                                     const std::vector<int>& tx_nodes,
                                     const std::vector<int>& rx_nodes,
                                     const std::vector<std::pair<int, int>>& control_links) {
    if (xis.empty() || xis.size() != patterns.size())
        throw std::invalid_argument("check_requirements: one pattern per symbol topology required");
    const int n = static_cast<int>(xis[0].rows());
    std::set<int> all;
    for (int v : tx_nodes) all.insert(v);
    for (int v : rx_nodes) all.insert(v);
    if (static_cast<int>(all.size()) != n ||
        static_cast<int>(tx_nodes.size() + rx_nodes.size()) != n)
        throw std::invalid_argument("check_requirements: node sets must partition the network");

    RequirementReport rep;

    const std::size_t M = patterns.size();
    rep.capacity_ok = M > 1;
    if (!rep.capacity_ok) rep.failures.push_back("capacity: fewer than two symbols (M <= 1)");

    rep.patterns_ok = true;
    for (std::size_t a = 0; a < M && rep.patterns_ok; ++a)
        for (std::size_t b = a + 1; b < M; ++b)
            if (normalized(patterns[a]) == normalized(patterns[b])) {
                rep.patterns_ok = false;
                rep.failures.push_back("patterns: symbols map to identical cluster patterns");
                break;
            }

    // (iii): channel-link endpoints must lie in different clusters for every symbol
    rep.channel_ok = true;
    const auto chans = channel_links(xis, tx_nodes, rx_nodes);
    for (const auto& [i, j] : chans) {
        for (const auto& pattern : patterns) {
            for (const auto& cluster : pattern) {
                const bool has_i = std::find(cluster.begin(), cluster.end(), i) != cluster.end();
                const bool has_j = std::find(cluster.begin(), cluster.end(), j) != cluster.end();
                if (has_i && has_j) {
                    rep.channel_ok = false;
                    rep.failures.push_back("channel: nodes " + std::to_string(i) + "," +
                                           std::to_string(j) + " share a cluster");
                }
            }
        }
    }

    // (iv): only control-link couplings (and the diagonal entries compensating
    // them) may differ across symbols
    rep.control_scope_ok = true;
    std::set<std::pair<int, int>> ctrl;
    std::set<int> ctrl_nodes;
    for (auto [i, j] : control_links) {
        ctrl.insert({std::min(i, j), std::max(i, j)});
        ctrl_nodes.insert(i);
        ctrl_nodes.insert(j);
    }
    for (std::size_t s = 1; s < xis.size(); ++s) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (xis[s](i, j) == xis[0](i, j)) continue;
                const bool allowed = (i == j) ? ctrl_nodes.count(i) > 0
                                              : ctrl.count({std::min(i, j), std::max(i, j)}) > 0;
                if (!allowed) {
                    rep.control_scope_ok = false;
                    rep.failures.push_back("control scope: coupling (" + std::to_string(i) + "," +
                                           std::to_string(j) + ") varies outside control links");
                }
            }
    }
    return rep;
}

}  // namespace clsk
