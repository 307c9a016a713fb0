#include "clsk/presets.hpp"

namespace clsk {
namespace presets {

Eigen::Matrix3d gamma() {
    Eigen::Matrix3d g = Eigen::Matrix3d::Zero();
    g(1, 0) = 1.0;
    return g;
}

Eigen::MatrixXd xi1() {
    Eigen::MatrixXd m(8, 8);
    m << -2, 1, 0, 0, 0, 0, 0, 1,
          1, -3, 1, 0, 0, 0, 1, 0,
          0, 1, -3, 1, 0, 1, 0, 0,
          0, 0, 1, -2, 1, 0, 0, 0,
          0, 0, 0, 1, -2, 1, 0, 0,
          0, 0, 1, 0, 1, -3, 1, 0,
          0, 1, 0, 0, 0, 1, -3, 1,
          1, 0, 0, 0, 0, 0, 1, -2;
    return m;
}

Eigen::MatrixXd xi2() {
    Eigen::MatrixXd m(8, 8);
    m << -2, 1, 0, 1, 0, 0, 0, 0,
          1, -3, 1, 0, 0, 0, 1, 0,
          0, 1, -3, 1, 0, 1, 0, 0,
          1, 0, 1, -2, 0, 0, 0, 0,
          0, 0, 0, 0, -2, 1, 0, 1,
          0, 0, 1, 0, 1, -3, 1, 0,
          0, 1, 0, 0, 0, 1, -3, 1,
          0, 0, 0, 0, 1, 0, 1, -2;
    return m;
}

namespace {
Eigen::MatrixXd pair_permutation(const std::vector<std::pair<int, int>>& pairs, int n) {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (auto [i, j] : pairs) {
        d(i, j) = 1.0;
        d(j, i) = 1.0;
    }
    return d;
}
}  // namespace

Eigen::MatrixXd delta1() { return pair_permutation({{0, 7}, {1, 6}, {2, 5}, {3, 4}}, 8); }
Eigen::MatrixXd delta2() { return pair_permutation({{0, 3}, {1, 2}, {4, 7}, {5, 6}}, 8); }

CommSystem example1() {
    CommSystem sys;
    sys.name = "example1";
    sys.N = 8;
    sys.Gamma = gamma();
    sys.epsilon = 7.0;
    sys.symbols.push_back({xi1(), std::nullopt});
    sys.symbols.push_back({xi2(), std::nullopt});
    sys.patterns = {{{0, 7}, {1, 6}, {2, 5}, {3, 4}}, {{0, 3}, {1, 2}, {4, 7}, {5, 6}}};
    sys.tx_nodes = {0, 3, 4, 7};
    sys.rx_nodes = {1, 2, 5, 6};
    sys.control_links = {{0, 3}, {3, 4}, {4, 7}, {0, 7}};
    sys.noisy_links = {{0, 1}, {2, 3}, {4, 5}, {6, 7}};
    return sys;
}

CommSystem example2(double alpha) {
    CommSystem sys;
    sys.name = "example2";
    sys.N = 5;
    sys.Gamma = gamma();
    sys.epsilon = 3.0;

    Eigen::MatrixXd xi(5, 5);
    xi << -1, 0, 0, 0, 1,
           0, -1, 0, 0, 1,
           0, 0, -1, 0, 1,
           0, 0, 0, -1, 1,
           1, 1, 1, 1, -4;
    Eigen::MatrixXd a1(3, 3);
    a1 << -1, 0, 1,
           0, -1, 1,
           2, 2, -4;
    Eigen::MatrixXd a2(3, 3);
    a2 << -20, 20, 0,
           20, -20, 0,
            0, 0, 0;

    // symbol 0 couples the first two control nodes (merged clusters), symbol 1
    // decouples them (split clusters)
    sys.symbols.push_back({xi, a2});
    sys.symbols.push_back({xi, a1});
    sys.patterns = {{{0, 1, 2, 3}, {4}}, {{0, 1}, {2, 3}, {4}}};
    sys.tx_nodes = {};  // the control nodes form the transmitter side
    sys.rx_nodes = {0, 1, 2, 3, 4};
    sys.control_links = {};
    sys.noisy_links = {{0, -1}, {1, -1}, {2, -1}, {3, -1}, {4, -1}};  // pin links, one-sided
    sys.pin = {0, 0, 1, 1, 2};
    sys.alpha = alpha;
    return sys;
}

}  // namespace presets
}  // namespace clsk
