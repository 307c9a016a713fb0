#pragma once

#include "clsk/modem.hpp"

namespace clsk {
namespace presets {

/// Eight-node ring-like network without control: symbol 0 uses Xi_1 (pattern
/// {{0,7},{1,6},{2,5},{3,4}}), symbol 1 uses Xi_2 ({{0,3},{1,2},{4,7},{5,6}});
/// transmitter {0,3,4,7}, receiver {1,2,5,6}, noisy channel links
/// (0,1),(2,3),(4,5),(6,7), default epsilon 7.
CommSystem example1();

/// Five-node star with a three-node pinning control network; symbols switch
/// the control coupling matrix (epsilon 3).
CommSystem example2(double alpha = 10.0);

/// Inner coupling matrix used throughout: single nonzero entry Gamma(1,0)=1
/// (first component of the neighbour drives the second state equation).
Eigen::Matrix3d gamma();

Eigen::MatrixXd xi1();
Eigen::MatrixXd xi2();
Eigen::MatrixXd delta1();
Eigen::MatrixXd delta2();

}  // namespace presets
}  // namespace clsk
