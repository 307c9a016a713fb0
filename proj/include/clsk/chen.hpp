#pragma once

#include <Eigen/Dense>

namespace clsk {

/// Parameters of one Chen oscillator. Defaults are the values used
/// throughout the bundled example networks (a=35, b=8/3, c=28).
struct NodeModel {
    double a = 35.0;
    double b = 8.0 / 3.0;
    double c = 28.0;
    static constexpr int dim = 3;
};

/// Vector field of the Chen system:
///   dx1 = a (x2 - x1)
///   dx2 = x1 (c - a - x3) + c x2
///   dx3 = x1 x2 - b x3
/// Throws std::domain_error for non-finite input.
Eigen::Vector3d chen_flow(const Eigen::Vector3d& x, const NodeModel& m);

/// Analytic Jacobian of chen_flow.
Eigen::Matrix3d chen_jacobian(const Eigen::Vector3d& x, const NodeModel& m);

}  // namespace clsk
