#include "clsk/chen.hpp"

#include <cmath>
#include <stdexcept>

namespace clsk {

Eigen::Vector3d chen_flow(const Eigen::Vector3d& x, const NodeModel& m) {
    if (!x.allFinite())
        throw std::domain_error("chen_flow: non-finite state");
    return {m.a * (x[1] - x[0]),
            x[0] * (m.c - m.a - x[2]) + m.c * x[1],
            x[0] * x[1] - m.b * x[2]};
}

Eigen::Matrix3d chen_jacobian(const Eigen::Vector3d& x, const NodeModel& m) {
    if (!x.allFinite())
        throw std::domain_error("chen_jacobian: non-finite state");
    Eigen::Matrix3d j;
    j << -m.a, m.a, 0.0,
         m.c - m.a - x[2], m.c, -x[0],
         x[1], x[0], -m.b;
    return j;
}

}  // namespace clsk
