#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <utility>
#include <vector>

#include "clsk/chen.hpp"

namespace clsk {

struct LyapunovOptions {
    double transient = 100.0;  // time units discarded before averaging
    int renorm_every = 10;     // steps between tangent-vector renormalizations
    double bound = 1e6;
};

struct ThresholdNotFound : std::runtime_error {
    ThresholdNotFound() : std::runtime_error("master stability function has no sign change on the grid") {}
};

/// Largest Lyapunov exponent of the variational system
///   ds/dt = f(s),  dz/dt = (Df(s) + eta*Gamma) z
/// estimated by the Benettin method along a reference trajectory started at
/// [1,1,1]. Deterministic for fixed inputs.
double max_lyapunov(const NodeModel& m, double eta, const Eigen::Matrix3d& Gamma,
                    double horizon = 2000.0, double dt = 1e-3,
                    const LyapunovOptions& opts = {});

struct MsfCurve {
    std::vector<std::pair<double, double>> samples;  // (eta, mu), ascending in eta
    double threshold;                                 // eta_bar
};

/// Evaluates max_lyapunov over an ascending eta grid. The threshold is the
/// largest grid value such that mu < 0 at every grid point below it, i.e. the
/// first grid point where mu >= 0. Throws ThresholdNotFound when the curve
/// does not change sign on the grid. Grid points are evaluated in parallel
/// when jobs > 1 (each point is independent and deterministic).
MsfCurve msf_sweep(const NodeModel& m, const Eigen::Matrix3d& Gamma,
                   const std::vector<double>& eta_grid, int jobs = 1,
                   double horizon = 2000.0, double dt = 1e-3,
                   const LyapunovOptions& opts = {});

}  // namespace clsk
