#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace clsk {

/// Thrown when a state component exceeds the divergence bound; carries the
/// offending step index.
struct DivergenceError : std::runtime_error {
    long step;
    explicit DivergenceError(long s)
        : std::runtime_error("trajectory diverged at step " + std::to_string(s)), step(s) {}
};

/// Right-hand side writing dx/dt into `dxdt` (same size as `x`).
using OdeRhs = std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& dxdt)>;

/// One classical RK4 step, in place. Temporaries are caller-provided so hot
/// loops can avoid reallocation.
struct Rk4Workspace {
    Eigen::VectorXd k1, k2, k3, k4, tmp;
    void resize(Eigen::Index n) {
        k1.resize(n); k2.resize(n); k3.resize(n); k4.resize(n); tmp.resize(n);
    }
};

void rk4_step(const OdeRhs& rhs, Eigen::VectorXd& x, double dt, Rk4Workspace& ws);

/// Fixed-step RK4 over n steps. Returns the n+1 states including x0.
/// Any component with |x| > bound raises DivergenceError.
std::vector<Eigen::VectorXd> integrate_ode(const OdeRhs& rhs, const Eigen::VectorXd& x0,
                                           double dt, long n, double bound = 1e6);

/// Driver variant that only reports states through `observer` (called with
/// the step index, 0..n, and the current state). Used by the network
/// simulators to store strided samples without materializing every step.
void integrate_ode_observed(const OdeRhs& rhs, Eigen::VectorXd& x, double dt, long n,
                            const std::function<void(long, const Eigen::VectorXd&)>& observer,
                            double bound = 1e6);

}  // namespace clsk
