#include "clsk/integrate.hpp"

namespace clsk {

namespace {
bool within_bound(const Eigen::VectorXd& x, double bound) {
    return x.allFinite() && x.cwiseAbs().maxCoeff() <= bound;
}
}  // namespace

void rk4_step(const OdeRhs& rhs, Eigen::VectorXd& x, double dt, Rk4Workspace& ws) {
    rhs(x, ws.k1);
    ws.tmp = x + (dt / 2.0) * ws.k1;
    rhs(ws.tmp, ws.k2);
    ws.tmp = x + (dt / 2.0) * ws.k2;
    rhs(ws.tmp, ws.k3);
    ws.tmp = x + dt * ws.k3;
    rhs(ws.tmp, ws.k4);
    x += (dt / 6.0) * (ws.k1 + 2.0 * ws.k2 + 2.0 * ws.k3 + ws.k4);
}

std::vector<Eigen::VectorXd> integrate_ode(const OdeRhs& rhs, const Eigen::VectorXd& x0,
                                           double dt, long n, double bound) {
    std::vector<Eigen::VectorXd> out;
    out.reserve(static_cast<std::size_t>(n) + 1);
    Eigen::VectorXd x = x0;
    out.push_back(x);
    Rk4Workspace ws;
    ws.resize(x.size());
    for (long k = 1; k <= n; ++k) {
        rk4_step(rhs, x, dt, ws);
        if (!within_bound(x, bound))
            throw DivergenceError(k);
        out.push_back(x);
    }
    return out;
}

void integrate_ode_observed(const OdeRhs& rhs, Eigen::VectorXd& x, double dt, long n,
                            const std::function<void(long, const Eigen::VectorXd&)>& observer,
                            double bound) {
    Rk4Workspace ws;
    ws.resize(x.size());
    if (observer) observer(0, x);
    for (long k = 1; k <= n; ++k) {
        rk4_step(rhs, x, dt, ws);
        if (!within_bound(x, bound))
            throw DivergenceError(k);
        if (observer) observer(k, x);
    }
}

}  // namespace clsk
