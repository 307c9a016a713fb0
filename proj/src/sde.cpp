#include "clsk/sde.hpp"

#include <cmath>

namespace clsk {

void draw_increments(std::mt19937_64& rng, double h, std::vector<NoiseDraw>& out) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double sh = std::sqrt(h);
    const double h32 = h * sh;
    const double inv2s3 = 1.0 / (2.0 * std::sqrt(3.0));
    for (auto& d : out) {
        const double z1 = gauss(rng);
        const double z2 = gauss(rng);
        d.dW = sh * z1;
        d.I10 = h32 * (0.5 * z1 + inv2s3 * z2);
    }
}

void sra1_step(const OdeRhs& f, Eigen::VectorXd& x, double h, const Eigen::MatrixXd& G,
               const std::vector<NoiseDraw>& draws, Rk4Workspace& ws) {
    f(x, ws.k1);
    ws.tmp = x + (0.75 * h) * ws.k1;
    for (Eigen::Index l = 0; l < G.cols(); ++l)
        ws.tmp += (1.5 * draws[static_cast<std::size_t>(l)].I10 / h) * G.col(l);
    f(ws.tmp, ws.k2);
    x += h * ((1.0 / 3.0) * ws.k1 + (2.0 / 3.0) * ws.k2);
    for (Eigen::Index l = 0; l < G.cols(); ++l)
        x += draws[static_cast<std::size_t>(l)].dW * G.col(l);
}

void em_step(const OdeRhs& f, Eigen::VectorXd& x, double h, const Eigen::MatrixXd& G,
             const std::vector<NoiseDraw>& draws, Rk4Workspace& ws) {
    f(x, ws.k1);
    x += h * ws.k1;
    for (Eigen::Index l = 0; l < G.cols(); ++l)
        x += draws[static_cast<std::size_t>(l)].dW * G.col(l);
}

void integrate_sde_observed(const OdeRhs& f, Eigen::VectorXd& x, double h, long n,
                            const Eigen::MatrixXd& G, std::uint64_t seed,
                            SdeScheme scheme,
                            const std::function<void(long, const Eigen::VectorXd&)>& observer,
                            double bound) {
    Rk4Workspace ws;
    ws.resize(x.size());
    std::mt19937_64 rng(seed);
    std::vector<NoiseDraw> draws(static_cast<std::size_t>(G.cols()));
    if (observer) observer(0, x);
    for (long k = 1; k <= n; ++k) {
        draw_increments(rng, h, draws);
        if (scheme == SdeScheme::sra1)
            sra1_step(f, x, h, G, draws, ws);
        else
            em_step(f, x, h, G, draws, ws);
        if (!x.allFinite() || x.cwiseAbs().maxCoeff() > bound)
            throw DivergenceError(k);
        if (observer) observer(k, x);
    }
}

}  // namespace clsk
