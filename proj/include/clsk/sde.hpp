#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

#include "clsk/integrate.hpp"

namespace clsk {

/// Stochastic increments for one scalar Wiener channel over one step:
/// dW = W(t+h) - W(t) and the iterated integral I10 = int_t^{t+h} (W_s - W_t) ds.
struct NoiseDraw {
    double dW = 0.0;
    double I10 = 0.0;
};

/// Draws (dW, I10) for m channels from two standard normals each:
///   dW = sqrt(h) z1,  I10 = h^{3/2} (z1/2 + z2/(2 sqrt(3))).
void draw_increments(std::mt19937_64& rng, double h, std::vector<NoiseDraw>& out);

/// One step of the additive-noise strong order-1.5 stochastic Runge-Kutta
/// scheme SRA1 (Roessler 2010) with constant diffusion columns G (n x m):
///   H2 = x + (3/4) h f(x) + (3/2/h) sum_l I10_l g_l
///   x' = x + h [ (1/3) f(x) + (2/3) f(H2) ] + sum_l dW_l g_l
void sra1_step(const OdeRhs& f, Eigen::VectorXd& x, double h, const Eigen::MatrixXd& G,
               const std::vector<NoiseDraw>& draws, Rk4Workspace& ws);

/// Euler-Maruyama step (strong order 0.5/1.0 for additive noise); cross-check
/// scheme. Uses only the dW component of each draw.
void em_step(const OdeRhs& f, Eigen::VectorXd& x, double h, const Eigen::MatrixXd& G,
             const std::vector<NoiseDraw>& draws, Rk4Workspace& ws);

enum class SdeScheme { sra1, euler };

/// Fixed-step driver with internally generated increments (one mt19937_64
/// stream; per step the draws for all channels are consumed in column order).
/// Observer is called with (step, state) including step 0.
void integrate_sde_observed(const OdeRhs& f, Eigen::VectorXd& x, double h, long n,
                            const Eigen::MatrixXd& G, std::uint64_t seed,
                            SdeScheme scheme,
                            const std::function<void(long, const Eigen::VectorXd&)>& observer,
                            double bound = 1e6);

}  // namespace clsk
