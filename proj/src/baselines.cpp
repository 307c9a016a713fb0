#include "clsk/baselines.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "clsk/integrate.hpp"

namespace clsk {

std::vector<double> chen_signal(const Eigen::Vector3d& x0, long n, double dt, long discard,
                                const NodeModel& m) {
    OdeRhs rhs = [&m](const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
        dx = chen_flow(x.head<3>(), m);
    };
    Eigen::VectorXd x = x0;
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    integrate_ode_observed(rhs, x, dt, discard + n, [&](long k, const Eigen::VectorXd& y) {
        if (k > discard) out.push_back(y(0));
    });
    return out;
}

BasebandSignal csk_modulate(const std::vector<int>& bits, const std::vector<double>& x,
                            const std::vector<double>& y, int sf, double dt) {
    const std::size_t need = bits.size() * static_cast<std::size_t>(sf);
    if (x.size() < need || y.size() < need)
        throw std::invalid_argument("csk_modulate: source signals too short");
    BasebandSignal s;
    s.dt = dt;
    s.sf = sf;
    s.samples.resize(need);
    for (std::size_t n = 0; n < bits.size(); ++n) {
        const auto& src = bits[n] == 0 ? x : y;
        for (int k = 0; k < sf; ++k)
            s.samples[n * static_cast<std::size_t>(sf) + static_cast<std::size_t>(k)] =
                src[n * static_cast<std::size_t>(sf) + static_cast<std::size_t>(k)];
    }
    return s;
}

std::vector<int> csk_demodulate(const std::vector<double>& r, const std::vector<double>& x,
                                const std::vector<double>& y, int sf) {
    const std::size_t nb = r.size() / static_cast<std::size_t>(sf);
    std::vector<int> bits(nb);
    for (std::size_t n = 0; n < nb; ++n) {
        double cx = 0.0, cy = 0.0, ex = 0.0, ey = 0.0;
        for (int k = 0; k < sf; ++k) {
            const std::size_t i = n * static_cast<std::size_t>(sf) + static_cast<std::size_t>(k);
            cx += r[i] * x[i];
            cy += r[i] * y[i];
            ex += x[i] * x[i];
            ey += y[i] * y[i];
        }
        bits[n] = (cy - ey / 2.0) > (cx - ex / 2.0) ? 1 : 0;
    }
    return bits;
}

BasebandSignal dcsk_modulate(const std::vector<int>& bits, const std::vector<double>& x, int sf,
                             double dt) {
    if (sf % 2 != 0) throw std::invalid_argument("dcsk_modulate: sf must be even");
    const int h = sf / 2;
    if (x.size() < bits.size() * static_cast<std::size_t>(h))
        throw std::invalid_argument("dcsk_modulate: source signal too short");
    BasebandSignal s;
    s.dt = dt;
    s.sf = sf;
    s.samples.resize(bits.size() * static_cast<std::size_t>(sf));
    for (std::size_t n = 0; n < bits.size(); ++n) {
        const double sign = bits[n] == 0 ? 1.0 : -1.0;
        for (int k = 0; k < h; ++k) {
            const double ref = x[n * static_cast<std::size_t>(h) + static_cast<std::size_t>(k)];
            s.samples[n * static_cast<std::size_t>(sf) + static_cast<std::size_t>(k)] = ref;
            s.samples[n * static_cast<std::size_t>(sf) + static_cast<std::size_t>(h + k)] = sign * ref;
        }
    }
    return s;
}

std::vector<int> dcsk_demodulate(const std::vector<double>& r, int sf) {
    if (sf % 2 != 0) throw std::invalid_argument("dcsk_demodulate: sf must be even");
    const int h = sf / 2;
    const std::size_t nb = r.size() / static_cast<std::size_t>(sf);
    std::vector<int> bits(nb);
    for (std::size_t n = 0; n < nb; ++n) {
        double corr = 0.0;
        for (int k = 0; k < h; ++k) {
            const std::size_t base = n * static_cast<std::size_t>(sf);
            corr += r[base + static_cast<std::size_t>(k)] * r[base + static_cast<std::size_t>(h + k)];
        }
        bits[n] = corr < 0.0 ? 1 : 0;
    }
    return bits;
}

std::vector<double> awgn(const std::vector<double>& signal, double ebn0_db, int sf,
                         std::uint64_t seed) {
    if (signal.empty()) throw std::invalid_argument("awgn: empty signal");
    const std::size_t nb = signal.size() / static_cast<std::size_t>(sf);
    double energy = 0.0;
    for (double v : signal) energy += v * v;
    const double eb = energy / static_cast<double>(nb);
    const double n0 = eb / std::pow(10.0, ebn0_db / 10.0);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(n0 / 2.0));
    std::vector<double> out(signal.size());
    for (std::size_t i = 0; i < signal.size(); ++i) out[i] = signal[i] + gauss(rng);
    return out;
}

double fit_curve(double ebn0_db) {
    const double a = -0.5354, b = 7.2835, c = -25.05;
    const double pe = std::pow(10.0, a * ebn0_db * ebn0_db + b * ebn0_db + c);
    return pe < 1.0 ? pe : 1.0;
}

}  // namespace clsk
