#pragma once

#include <cstdint>
#include <vector>

#include "clsk/chen.hpp"

namespace clsk {

struct BasebandSignal {
    std::vector<double> samples;
    double dt = 1.0;
    int sf = 1;
};

/// First component of a Chen trajectory: n samples at step dt after
/// discarding a transient of `discard` samples.
std::vector<double> chen_signal(const Eigen::Vector3d& x0, long n, double dt, long discard,
                                const NodeModel& m = {});

/// Per symbol, copies sf samples from x (bit 0) or y (bit 1).
BasebandSignal csk_modulate(const std::vector<int>& bits, const std::vector<double>& x,
                            const std::vector<double>& y, int sf, double dt = 1.0);

/// Coherent CSK detection with exact replicas: per symbol pick the reference
/// maximizing corr(r, s) - E_s/2 (maximum-likelihood metric for equal-prior
/// symbols of unequal energy).
std::vector<int> csk_demodulate(const std::vector<double>& r, const std::vector<double>& x,
                                const std::vector<double>& y, int sf);

/// Reference half followed by +/- reference data half; requires even sf.
BasebandSignal dcsk_modulate(const std::vector<int>& bits, const std::vector<double>& x, int sf,
                             double dt = 1.0);

/// Correlates the two halves of each symbol; negative correlation decodes 1.
std::vector<int> dcsk_demodulate(const std::vector<double>& r, int sf);

/// Adds white Gaussian noise with N0 derived from the measured per-bit signal
/// energy and the requested Eb/N0 (decibels); noise std = sqrt(N0/2).
std::vector<double> awgn(const std::vector<double>& signal, double ebn0_db, int sf,
                         std::uint64_t seed);

/// The fitted CLSK trend curve P_e(x) = min(1, 10^(a x^2 + b x + c)) with
/// a = -0.5354, b = 7.2835, c = -25.05 (x in dB).
double fit_curve(double ebn0_db);

}  // namespace clsk
