#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "clsk/modem.hpp"

namespace clsk {

struct BitsScheduleRow {
    double lo = 0.0;
    double hi = 0.0;
    long bits = 0;
};
using BitsSchedule = std::vector<BitsScheduleRow>;

/// Bit counts used by the paper-scale presets; ranges may overlap, the first
/// match wins. Throws when sigma falls outside every range.
long adapt_bits(double sigma, const BitsSchedule& schedule);

/// Paper-scale schedule for the uncontrolled example (sigma-keyed).
BitsSchedule paper_schedule_example1();
/// Paper-scale schedule for the controlled example, keyed by (alpha, sf).
BitsSchedule paper_schedule_example2(double alpha, int sf);
/// Applies the desk-scale cap (10^4 bits per cell) to a schedule lookup.
long desk_bits(double sigma, const BitsSchedule& schedule);

inline constexpr long kDeskCap = 10000;

struct BerRecord {
    std::string scheme;  // clsk | csk | dcsk
    double sigma = 0.0;  // noise level: link sigma for clsk, Eb/N0 dB for baselines
    double epsilon = 0.0;
    double alpha = 0.0;
    int spreading_factor = 0;
    long bits = 0;
    long errors = 0;
    double pe = 0.0;
    bool pe_is_upper_bound = false;  // set for zero-error cells, pe = 1/bits
    double ci_low = 0.0;             // Wilson 95% interval
    double ci_high = 0.0;
    std::uint64_t seed = 0;
    double wall_seconds = 0.0;
};

struct SweepConfig {
    std::vector<double> sigmas;
    long bits_per_cell = 1000;
    std::uint64_t seed_base = 1;
    TransmitConfig tcfg;
    int jobs = 1;
};

/// 95% Wilson score interval for a binomial proportion.
std::pair<double, double> wilson_interval(long errors, long bits);

/// Per-cell seed derived from the base: splitmix64(seed_base + index).
std::uint64_t cell_seed(std::uint64_t seed_base, std::uint64_t index);

/// Monte Carlo BER sweep of a CLSK system over the sigma grid; random
/// equiprobable bits per cell, first symbol excluded from counting. Cells run
/// in parallel; results are bitwise reproducible for a fixed seed base.
/// Divergent cells are recorded with bits = 0.
std::vector<BerRecord> ber_sweep(const CommSystem& sys, const SweepConfig& cfg);

/// CSK/DCSK baseline sweep over an Eb/N0 grid (dB), reusing the BerRecord
/// schema (sigma column holds the dB value).
std::vector<BerRecord> baseline_sweep(const std::string& scheme, const std::vector<double>& ebn0_db,
                                      long bits_per_cell, int sf, std::uint64_t seed_base);

/// CSV with the exact column order:
/// scheme,sigma,epsilon,alpha,spreading_factor,bits,errors,pe,pe_is_upper_bound,ci_low,ci_high,seed,wall_seconds
void write_ber_csv(std::ostream& os, const std::vector<BerRecord>& records);

/// Short-time Fourier magnitude, Hann window, power-of-two window length.
/// Rows are frequency bins 0..window/2, columns time frames.
Eigen::MatrixXd spectrogram(const std::vector<double>& signal, int window, int overlap);

void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& m, double bin_scale = 1.0);

/// Covertness statistic: spectral centroids of spectrogram columns are split
/// into symbol-boundary and within-symbol groups; the observed statistic is
/// |log(var_boundary / var_within)| and the p-value comes from a seeded
/// permutation test (1000 shuffles). sf is in signal samples per symbol.
double boundary_permutation_pvalue(const std::vector<double>& signal, int sf, int window,
                                   int overlap, std::uint64_t seed = 12345,
                                   int shuffles = 1000);

}  // namespace clsk
