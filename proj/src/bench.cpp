#include "clsk/bench.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "clsk/baselines.hpp"

namespace clsk {

long adapt_bits(double sigma, const BitsSchedule& schedule) {
    for (const auto& row : schedule)
        if (sigma >= row.lo && sigma <= row.hi) return row.bits;
    throw std::out_of_range("adapt_bits: sigma outside every scheduled range");
}

BitsSchedule paper_schedule_example1() {
    return {{0.0, 4.0, 20000000L}, {5.0, 10.0, 1000000L}, {11.0, 15.0, 500000L}, {16.0, 20.0, 100000L}};
}

BitsSchedule paper_schedule_example2(double alpha, int sf) {
    if (alpha == 20.0 && sf == 500)
        return {{0.0, 0.15, 10000000L}, {0.2, 0.65, 5000000L}, {0.7, 1.0, 100000L}};
    if (alpha == 20.0 && sf == 1000)
        return {{0.0, 0.15, 10000000L}, {0.2, 0.65, 7000000L}, {0.7, 1.0, 1000000L}};
    if (alpha == 10.0 && sf == 1000)
        return {{0.0, 0.6, 10000000L}, {0.65, 1.0, 1000000L}, {1.0, 1.5, 100000L}};
    throw std::out_of_range("paper_schedule_example2: no schedule for this (alpha, sf)");
}

long desk_bits(double sigma, const BitsSchedule& schedule) {
    return std::min(adapt_bits(sigma, schedule), kDeskCap);
}

std::pair<double, double> wilson_interval(long errors, long bits) {
    if (bits <= 0) return {0.0, 1.0};
    const double z = 1.959963984540054;  // 95%
    const double n = static_cast<double>(bits);
    const double p = static_cast<double>(errors) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

std::uint64_t cell_seed(std::uint64_t seed_base, std::uint64_t index) {
    std::uint64_t z = seed_base + (index + 1) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

std::vector<int> random_bits(long n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coin(0, 1);
    std::vector<int> bits(static_cast<std::size_t>(n));
    for (auto& b : bits) b = coin(rng);
    return bits;
}

void finalize(BerRecord& rec) {
    if (rec.bits > 0) {
        if (rec.errors == 0) {
            rec.pe = 1.0 / static_cast<double>(rec.bits);
            rec.pe_is_upper_bound = true;
        } else {
            rec.pe = static_cast<double>(rec.errors) / static_cast<double>(rec.bits);
        }
        std::tie(rec.ci_low, rec.ci_high) = wilson_interval(rec.errors, rec.bits);
    }
}

template <typename Fn>
void parallel_cells(std::size_t count, int jobs, Fn&& run_cell) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) run_cell(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            run_cell(i);
        }
    };
    const int nw = std::min<int>(jobs, static_cast<int>(count));
    std::vector<std::thread> pool;
    for (int w = 0; w < nw; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

}  // namespace

std::vector<BerRecord> ber_sweep(const CommSystem& sys, const SweepConfig& cfg) {
    if (cfg.sigmas.empty()) throw std::invalid_argument("ber_sweep: empty sigma grid");
    if (cfg.bits_per_cell < 1) throw std::invalid_argument("ber_sweep: at least one bit per cell");
    std::vector<BerRecord> out(cfg.sigmas.size());

    parallel_cells(cfg.sigmas.size(), cfg.jobs, [&](std::size_t i) {
        BerRecord& rec = out[i];
        rec.scheme = "clsk";
        rec.sigma = cfg.sigmas[i];
        rec.epsilon = sys.epsilon;
        rec.alpha = sys.alpha;
        rec.spreading_factor = cfg.tcfg.sf;
        rec.seed = cell_seed(cfg.seed_base, i);
        const auto t0 = std::chrono::steady_clock::now();
        try {
            TransmitConfig tcfg = cfg.tcfg;
            tcfg.seed = rec.seed;
            auto bits = random_bits(cfg.bits_per_cell, cell_seed(rec.seed, 0));
            TrialResult trial = run_trial(bits, sys, cfg.sigmas[i], tcfg, /*exclude_first=*/true);
            rec.bits = trial.bits;
            rec.errors = trial.errors;
            finalize(rec);
        } catch (const DivergenceError&) {
            rec.bits = 0;  // divergence recorded; the sweep continues
        }
        rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    });
    return out;
}

std::vector<BerRecord> baseline_sweep(const std::string& scheme, const std::vector<double>& ebn0_db,
                                      long bits_per_cell, int sf, std::uint64_t seed_base) {
    if (scheme != "csk" && scheme != "dcsk")
        throw std::invalid_argument("baseline_sweep: scheme must be csk or dcsk");
    if (ebn0_db.empty()) throw std::invalid_argument("baseline_sweep: empty grid");
    if (bits_per_cell < 1) throw std::invalid_argument("baseline_sweep: at least one bit per cell");

    // one shared pair of chaotic reference signals, long enough for all cells
    const long need = bits_per_cell * static_cast<long>(sf);
    const auto x = chen_signal({1.0, 1.0, 1.0}, need, 0.002, 100000);
    const auto y = chen_signal({-3.0, 2.0, 25.0}, need, 0.002, 100000);

    std::vector<BerRecord> out(ebn0_db.size());
    for (std::size_t i = 0; i < ebn0_db.size(); ++i) {
        BerRecord& rec = out[i];
        rec.scheme = scheme;
        rec.sigma = ebn0_db[i];
        rec.spreading_factor = sf;
        rec.seed = cell_seed(seed_base, i);
        const auto t0 = std::chrono::steady_clock::now();
        auto bits = random_bits(bits_per_cell, cell_seed(rec.seed, 0));
        std::vector<int> det;
        if (scheme == "csk") {
            auto s = csk_modulate(bits, x, y, sf);
            det = csk_demodulate(awgn(s.samples, ebn0_db[i], sf, rec.seed), x, y, sf);
        } else {
            auto s = dcsk_modulate(bits, x, sf);
            det = dcsk_demodulate(awgn(s.samples, ebn0_db[i], sf, rec.seed), sf);
        }
        rec.bits = bits_per_cell;
        for (std::size_t n = 0; n < bits.size(); ++n)
            if (det[n] != bits[n]) ++rec.errors;
        finalize(rec);
        rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    return out;
}

void write_ber_csv(std::ostream& os, const std::vector<BerRecord>& records) {
    os << "scheme,sigma,epsilon,alpha,spreading_factor,bits,errors,pe,pe_is_upper_bound,"
          "ci_low,ci_high,seed,wall_seconds\n";
    for (const auto& r : records) {
        std::ostringstream line;
        line.precision(12);
        line << r.scheme << ',' << r.sigma << ',' << r.epsilon << ',' << r.alpha << ','
             << r.spreading_factor << ',' << r.bits << ',' << r.errors << ',' << r.pe << ','
             << (r.pe_is_upper_bound ? 1 : 0) << ',' << r.ci_low << ',' << r.ci_high << ','
             << r.seed << ',' << r.wall_seconds << '\n';
        os << line.str();
    }
}

namespace {

void fft_radix2(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const auto u = a[i + k];
                const auto v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

std::vector<double> spectral_centroids(const Eigen::MatrixXd& S) {
    std::vector<double> out(static_cast<std::size_t>(S.cols()));
    for (Eigen::Index c = 0; c < S.cols(); ++c) {
        double num = 0.0, den = 0.0;
        for (Eigen::Index r = 0; r < S.rows(); ++r) {
            num += static_cast<double>(r) * S(r, c);
            den += S(r, c);
        }
        out[static_cast<std::size_t>(c)] = den > 0.0 ? num / den : 0.0;
    }
    return out;
}

double variance(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double s = 0.0;
    for (double x : v) s += (x - mean) * (x - mean);
    return s / static_cast<double>(v.size() - 1);
}

}  // namespace

Eigen::MatrixXd spectrogram(const std::vector<double>& signal, int window, int overlap) {
    if (window < 2 || (window & (window - 1)) != 0)
        throw std::invalid_argument("spectrogram: window must be a power of two >= 2");
    if (overlap < 0 || overlap >= window)
        throw std::invalid_argument("spectrogram: overlap must satisfy 0 <= overlap < window");
    if (static_cast<std::size_t>(window) > signal.size())
        throw std::invalid_argument("spectrogram: window exceeds signal length");

    const int hop = window - overlap;
    const int ncols = 1 + static_cast<int>((signal.size() - static_cast<std::size_t>(window)) /
                                           static_cast<std::size_t>(hop));
    std::vector<double> hann(static_cast<std::size_t>(window));
    for (int k = 0; k < window; ++k)
        hann[static_cast<std::size_t>(k)] =
            0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * k / (window - 1)));

    Eigen::MatrixXd S(window / 2 + 1, ncols);
    std::vector<std::complex<double>> buf(static_cast<std::size_t>(window));
    for (int c = 0; c < ncols; ++c) {
        const std::size_t off = static_cast<std::size_t>(c) * static_cast<std::size_t>(hop);
        for (int k = 0; k < window; ++k)
            buf[static_cast<std::size_t>(k)] =
                signal[off + static_cast<std::size_t>(k)] * hann[static_cast<std::size_t>(k)];
        fft_radix2(buf);
        for (int r = 0; r <= window / 2; ++r) S(r, c) = std::abs(buf[static_cast<std::size_t>(r)]);
    }
    return S;
}

// One row per time frame; the header row carries the frequency of each bin
// (bin index times bin_scale).
void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& m, double bin_scale) {
    std::ostringstream body;
    body.precision(10);
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        body << (r ? "," : "") << static_cast<double>(r) * bin_scale;
    body << '\n';
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        for (Eigen::Index r = 0; r < m.rows(); ++r) body << (r ? "," : "") << m(r, c);
        body << '\n';
    }
    os << body.str();
}

double boundary_permutation_pvalue(const std::vector<double>& signal, int sf, int window,
                                   int overlap, std::uint64_t seed, int shuffles) {
    const Eigen::MatrixXd S = spectrogram(signal, window, overlap);
    const auto centroids = spectral_centroids(S);
    const int hop = window - overlap;

    // a column is a boundary column when its window straddles a multiple of sf
    std::vector<bool> is_boundary(centroids.size(), false);
    for (std::size_t c = 0; c < centroids.size(); ++c) {
        const long lo = static_cast<long>(c) * hop;
        const long hi = lo + window - 1;
        if (lo / sf != hi / sf) is_boundary[c] = true;
    }

    auto statistic = [&](const std::vector<bool>& labels) {
        std::vector<double> vb, vw;
        for (std::size_t c = 0; c < centroids.size(); ++c)
            (labels[c] ? vb : vw).push_back(centroids[c]);
        const double a = variance(vb), b = variance(vw);
        if (a <= 0.0 || b <= 0.0) return 0.0;
        return std::abs(std::log(a / b));
    };

    const double observed = statistic(is_boundary);
    std::mt19937_64 rng(seed);
    std::vector<bool> labels = is_boundary;
    int ge = 0;
    for (int s = 0; s < shuffles; ++s) {
        for (std::size_t i = labels.size(); i > 1; --i) {
            std::uniform_int_distribution<std::size_t> pick(0, i - 1);
            const std::size_t j = pick(rng);
            const bool tmp = labels[i - 1];
            labels[i - 1] = labels[j];
            labels[j] = tmp;
        }
        if (statistic(labels) >= observed) ++ge;
    }
    return (ge + 1.0) / (shuffles + 1.0);
}

}  // namespace clsk
