#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "clsk/bench.hpp"
#include "clsk/presets.hpp"

using namespace clsk;

TEST_CASE("bit-count schedules") {
    auto s1 = paper_schedule_example1();
    CHECK(adapt_bits(0.0, s1) == 20000000L);
    CHECK(adapt_bits(2.0, s1) == 20000000L);
    CHECK(adapt_bits(7.0, s1) == 1000000L);
    CHECK(adapt_bits(12.0, s1) == 500000L);
    CHECK(adapt_bits(20.0, s1) == 100000L);
    CHECK_THROWS_AS(adapt_bits(25.0, s1), std::out_of_range);

    CHECK(adapt_bits(0.5, paper_schedule_example2(10.0, 1000)) == 10000000L);
    CHECK(adapt_bits(0.8, paper_schedule_example2(10.0, 1000)) == 1000000L);
    CHECK(adapt_bits(0.3, paper_schedule_example2(20.0, 500)) == 5000000L);
    CHECK(adapt_bits(0.3, paper_schedule_example2(20.0, 1000)) == 7000000L);
    CHECK_THROWS_AS(paper_schedule_example2(15.0, 500), std::out_of_range);

    // overlapping rows: the first match wins
    CHECK(adapt_bits(1.0, paper_schedule_example2(10.0, 1000)) == 1000000L);

    CHECK(desk_bits(0.0, s1) == kDeskCap);
    CHECK(desk_bits(0.9, {{0.0, 1.0, 500L}}) == 500L);
}

TEST_CASE("wilson interval") {
    auto [lo, hi] = wilson_interval(50, 1000);
    CHECK(lo > 0.037);
    CHECK(lo < 0.05);
    CHECK(hi > 0.05);
    CHECK(hi < 0.066);

    auto [zlo, zhi] = wilson_interval(0, 1000);
    CHECK(zlo < 1e-12);
    CHECK(zhi > 0.0);
    CHECK(zhi < 0.005);

    auto [flo, fhi] = wilson_interval(1000, 1000);
    CHECK(fhi == 1.0);
    CHECK(flo > 0.995);
}

TEST_CASE("cell seeds are deterministic and well spread") {
    CHECK(cell_seed(1, 0) == cell_seed(1, 0));
    CHECK(cell_seed(1, 0) != cell_seed(1, 1));
    CHECK(cell_seed(1, 0) != cell_seed(2, 0));
}

TEST_CASE("csv schema") {
    BerRecord r;
    r.scheme = "clsk";
    r.sigma = 1.5;
    r.epsilon = 7.0;
    r.spreading_factor = 200;
    r.bits = 100;
    r.errors = 0;
    r.pe = 0.01;
    r.pe_is_upper_bound = true;
    r.ci_low = 0.0;
    r.ci_high = 0.037;
    r.seed = 42;
    std::ostringstream os;
    write_ber_csv(os, {r});
    std::istringstream is(os.str());
    std::string header, line;
    std::getline(is, header);
    CHECK(header ==
          "scheme,sigma,epsilon,alpha,spreading_factor,bits,errors,pe,pe_is_upper_bound,"
          "ci_low,ci_high,seed,wall_seconds");
    std::getline(is, line);
    CHECK(line.rfind("clsk,1.5,7,0,200,100,0,0.01,1,0,0.037,42,", 0) == 0);
}

TEST_CASE("ber sweep is reproducible across thread counts") {
    auto sys = presets::example1();
    SweepConfig cfg;
    cfg.sigmas = {0.0, 2.0};
    cfg.bits_per_cell = 4;
    cfg.seed_base = 11;
    cfg.jobs = 1;
    auto serial = ber_sweep(sys, cfg);
    cfg.jobs = 2;
    auto parallel = ber_sweep(sys, cfg);

    REQUIRE(serial.size() == 2);
    REQUIRE(parallel.size() == 2);
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].seed == parallel[i].seed);
        CHECK(serial[i].bits == parallel[i].bits);
        CHECK(serial[i].errors == parallel[i].errors);
        CHECK(serial[i].pe == parallel[i].pe);
        CHECK(serial[i].bits == 3);  // first symbol excluded
        CHECK(serial[i].sigma == cfg.sigmas[i]);
        CHECK(serial[i].scheme == "clsk");
    }
    // noise-free cell decodes cleanly, so pe is the zero-error upper bound
    CHECK(serial[0].errors == 0);
    CHECK(serial[0].pe_is_upper_bound);
    CHECK(serial[0].pe == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("baseline sweep smoke") {
    auto recs = baseline_sweep("dcsk", {0.0, 12.0}, 2000, 16, 5);
    REQUIRE(recs.size() == 2);
    CHECK(recs[0].scheme == "dcsk");
    CHECK(recs[0].bits == 2000);
    CHECK(recs[0].errors > recs[1].errors);
    CHECK_THROWS_AS(baseline_sweep("qam", {0.0}, 10, 16, 1), std::invalid_argument);
}

TEST_CASE("spectrogram locates a pure tone") {
    const int window = 256, overlap = 128;
    std::vector<double> sig(4096);
    for (std::size_t n = 0; n < sig.size(); ++n)
        sig[n] = std::sin(2.0 * std::numbers::pi * 8.0 * static_cast<double>(n) / window);

    Eigen::MatrixXd s = spectrogram(sig, window, overlap);
    CHECK(s.rows() == window / 2 + 1);
    CHECK(s.cols() == 1 + (4096 - window) / (window - overlap));
    for (Eigen::Index c = 0; c < s.cols(); ++c) {
        Eigen::Index peak;
        s.col(c).maxCoeff(&peak);
        CHECK(peak == 8);
        CHECK(s(8, c) > 100.0 * s(20, c));  // energy is concentrated at the tone
    }

    CHECK_THROWS_AS(spectrogram(sig, 100, 50), std::invalid_argument);
    CHECK_THROWS_AS(spectrogram(sig, 256, 256), std::invalid_argument);
    CHECK_THROWS_AS(spectrogram(std::vector<double>(10), 256, 128), std::invalid_argument);
}

TEST_CASE("matrix csv layout") {
    Eigen::MatrixXd m(2, 3);
    m << 1, 2, 3, 4, 5, 6;
    std::ostringstream os;
    write_matrix_csv(os, m, 0.5);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "0,0.5");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 3);  // one row per time frame
}

TEST_CASE("permutation p-value is a valid probability") {
    std::mt19937_64 rng(77);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> noise(8192);
    for (auto& v : noise) v = g(rng);

    const double p = boundary_permutation_pvalue(noise, 800, 256, 128, 1, 200);
    CHECK(p > 0.0);
    CHECK(p <= 1.0);
    CHECK(p == boundary_permutation_pvalue(noise, 800, 256, 128, 1, 200));
}
