#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "clsk/bench.hpp"
#include "clsk/lyapunov.hpp"
#include "clsk/netfile.hpp"
#include "clsk/presets.hpp"

namespace fs = std::filesystem;
using namespace clsk;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitRequirement = 4;

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_manifest(const fs::path& out_dir, const std::string& command,
                    const std::string& config_path, std::uint64_t seed) {
    std::ofstream m(out_dir / "manifest.json");
    m << "{\n  \"command\": \"" << command << "\",\n  \"config\": \"" << config_path
      << "\",\n  \"seed\": " << seed << ",\n  \"out\": \"" << out_dir.string() << "\"";
    if (!config_path.empty())
        m << ",\n  \"input_hashes\": {\"" << config_path << "\": \"" << fnv1a_hex(slurp(config_path))
          << "\"}";
    m << "\n}\n";
}

fs::path resolve_out(std::string out) {
    if (out.empty()) {
        if (const char* env = std::getenv("CLSK_OUT_DIR"))
            out = env;
        else
            out = ".";
    }
    fs::create_directories(out);
    return out;
}

CommSystem load_or_preset(const std::string& config, double alpha_override) {
    CommSystem sys;
    if (config == "example1")
        sys = presets::example1();
    else if (config == "example2")
        sys = presets::example2();
    else
        sys = load_network(config);
    if (alpha_override > 0.0) sys.alpha = alpha_override;
    return sys;
}

std::vector<int> parse_bits(const std::string& s) {
    std::vector<int> bits;
    for (char c : s) {
        if (c == '0' || c == '1')
            bits.push_back(c - '0');
        else if (c != ' ' && c != ',')
            throw ConfigError("malformed bit stream: only 0 and 1 allowed");
    }
    return bits;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"clsk - cluster shift keying simulation laboratory"};
    app.require_subcommand(1);

    std::string config, out, bits_str, scheme = "clsk", trace_path;
    std::uint64_t seed = 1;
    double sigma = 0.0, epsilon = 0.0, alpha = 0.0;
    int sf = 200, jobs = static_cast<int>(std::thread::hardware_concurrency());
    long nbits = 0;
    bool desk_scale = true, paper_scale = false;
    double eta_min = -20.0, eta_max = 0.0, eta_step = 0.5, horizon = 2000.0, dt = 1e-3;
    std::string sigmas_str;
    int window = 256, overlap = 128;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed, "base random seed");
        cmd->add_option("--out", out, "output directory (default $CLSK_OUT_DIR or .)");
        cmd->add_option("--jobs", jobs, "parallel workers");
    };

    auto* cmd_msf = app.add_subcommand("msf", "master stability function sweep");
    add_common(cmd_msf);
    cmd_msf->add_option("--eta-min", eta_min);
    cmd_msf->add_option("--eta-max", eta_max);
    cmd_msf->add_option("--eta-step", eta_step);
    cmd_msf->add_option("--horizon", horizon);
    cmd_msf->add_option("--dt", dt);

    auto* cmd_check = app.add_subcommand("design-check", "requirement and eigenvalue report");
    add_common(cmd_check);
    cmd_check->add_option("--config", config, "network file or preset name")->required();
    cmd_check->add_option("--eta-bar", eta_min, "stability threshold for the coupling range")
        ->default_val(-10.5);

    auto* cmd_tx = app.add_subcommand("transmit", "transmit a bit stream and detect it");
    add_common(cmd_tx);
    cmd_tx->add_option("--config", config)->required();
    cmd_tx->add_option("--bits", bits_str, "explicit 0/1 stream");
    cmd_tx->add_option("--nbits", nbits, "number of random bits");
    cmd_tx->add_option("--sigma", sigma);
    cmd_tx->add_option("--epsilon", epsilon);
    cmd_tx->add_option("--alpha", alpha);
    cmd_tx->add_option("--sf", sf);

    auto* cmd_ber = app.add_subcommand("ber", "Monte Carlo BER sweep");
    add_common(cmd_ber);
    cmd_ber->add_option("--config", config)->required();
    cmd_ber->add_option("--scheme", scheme)->check(CLI::IsMember({"clsk", "csk", "dcsk"}));
    cmd_ber->add_option("--sigmas", sigmas_str,
                        "comma list of noise levels (sigma, or Eb/N0 dB for baselines)")
        ->required();
    cmd_ber->add_option("--bits", nbits, "bits per cell (overrides the scale presets)");
    cmd_ber->add_option("--sigma", sigma);  // accepted for symmetry; unused in sweeps
    cmd_ber->add_option("--epsilon", epsilon);
    cmd_ber->add_option("--alpha", alpha);
    cmd_ber->add_option("--sf", sf);
    cmd_ber->add_flag("--desk-scale,!--paper-scale", desk_scale,
                      "cap cells at 10^4 bits (default) or use the full-paper schedule");

    auto* cmd_spec = app.add_subcommand("spectrogram", "STFT of a trace file (one sample per line)");
    add_common(cmd_spec);
    cmd_spec->add_option("--input", trace_path)->required();
    cmd_spec->add_option("--window", window);
    cmd_spec->add_option("--overlap", overlap);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return kExitConfig;
    }

    try {
        const fs::path out_dir = resolve_out(out);

        if (cmd_msf->parsed()) {
            if (eta_step <= 0.0 || eta_min >= eta_max) throw ConfigError("empty or invalid eta grid");
            std::vector<double> grid;
            for (double eta = eta_min; eta <= eta_max + 1e-12; eta += eta_step) grid.push_back(eta);
            MsfCurve curve = msf_sweep(NodeModel{}, presets::gamma(), grid, jobs, horizon, dt);
            std::ofstream csv(out_dir / "msf.csv");
            csv.precision(12);
            csv << "eta,mu\n";
            for (auto [eta, mu] : curve.samples) csv << eta << ',' << mu << '\n';
            std::ofstream thr(out_dir / "msf_threshold.txt");
            thr.precision(12);
            thr << curve.threshold << '\n';
            write_manifest(out_dir, "msf", "", seed);
            std::cout << "eta_bar = " << curve.threshold << '\n';
        } else if (cmd_check->parsed()) {
            CommSystem sys = load_or_preset(config, alpha);
            auto rep = sys.requirements();
            for (const auto& f : rep.failures) std::cout << "FAIL " << f << '\n';
            if (rep.ok()) std::cout << "requirements: all pass\n";
            for (std::size_t s = 0; s < sys.symbols.size(); ++s) {
                bool pairs_only = true;
                for (const auto& c : sys.patterns[s]) pairs_only &= c.size() <= 2;
                if (!pairs_only) {
                    std::cout << "symbol " << s << ": pattern has clusters beyond pairs; "
                              << "spectral split skipped\n";
                    continue;
                }
                Eigen::MatrixXd delta = Eigen::MatrixXd::Identity(sys.N, sys.N);
                for (const auto& c : sys.patterns[s])
                    if (c.size() == 2) {
                        delta(c[0], c[0]) = delta(c[1], c[1]) = 0.0;
                        delta(c[0], c[1]) = delta(c[1], c[0]) = 1.0;
                    }
                auto split = block_diagonalize(sys.symbols[s].Xi, delta, sys.patterns[s]);
                std::cout << "symbol " << s << ": lambda_min=" << split.lambda_min
                          << " |lambda2s|=" << split.lambda2s_abs
                          << " condition=" << (check_eigenvalue_condition(split) ? "ok" : "violated");
                if (check_eigenvalue_condition(split)) {
                    auto [lo, hi] = epsilon_range(eta_min, split);
                    std::cout << " epsilon_range=[" << lo << ", " << hi << "]";
                }
                std::cout << '\n';
            }
            write_manifest(out_dir, "design-check", config.find('.') != std::string::npos ? config : "",
                           seed);
            if (!rep.ok()) return kExitRequirement;
        } else if (cmd_tx->parsed()) {
            CommSystem sys = load_or_preset(config, alpha);
            if (epsilon > 0.0) sys.epsilon = epsilon;
            std::vector<int> bits = parse_bits(bits_str);
            if (bits.empty() && nbits > 0) {
                std::mt19937_64 rng(seed);
                std::uniform_int_distribution<int> coin(0, 1);
                bits.resize(static_cast<std::size_t>(nbits));
                for (auto& b : bits) b = coin(rng);
            }
            if (bits.empty()) throw ConfigError("no bits given: use --bits or --nbits");
            TransmitConfig tcfg;
            tcfg.sf = sf;
            tcfg.seed = seed;
            Transmission tx = transmit(bits, sys, sigma, tcfg);
            auto detected = detect_bits(tx, sys);
            std::ofstream traces(out_dir / "traces.csv");
            traces.precision(10);
            traces << "t";
            for (int r : tx.rx_nodes) traces << ",x" << r << "_1,x" << r << "_2,x" << r << "_3";
            for (auto [i, j] : tx.channel_links) traces << ",e_" << i << '_' << j;
            traces << '\n';
            for (std::size_t k = 0; k < tx.times.size(); ++k) {
                traces << tx.times[k];
                for (int r = 0; r < tx.rx_states[k].rows(); ++r)
                    traces << ',' << tx.rx_states[k](r, 0) << ',' << tx.rx_states[k](r, 1) << ','
                           << tx.rx_states[k](r, 2);
                for (Eigen::Index l = 0; l < tx.channel_errors[k].size(); ++l)
                    traces << ',' << tx.channel_errors[k](l);
                traces << '\n';
            }
            std::ofstream db(out_dir / "detected_bits.txt");
            long errors = 0;
            for (std::size_t n = 0; n < detected.size(); ++n) {
                db << detected[n];
                if (n > 0 && detected[n] != bits[n]) ++errors;
            }
            db << '\n';
            write_manifest(out_dir, "transmit", config.find('.') != std::string::npos ? config : "",
                           seed);
            std::cout << "sent " << bits.size() << " bits, " << errors
                      << " errors (first symbol excluded)\n";
        } else if (cmd_ber->parsed()) {
            std::vector<double> sigmas;
            std::stringstream ss(sigmas_str);
            for (std::string tok; std::getline(ss, tok, ',');)
                if (!tok.empty()) sigmas.push_back(std::stod(tok));
            if (sigmas.empty()) throw ConfigError("empty sigma grid");
            std::vector<BerRecord> records;
            if (scheme == "clsk") {
                CommSystem sys = load_or_preset(config, alpha);
                if (epsilon > 0.0) sys.epsilon = epsilon;
                SweepConfig cfg;
                cfg.sigmas = sigmas;
                cfg.seed_base = seed;
                cfg.jobs = jobs;
                cfg.tcfg.sf = sf;
                if (nbits > 0) {
                    cfg.bits_per_cell = nbits;
                    records = ber_sweep(sys, cfg);
                } else {
                    // bit counts follow the published schedules, desk-capped by default
                    BitsSchedule sched = sys.has_control()
                                             ? paper_schedule_example2(sys.alpha, sf)
                                             : paper_schedule_example1();
                    for (double s : sigmas) {
                        SweepConfig one = cfg;
                        one.sigmas = {s};
                        one.bits_per_cell = desk_scale ? desk_bits(s, sched) : adapt_bits(s, sched);
                        auto rec = ber_sweep(sys, one);
                        records.insert(records.end(), rec.begin(), rec.end());
                    }
                }
            } else {
                records = baseline_sweep(scheme, sigmas, nbits > 0 ? nbits : kDeskCap, sf, seed);
            }
            std::ofstream csv(out_dir / "ber.csv");
            write_ber_csv(csv, records);
            write_manifest(out_dir, "ber", config.find('.') != std::string::npos ? config : "", seed);
            std::cout << "wrote " << records.size() << " cells to " << (out_dir / "ber.csv").string()
                      << '\n';
        } else if (cmd_spec->parsed()) {
            std::ifstream in(trace_path);
            if (!in) throw ConfigError("cannot open trace file " + trace_path);
            std::vector<double> signal;
            for (double v; in >> v;) signal.push_back(v);
            Eigen::MatrixXd S = spectrogram(signal, window, overlap);
            std::ofstream csv(out_dir / "spectrogram.csv");
            write_matrix_csv(csv, S, 1.0 / window);
            write_manifest(out_dir, "spectrogram", trace_path, seed);
            std::cout << "wrote " << S.cols() << " frames x " << S.rows() << " bins\n";
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        std::cerr << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::out_of_range& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DivergenceError& e) {
        std::cerr << e.what() << '\n';
        return kExitDivergence;
    } catch (const RequirementError& e) {
        std::cerr << e.what() << '\n';
        return kExitRequirement;
    } catch (const ThresholdNotFound& e) {
        std::cerr << e.what() << '\n';
        return kExitDivergence;
    }
}
