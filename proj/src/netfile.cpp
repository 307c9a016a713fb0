#include "clsk/netfile.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace clsk {

namespace {

using nlohmann::json;

Eigen::MatrixXd matrix_from(const json& j, const std::string& what) {
    if (!j.is_array() || j.empty()) throw ConfigError(what + " must be a nonempty array of rows");
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].size();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols)
            throw ConfigError(what + " rows have inconsistent lengths");
        for (std::size_t c = 0; c < cols; ++c) {
            if (!j[r][c].is_number()) throw ConfigError(what + " entries must be numbers");
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
        }
    }
    return m;
}

json matrix_to(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<int> ints_from(const json& j, const std::string& what) {
    if (!j.is_array()) throw ConfigError(what + " must be an array");
    std::vector<int> out;
    for (const auto& v : j) {
        if (!v.is_number_integer()) throw ConfigError(what + " entries must be integers");
        out.push_back(v.get<int>());
    }
    return out;
}

std::vector<std::pair<int, int>> pairs_from(const json& j, const std::string& what) {
    if (!j.is_array()) throw ConfigError(what + " must be an array of [i, j] pairs");
    std::vector<std::pair<int, int>> out;
    for (const auto& v : j) {
        if (!v.is_array() || v.size() != 2) throw ConfigError(what + " entries must be [i, j] pairs");
        out.emplace_back(v[0].get<int>(), v[1].get<int>());
    }
    return out;
}

}  // namespace

CommSystem parse_network(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    try {
        CommSystem sys;
        sys.name = j.value("name", "");
        sys.N = j.at("nodes").get<int>();
        if (sys.N < 1) throw ConfigError("nodes must be positive");
        if (j.contains("model")) {
            sys.model.a = j["model"].at("a").get<double>();
            sys.model.b = j["model"].at("b").get<double>();
            sys.model.c = j["model"].at("c").get<double>();
        }
        Eigen::MatrixXd g = matrix_from(j.at("gamma"), "gamma");
        if (g.rows() != 3 || g.cols() != 3) throw ConfigError("gamma must be 3x3");
        sys.Gamma = g;
        sys.epsilon = j.at("epsilon").get<double>();
        if (!j.at("symbols").is_array() || j["symbols"].empty())
            throw ConfigError("symbols must be a nonempty array");
        for (const auto& js : j["symbols"]) {
            SymbolConfig sc;
            sc.Xi = matrix_from(js.at("xi"), "symbol xi");
            if (sc.Xi.rows() != sys.N || sc.Xi.cols() != sys.N)
                throw ConfigError("symbol xi must be nodes x nodes");
            if (js.contains("a")) sc.A = matrix_from(js["a"], "symbol a");
            ClusterPattern pattern;
            for (const auto& jc : js.at("pattern")) pattern.push_back(ints_from(jc, "pattern cluster"));
            sys.symbols.push_back(std::move(sc));
            sys.patterns.push_back(std::move(pattern));
        }
        sys.tx_nodes = ints_from(j.at("transmitter"), "transmitter");
        sys.rx_nodes = ints_from(j.at("receiver"), "receiver");
        sys.control_links = pairs_from(j.value("control_links", json::array()), "control_links");
        for (auto [a, b] : pairs_from(j.value("noisy_links", json::array()), "noisy_links"))
            sys.noisy_links.push_back({a, b});
        if (j.contains("control")) {
            sys.pin = ints_from(j["control"].at("pin"), "control pin");
            if (static_cast<int>(sys.pin.size()) != sys.N)
                throw ConfigError("control pin map must cover every node");
            sys.alpha = j["control"].at("alpha").get<double>();
            for (const auto& sc : sys.symbols)
                if (!sc.A) throw ConfigError("control network requires per-symbol a matrices");
        }
        for (int v : sys.tx_nodes)
            if (v < 0 || v >= sys.N) throw ConfigError("transmitter node out of range");
        for (int v : sys.rx_nodes)
            if (v < 0 || v >= sys.N) throw ConfigError("receiver node out of range");
        return sys;
    } catch (const json::exception& e) {
        throw ConfigError(e.what());
    }
}

CommSystem load_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open network file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_network(buf.str());
}

std::string serialize_network(const CommSystem& sys) {
    json j;
    j["name"] = sys.name;
    j["nodes"] = sys.N;
    j["model"] = {{"a", sys.model.a}, {"b", sys.model.b}, {"c", sys.model.c}};
    j["gamma"] = matrix_to(sys.Gamma);
    j["epsilon"] = sys.epsilon;
    json symbols = json::array();
    for (std::size_t s = 0; s < sys.symbols.size(); ++s) {
        json js;
        js["xi"] = matrix_to(sys.symbols[s].Xi);
        if (sys.symbols[s].A) js["a"] = matrix_to(*sys.symbols[s].A);
        js["pattern"] = sys.patterns[s];
        symbols.push_back(std::move(js));
    }
    j["symbols"] = std::move(symbols);
    j["transmitter"] = sys.tx_nodes;
    j["receiver"] = sys.rx_nodes;
    json cl = json::array();
    for (auto [a, b] : sys.control_links) cl.push_back({a, b});
    j["control_links"] = std::move(cl);
    json nl = json::array();
    for (const auto& l : sys.noisy_links) nl.push_back({l.a, l.b});
    j["noisy_links"] = std::move(nl);
    if (sys.has_control()) j["control"] = {{"pin", sys.pin}, {"alpha", sys.alpha}};
    return j.dump(2) + "\n";
}

void save_network(const std::string& path, const CommSystem& sys) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write network file " + path);
    out << serialize_network(sys);
}

bool same_system(const CommSystem& a, const CommSystem& b) {
    auto same_mat = [](const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
        return x.rows() == y.rows() && x.cols() == y.cols() && x == y;
    };
    if (a.name != b.name || a.N != b.N || a.epsilon != b.epsilon || a.alpha != b.alpha) return false;
    if (a.model.a != b.model.a || a.model.b != b.model.b || a.model.c != b.model.c) return false;
    if (a.Gamma != b.Gamma) return false;
    if (a.symbols.size() != b.symbols.size() || a.patterns != b.patterns) return false;
    for (std::size_t s = 0; s < a.symbols.size(); ++s) {
        if (!same_mat(a.symbols[s].Xi, b.symbols[s].Xi)) return false;
        if (a.symbols[s].A.has_value() != b.symbols[s].A.has_value()) return false;
        if (a.symbols[s].A && !same_mat(*a.symbols[s].A, *b.symbols[s].A)) return false;
    }
    if (a.tx_nodes != b.tx_nodes || a.rx_nodes != b.rx_nodes) return false;
    if (a.control_links != b.control_links || a.pin != b.pin) return false;
    if (a.noisy_links.size() != b.noisy_links.size()) return false;
    for (std::size_t l = 0; l < a.noisy_links.size(); ++l)
        if (a.noisy_links[l].a != b.noisy_links[l].a || a.noisy_links[l].b != b.noisy_links[l].b)
            return false;
    return true;
}

}  // namespace clsk
