#include "horolab/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace horolab {

namespace {
std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}
} // namespace

ExperimentConfig ExperimentConfig::from_string(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        cfg.set_pair(line);
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("config: cannot open " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return from_string(buf.str());
}

void ExperimentConfig::set_pair(const std::string& pair) {
    std::size_t eq = pair.find('=');
    if (eq == std::string::npos)
        throw std::invalid_argument("config: expected key=value, got '" + pair + "'");
    set(trim(pair.substr(0, eq)), trim(pair.substr(eq + 1)));
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    if (key.empty()) throw std::invalid_argument("config: empty key");
    kv_[key] = value;
}

std::string ExperimentConfig::get(const std::string& key, const std::string& fallback) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

double ExperimentConfig::get_num(const std::string& key, double fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
        std::size_t used = 0;
        double v = std::stod(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: key '" + key + "' is not a number: " + it->second);
    }
}

uint64_t ExperimentConfig::get_int(const std::string& key, uint64_t fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
        std::size_t used = 0;
        double v = std::stod(it->second, &used);
        if (used != it->second.size() || v < 0 || v != std::floor(v))
            throw std::invalid_argument("not integral");
        return static_cast<uint64_t>(v);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: key '" + key + "' is not an integer: " + it->second);
    }
}

std::string ExperimentConfig::normalized() const {
    std::ostringstream os;
    for (const auto& [k, v] : kv_) os << k << '=' << v << '\n';
    return os.str();
}

std::string ExperimentConfig::oneline(const std::string& skip_key) const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, v] : kv_) {
        if (!skip_key.empty() && k == skip_key) continue;
        if (!first) os << ' ';
        os << k << '=' << v;
        first = false;
    }
    return os.str();
}

} // namespace horolab
