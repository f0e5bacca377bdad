#include "rhoext/runconfig.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

namespace rhoext {

namespace {

int to_int(const std::string& s) {
    size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument("malformed integer: " + s);
    return v;
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
    auto cap = [&](int v) {
        if (v < 1) throw std::invalid_argument(key + " must be positive, got " + value);
        return v;
    };
    if (key == "stem_min")
        cfg.win.stem_min = to_int(value);
    else if (key == "stem_max")
        cfg.win.stem_max = to_int(value);
    else if (key == "sigma_min")
        cfg.win.sigma_min = to_int(value);
    else if (key == "sigma_max")
        cfg.win.sigma_max = to_int(value);
    else if (key == "weight_cap")
        cfg.win.weight_cap = cap(to_int(value));
    else if (key == "v_cap")
        cfg.win.v_index_cap = cap(to_int(value));
    else if (key == "asigma_cap")
        cfg.win.a_exponent_cap = cap(to_int(value));
    else if (key == "adams_cap")
        cfg.win.adams_cap = cap(to_int(value));
    else if (key == "window") {
        std::vector<int> parts;
        std::stringstream ss(value);
        std::string piece;
        while (std::getline(ss, piece, ',')) parts.push_back(to_int(trim(piece)));
        if (parts.size() != 4)
            throw std::invalid_argument(
                "window needs stem_min,stem_max,sigma_min,sigma_max: " + value);
        cfg.win.stem_min = parts[0];
        cfg.win.stem_max = parts[1];
        cfg.win.sigma_min = parts[2];
        cfg.win.sigma_max = parts[3];
    } else if (key == "out")
        cfg.out = value;
    else if (key == "format")
        cfg.format = value;
    else if (key == "seed")
        cfg.seed = std::stoull(value);
    else
        throw std::invalid_argument("unknown config key: " + key);
    if (cfg.win.stem_min > cfg.win.stem_max || cfg.win.sigma_min > cfg.win.sigma_max)
        throw std::invalid_argument("empty window range");
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config lines are key=value: " + line);
        apply_setting(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string canonical(const RunConfig& cfg) {
    std::string out;
    out += "stem_min=" + std::to_string(cfg.win.stem_min) + "\n";
    out += "stem_max=" + std::to_string(cfg.win.stem_max) + "\n";
    out += "sigma_min=" + std::to_string(cfg.win.sigma_min) + "\n";
    out += "sigma_max=" + std::to_string(cfg.win.sigma_max) + "\n";
    out += "weight_cap=" + std::to_string(cfg.win.weight_cap) + "\n";
    out += "v_cap=" + std::to_string(cfg.win.v_index_cap) + "\n";
    out += "asigma_cap=" + std::to_string(cfg.win.a_exponent_cap) + "\n";
    out += "adams_cap=" + std::to_string(cfg.win.adams_cap) + "\n";
    out += "seed=" + std::to_string(cfg.seed) + "\n";
    return out;
}

uint64_t config_hash(const RunConfig& cfg) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canonical(cfg)) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string config_header(const RunConfig& cfg) {
    char hex[32];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(config_hash(cfg)));
    std::string out = "# config " + std::string(hex) + " seed " +
                      std::to_string(cfg.seed) + "\n";
    out += "# window stems " + std::to_string(cfg.win.stem_min) + ".." +
           std::to_string(cfg.win.stem_max) + " sigma " +
           std::to_string(cfg.win.sigma_min) + ".." + std::to_string(cfg.win.sigma_max) +
           " weight<=" + std::to_string(cfg.win.weight_cap) + " v<=" +
           std::to_string(cfg.win.v_index_cap) + " a<=" +
           std::to_string(cfg.win.a_exponent_cap) + " adams<=" +
           std::to_string(cfg.win.adams_cap) + "\n";
    return out;
}

int thread_cap() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("RHOEXT_THREADS")) {
        int cap = std::atoi(env);
        if (cap < 1) cap = 1;
        if (cap < n) n = cap;
    }
    return n;
}

void parallel_for(size_t n, const std::function<void(size_t)>& f) {
    size_t workers = static_cast<size_t>(thread_cap());
    if (workers <= 1 || n <= 1) {
        for (size_t i = 0; i < n; ++i) f(i);
        return;
    }
    if (workers > n) workers = n;
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) f(i);
        });
    for (auto& t : pool) t.join();
}

}  // namespace rhoext
