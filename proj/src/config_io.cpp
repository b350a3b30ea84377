#include "nclmat/config_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace nclmat {

namespace {

std::string trim(std::string_view s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string_view::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(begin, end - begin + 1));
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: bad number for '" + key + "': '" + value + "'");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const std::uint64_t v = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: bad integer for '" + key + "': '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    const std::string v = lower(value);
    if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
    if (v == "false" || v == "no" || v == "0" || v == "off") return false;
    throw ConfigError("config: bad boolean for '" + key + "': '" + value + "'");
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

AlgoConfig parse_algorithm(const std::string& value) {
    const auto tokens = split_ws(value);
    if (tokens.empty()) throw ConfigError("config: empty algorithm entry");

    AlgoConfig algo;
    const auto kind = parse_algo_kind(lower(tokens[0]));
    if (!kind) throw ConfigError("config: unknown algorithm kind '" + tokens[0] + "'");
    algo.kind = *kind;
    algo.name = algo_kind_name(*kind);

    for (std::size_t i = 1; i < tokens.size(); ++i) {
        const auto eq = tokens[i].find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config: algorithm option '" + tokens[i] + "' is not key=value");
        }
        const std::string key = lower(tokens[i].substr(0, eq));
        const std::string val = tokens[i].substr(eq + 1);
        if (key == "alpha" || key == "mu") {
            algo.params.alpha = parse_double(key, val);
        } else if (key == "beta") {
            algo.params.beta = parse_double(key, val);
        } else if (key == "gamma") {
            algo.params.gamma = parse_double(key, val);
        } else if (key == "jmin") {
            const auto mode = parse_jmin_mode(lower(val));
            if (!mode) throw ConfigError("config: unknown jmin mode '" + val + "'");
            algo.jmin_mode = *mode;
        } else if (key == "name") {
            algo.name = val;
        } else {
            throw ConfigError("config: unknown algorithm option '" + key + "'");
        }
    }
    return algo;
}

}  // namespace

ExperimentConfig load_config(std::istream& in) {
    ExperimentConfig cfg;
    cfg.plant.w_opt.clear();

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;

        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = lower(trim(stripped.substr(0, eq)));
        const std::string value = trim(stripped.substr(eq + 1));
        if (value.empty()) {
            throw ConfigError("config line " + std::to_string(line_no) + ": empty value for '" +
                              key + "'");
        }

        if (key == "description") {
            cfg.description = value;
        } else if (key == "plant") {
            cfg.plant.w_opt.clear();
            for (const auto& tok : split_ws(value)) {
                cfg.plant.w_opt.push_back(parse_double(key, tok));
            }
        } else if (key == "plant_mode") {
            const std::string mode = lower(value);
            if (mode == "stationary") {
                cfg.plant.mode = PlantMode::stationary;
            } else if (mode == "random_walk") {
                cfg.plant.mode = PlantMode::random_walk;
            } else {
                throw ConfigError("config: unknown plant_mode '" + value + "'");
            }
        } else if (key == "walk_variance") {
            cfg.plant.walk_variance = parse_double(key, value);
        } else if (key == "input") {
            const std::string kind = lower(value);
            if (kind == "white") {
                cfg.input = InputKind::white;
            } else if (kind == "ar1") {
                cfg.input = InputKind::ar1;
            } else {
                throw ConfigError("config: unknown input kind '" + value + "'");
            }
        } else if (key == "ar1_rho") {
            cfg.ar1_rho = parse_double(key, value);
        } else if (key == "input_variance") {
            cfg.input_variance = parse_double(key, value);
        } else if (key == "noise_family") {
            const auto family = parse_family(lower(value));
            if (!family) throw ConfigError("config: unknown noise_family '" + value + "'");
            cfg.noise_family = *family;
        } else if (key == "snr_db") {
            cfg.snr_db = parse_double(key, value);
        } else if (key == "noise_variance") {
            cfg.noise_variance = parse_double(key, value);
        } else if (key == "iterations") {
            cfg.iterations = static_cast<std::size_t>(parse_u64(key, value));
        } else if (key == "trials") {
            cfg.trials = static_cast<std::size_t>(parse_u64(key, value));
        } else if (key == "seed") {
            cfg.seed = Seed{parse_u64(key, value)};
        } else if (key == "theory_overlay") {
            cfg.theory_overlay = parse_bool(key, value);
        } else if (key == "algorithm") {
            cfg.algorithms.push_back(parse_algorithm(value));
        } else {
            throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key +
                              "'");
        }
    }

    try {
        cfg.validate();
    } catch (const std::invalid_argument& err) {
        throw ConfigError(std::string("config: ") + err.what());
    }
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    return load_config(in);
}

}  // namespace nclmat
