#include "ghost/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace ghost {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& v, int line) {
    std::size_t pos = 0;
    double d = 0.0;
    try {
        d = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line) +
                         ": non-numeric value '" + v + "'");
    }
    if (pos != v.size()) {
        throw ParseError("line " + std::to_string(line) +
                         ": trailing characters in value '" + v + "'");
    }
    return d;
}

std::vector<double> parse_number_list(const std::string& v, int line) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) {
            throw ParseError("line " + std::to_string(line) +
                             ": empty entry in value list");
        }
        out.push_back(parse_number(item, line));
    }
    if (out.empty()) {
        throw ParseError("line " + std::to_string(line) + ": empty value list");
    }
    return out;
}

}  // namespace

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string to_string(RunMode m) {
    switch (m) {
        case RunMode::pattern: return "pattern";
        case RunMode::eraser_plus: return "eraser_plus";
        case RunMode::eraser_minus: return "eraser_minus";
        case RunMode::sweep: return "sweep";
        case RunMode::validate: return "validate";
    }
    return "pattern";
}

RunMode run_mode_from_string(const std::string& s) {
    if (s == "pattern") return RunMode::pattern;
    if (s == "eraser_plus") return RunMode::eraser_plus;
    if (s == "eraser_minus") return RunMode::eraser_minus;
    if (s == "sweep") return RunMode::sweep;
    if (s == "validate") return RunMode::validate;
    throw ParseError("unknown mode '" + s + "'");
}

DetectorModel RunConfig::detector() const {
    DetectorModel det;
    det.overlap = std::polar(overlap_magnitude, overlap_phase);
    det.orthogonal = (overlap_magnitude == 0.0);
    return det;
}

std::vector<double> RunConfig::z2_grid() const {
    double lo, hi;
    if (z2_min && z2_max) {
        lo = *z2_min;
        hi = *z2_max;
    } else {
        std::tie(lo, hi) = default_z2_window(geometry);
    }
    return uniform_grid(lo, hi, z2_points);
}

void RunConfig::validate() const {
    geometry.validate();
    if (!(overlap_magnitude >= 0.0 && overlap_magnitude <= 1.0)) {
        throw std::domain_error("overlap_magnitude must be in [0, 1]");
    }
    if (z2_points < 16) {
        throw std::domain_error("z2_points must be >= 16");
    }
    if (z2_min.has_value() != z2_max.has_value()) {
        throw std::domain_error("z2_min and z2_max must be given together");
    }
    if (z2_min && !(*z2_max > *z2_min)) {
        throw std::domain_error("z2_max must exceed z2_min");
    }
    if (normalization != "raw" && normalization != "unit_peak") {
        throw std::domain_error("normalization must be 'raw' or 'unit_peak'");
    }
    if (workers < 1) {
        throw std::domain_error("workers must be >= 1");
    }
    if (mode == RunMode::sweep) {
        if (sweep_key.empty() || sweep_values.empty()) {
            throw std::domain_error("sweep mode needs sweep_key and sweep_values");
        }
    }
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::map<std::string, bool> seen;
    bool grid_explicit_min = false, grid_explicit_max = false;

    std::stringstream ss(text);
    std::string raw;
    int line = 0;
    while (std::getline(ss, raw)) {
        ++line;
        std::string s = raw;
        const std::size_t hash = s.find('#');
        if (hash != std::string::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos) {
            throw ParseError("line " + std::to_string(line) +
                             ": expected 'key = value'");
        }
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        if (key.empty() || val.empty()) {
            throw ParseError("line " + std::to_string(line) +
                             ": empty key or value");
        }
        if (seen[key]) {
            throw ParseError("line " + std::to_string(line) +
                             ": duplicate key '" + key + "'");
        }
        seen[key] = true;

        if (key == "sigma") cfg.geometry.sigma = parse_number(val, line);
        else if (key == "omega") cfg.geometry.omega = parse_number(val, line);
        else if (key == "epsilon") cfg.geometry.epsilon = parse_number(val, line);
        else if (key == "z0") cfg.geometry.z0 = parse_number(val, line);
        else if (key == "lambda") cfg.geometry.lambda = parse_number(val, line);
        else if (key == "L1") cfg.geometry.L1 = parse_number(val, line);
        else if (key == "L2") cfg.geometry.L2 = parse_number(val, line);
        else if (key == "overlap_magnitude") cfg.overlap_magnitude = parse_number(val, line);
        else if (key == "overlap_phase") cfg.overlap_phase = parse_number(val, line);
        else if (key == "z1_fixed") cfg.z1_fixed = parse_number(val, line);
        else if (key == "z2_min") { cfg.z2_min = parse_number(val, line); grid_explicit_min = true; }
        else if (key == "z2_max") { cfg.z2_max = parse_number(val, line); grid_explicit_max = true; }
        else if (key == "z2_points") cfg.z2_points = int(parse_number(val, line));
        else if (key == "mode") cfg.mode = run_mode_from_string(val);
        else if (key == "normalization") cfg.normalization = val;
        else if (key == "out_dir") cfg.out_dir = val;
        else if (key == "sweep_key") cfg.sweep_key = val;
        else if (key == "sweep_values") cfg.sweep_values = parse_number_list(val, line);
        else if (key == "workers") cfg.workers = int(parse_number(val, line));
        else if (key == "seed") cfg.seed = static_cast<unsigned long>(parse_number(val, line));
        else {
            throw ParseError("line " + std::to_string(line) +
                             ": unknown key '" + key + "'");
        }
    }

    for (const char* req : {"sigma", "omega", "epsilon", "z0", "lambda", "L1", "L2"}) {
        if (!seen[req]) {
            throw ParseError("missing required key '" + std::string(req) + "'");
        }
    }
    (void)grid_explicit_min;
    (void)grid_explicit_max;
    return cfg;
}

std::string emit_config(const RunConfig& cfg) {
    std::ostringstream os;
    os << "sigma = " << format_full(cfg.geometry.sigma) << "\n"
       << "omega = " << format_full(cfg.geometry.omega) << "\n"
       << "epsilon = " << format_full(cfg.geometry.epsilon) << "\n"
       << "z0 = " << format_full(cfg.geometry.z0) << "\n"
       << "lambda = " << format_full(cfg.geometry.lambda) << "\n"
       << "L1 = " << format_full(cfg.geometry.L1) << "\n"
       << "L2 = " << format_full(cfg.geometry.L2) << "\n"
       << "overlap_magnitude = " << format_full(cfg.overlap_magnitude) << "\n"
       << "overlap_phase = " << format_full(cfg.overlap_phase) << "\n"
       << "z1_fixed = " << format_full(cfg.z1_fixed) << "\n";
    if (cfg.z2_min && cfg.z2_max) {
        os << "z2_min = " << format_full(*cfg.z2_min) << "\n"
           << "z2_max = " << format_full(*cfg.z2_max) << "\n";
    }
    os << "z2_points = " << cfg.z2_points << "\n"
       << "mode = " << to_string(cfg.mode) << "\n"
       << "normalization = " << cfg.normalization << "\n"
       << "out_dir = " << cfg.out_dir << "\n";
    if (!cfg.sweep_key.empty()) {
        os << "sweep_key = " << cfg.sweep_key << "\n";
        os << "sweep_values = ";
        for (std::size_t i = 0; i < cfg.sweep_values.size(); ++i) {
            if (i) os << ", ";
            os << format_full(cfg.sweep_values[i]);
        }
        os << "\n";
    }
    os << "workers = " << cfg.workers << "\n"
       << "seed = " << cfg.seed << "\n";
    return os.str();
}

}  // namespace ghost
