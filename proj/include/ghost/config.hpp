// Plain-text "key = value" run configuration: parsing, validation,
// defaulting and re-emission.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ghost/experiment.hpp"

namespace ghost {

/// Malformed config text; the message names the offending line.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class RunMode { pattern, eraser_plus, eraser_minus, sweep, validate };

std::string to_string(RunMode m);
RunMode run_mode_from_string(const std::string& s);

struct RunConfig {
    Geometry geometry;
    double overlap_magnitude = 0.0;
    double overlap_phase = 0.0;
    double z1_fixed = 0.0;
    // Grid; z2_min/z2_max default to a window derived from the geometry.
    std::optional<double> z2_min;
    std::optional<double> z2_max;
    int z2_points = 2048;
    RunMode mode = RunMode::pattern;
    std::string normalization = "raw";
    std::string out_dir = ".";
    // Sweep specification: one config key swept over explicit values.
    std::string sweep_key;
    std::vector<double> sweep_values;
    int workers = 1;
    unsigned long seed = 0;

    DetectorModel detector() const;
    std::vector<double> z2_grid() const;

    /// Throws std::domain_error on invariant violations.
    void validate() const;
};

/// Parses "key = value" lines with '#' comments; unknown keys are rejected.
/// All seven geometry keys are required.
RunConfig parse_config(const std::string& text);

/// Serializes with 17 significant digits; parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& cfg);

/// 17-significant-digit decimal form used by all text outputs.
std::string format_full(double v);

}  // namespace ghost
