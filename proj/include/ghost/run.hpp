// Experiment drivers shared by the CLI and the tests: pipeline assembly,
// summaries, CSV/JSON emission, sweeps and the oracle validation suite.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ghost/config.hpp"
#include "ghost/oracle.hpp"

namespace ghost {

/// Source -> evolve to the slit plane -> double slit -> propagate to the
/// detectors.
BranchedState build_branches(const Geometry& geom, const DetectorModel& det);

/// Pattern for the configured mode (pattern / eraser_plus / eraser_minus),
/// with the configured normalization applied.
Pattern run_pattern(const RunConfig& cfg);

struct Summary {
    double distinguishability = 0.0;
    double peak_visibility = 0.0;
    double measured_visibility = 0.0;
    double duality_margin = 0.0;
    double fringe_spacing = 0.0;  // NaN when z0 = 0
    double pass_probability = 0.0;
    unsigned long seed = 0;
};

Summary summarize(const RunConfig& cfg, const Pattern& p);

std::string pattern_csv(const Pattern& p);
std::string summary_json(const Summary& s);
std::string sweep_csv_header(const std::string& key);
std::string sweep_csv_row(int index, double value, const Summary& s);

/// Writes pattern.csv and summary.json into cfg.out_dir.
void cmd_pattern(const RunConfig& cfg);

/// Writes eraser_plus.csv, eraser_minus.csv and summary.json (plus basis).
void cmd_eraser(const RunConfig& cfg);

/// Writes sweep.csv: one row per sweep value, ordered by index regardless
/// of worker completion order.
void cmd_sweep(const RunConfig& cfg);

/// Returns a modified config with the swept key set to the given value.
RunConfig with_swept_value(const RunConfig& cfg, const std::string& key,
                           double value);

struct ValidationCheck {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool ok() const;
};

/// Oracle comparison suite; prints one line per check to `out`.
ValidationReport cmd_validate(const RunConfig& cfg, std::ostream& out);

}  // namespace ghost
