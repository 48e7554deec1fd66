#include "ghost/run.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace ghost {

BranchedState build_branches(const Geometry& geom, const DetectorModel& det) {
    geom.validate();
    BipartiteGaussianState psi = make_epr(geom.sigma, geom.omega);
    psi = free_evolve(psi, EvolutionParam(geom.tau0()));
    BranchedState bs = apply_double_slit(psi, geom, det);
    return propagate_branches(bs, EvolutionParam(geom.tau1()));
}

Pattern run_pattern(const RunConfig& cfg) {
    cfg.validate();
    const DetectorModel det = cfg.detector();
    const std::vector<double> grid = cfg.z2_grid();
    Pattern p;
    switch (cfg.mode) {
        case RunMode::eraser_plus: {
            DetectorModel orth;
            orth.orthogonal = true;
            const BranchedState bs = build_branches(cfg.geometry, orth);
            p = eraser_pattern(bs, EraserBasis::plus, cfg.z1_fixed, grid);
            break;
        }
        case RunMode::eraser_minus: {
            DetectorModel orth;
            orth.orthogonal = true;
            const BranchedState bs = build_branches(cfg.geometry, orth);
            p = eraser_pattern(bs, EraserBasis::minus, cfg.z1_fixed, grid);
            break;
        }
        default: {
            const BranchedState bs = build_branches(cfg.geometry, det);
            p = coincidence_pattern(bs, det, cfg.z1_fixed, grid);
            break;
        }
    }
    p.metadata.geometry = cfg.geometry;
    if (cfg.normalization == "unit_peak") p = unit_peak(p);
    return p;
}

Summary summarize(const RunConfig& cfg, const Pattern& p) {
    Summary s;
    const DetectorModel det = cfg.detector();
    const bool eraser = (cfg.mode == RunMode::eraser_plus ||
                         cfg.mode == RunMode::eraser_minus);
    s.distinguishability = eraser ? 1.0 : distinguishability(det);
    s.peak_visibility = eraser ? 1.0 : std::abs(det.overlap);
    const VisibilityResult v = measured_visibility(p, 0.0);
    s.measured_visibility = v.value;
    // After erasure the which-path record is destroyed, so the bound is
    // evaluated with zero distinguishability.
    const double d_eff = eraser ? 0.0 : s.distinguishability;
    const double vv = std::min(1.0, v.value);
    s.duality_margin = 1.0 - (d_eff * d_eff + vv * vv);
    s.fringe_spacing = (cfg.geometry.z0 > 0.0)
                           ? fringe_spacing(cfg.geometry)
                           : std::numeric_limits<double>::quiet_NaN();
    const BranchedState bs = build_branches(
        cfg.geometry, eraser ? DetectorModel{cplx{0.0}, true} : det);
    s.pass_probability = bs.pass_probability;
    s.seed = cfg.seed;
    return s;
}

std::string pattern_csv(const Pattern& p) {
    std::ostringstream os;
    os << "z2,intensity\n";
    for (std::size_t i = 0; i < p.z2_samples.size(); ++i) {
        os << format_full(p.z2_samples[i]) << ','
           << format_full(p.intensity[i]) << '\n';
    }
    return os.str();
}

std::string summary_json(const Summary& s) {
    nlohmann::ordered_json j;
    j["distinguishability"] = s.distinguishability;
    j["peak_visibility"] = s.peak_visibility;
    j["measured_visibility"] = s.measured_visibility;
    j["duality_margin"] = s.duality_margin;
    if (std::isnan(s.fringe_spacing)) j["fringe_spacing"] = nullptr;
    else j["fringe_spacing"] = s.fringe_spacing;
    j["pass_probability"] = s.pass_probability;
    j["seed"] = s.seed;
    return j.dump(2) + "\n";
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw std::runtime_error("cannot open output file " + path.string());
    }
    os << content;
    if (!os) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

}  // namespace

void cmd_pattern(const RunConfig& cfg) {
    const Pattern p = run_pattern(cfg);
    const Summary s = summarize(cfg, p);
    const std::filesystem::path dir(cfg.out_dir);
    std::filesystem::create_directories(dir);
    write_file(dir / "pattern.csv", pattern_csv(p));
    write_file(dir / "summary.json", summary_json(s));
}

void cmd_eraser(const RunConfig& cfg) {
    RunConfig plus = cfg;
    plus.mode = RunMode::eraser_plus;
    RunConfig minus = cfg;
    minus.mode = RunMode::eraser_minus;
    const Pattern pp = run_pattern(plus);
    const Pattern pm = run_pattern(minus);
    const Summary s = summarize(plus, pp);
    const std::filesystem::path dir(cfg.out_dir);
    std::filesystem::create_directories(dir);
    write_file(dir / "eraser_plus.csv", pattern_csv(pp));
    write_file(dir / "eraser_minus.csv", pattern_csv(pm));
    write_file(dir / "summary.json", summary_json(s));
}

RunConfig with_swept_value(const RunConfig& cfg, const std::string& key,
                           double value) {
    RunConfig c = cfg;
    c.mode = RunMode::pattern;
    c.sweep_key.clear();
    c.sweep_values.clear();
    if (key == "overlap_magnitude") c.overlap_magnitude = value;
    else if (key == "overlap_phase") c.overlap_phase = value;
    else if (key == "z1_fixed") c.z1_fixed = value;
    else if (key == "sigma") c.geometry.sigma = value;
    else if (key == "omega") c.geometry.omega = value;
    else if (key == "epsilon") c.geometry.epsilon = value;
    else if (key == "z0") c.geometry.z0 = value;
    else if (key == "lambda") c.geometry.lambda = value;
    else if (key == "L1") c.geometry.L1 = value;
    else if (key == "L2") c.geometry.L2 = value;
    else {
        throw std::domain_error("sweep_key '" + key + "' is not sweepable");
    }
    c.validate();
    return c;
}

std::string sweep_csv_header(const std::string& key) {
    return "index," + key +
           ",distinguishability,peak_visibility,measured_visibility,"
           "duality_margin,fringe_spacing,pass_probability\n";
}

std::string sweep_csv_row(int index, double value, const Summary& s) {
    std::ostringstream os;
    os << index << ',' << format_full(value) << ','
       << format_full(s.distinguishability) << ','
       << format_full(s.peak_visibility) << ','
       << format_full(s.measured_visibility) << ','
       << format_full(s.duality_margin) << ','
       << (std::isnan(s.fringe_spacing) ? std::string("nan")
                                        : format_full(s.fringe_spacing))
       << ',' << format_full(s.pass_probability) << '\n';
    return os.str();
}

void cmd_sweep(const RunConfig& cfg) {
    cfg.validate();
    if (cfg.sweep_key.empty() || cfg.sweep_values.empty()) {
        throw std::domain_error("sweep requires sweep_key and sweep_values");
    }
    const int n = int(cfg.sweep_values.size());
    std::vector<std::string> rows(n);
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex err_mutex;

    auto work = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n) return;
            try {
                const RunConfig c =
                    with_swept_value(cfg, cfg.sweep_key, cfg.sweep_values[i]);
                const Pattern p = run_pattern(c);
                rows[i] = sweep_csv_row(i, cfg.sweep_values[i], summarize(c, p));
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    const int nworkers = std::min(cfg.workers, n);
    std::vector<std::thread> threads;
    for (int i = 0; i < nworkers - 1; ++i) threads.emplace_back(work);
    work();
    for (auto& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);

    std::string csv = sweep_csv_header(cfg.sweep_key);
    for (const std::string& r : rows) csv += r;
    const std::filesystem::path dir(cfg.out_dir);
    std::filesystem::create_directories(dir);
    write_file(dir / "sweep.csv", csv);
}

bool ValidationReport::ok() const {
    for (const auto& c : checks) {
        if (!c.pass) return false;
    }
    return true;
}

ValidationReport cmd_validate(const RunConfig& cfg, std::ostream& out) {
    cfg.validate();
    ValidationReport rep;
    auto add = [&](const std::string& name, double value, double threshold) {
        ValidationCheck c{name, value, threshold, value <= threshold};
        out << (c.pass ? "ok   " : "FAIL ") << name << "  value=" << value
            << "  threshold=" << threshold << "\n";
        rep.checks.push_back(c);
    };

    // Momentum-space propagation against the closed form.
    {
        const GaussianPacket p0 =
            GaussianPacket(cplx{0.0}, 1.0, cplx{2.0, 0.0}).normalized();
        const EvolutionParam tau(1.5);
        const Grid1D g = sample_packet(p0, 40.0, 2048);
        const Grid1D gt = momentum_space_propagate(g, tau);
        const GaussianPacket pt = free_evolve(p0, tau);
        double err = 0.0;
        for (int i = 0; i < gt.n_points; ++i) {
            err = std::max(err, std::abs(gt.samples[i] - pt(gt.coord(i))));
        }
        add("momentum_propagate_vs_closed_form", err, 1e-8);
        add("momentum_propagate_norm_drift",
            std::abs(gt.norm_sq() - g.norm_sq()), 1e-12);
    }

    // Quadrature projection against the closed form.
    {
        const Geometry& g = cfg.geometry;
        BipartiteGaussianState psi = make_epr(g.sigma, g.omega);
        psi = free_evolve(psi, EvolutionParam(g.tau0()));
        const GaussianPacket probe = slit_packet(g.z0, g.epsilon);
        const double H = default_half_extent(g);
        const Grid2D grid = sample_bipartite(psi, H, 2048);
        const Grid1D proj = quadrature_project(grid, probe);
        const GaussianPacket closed = project_particle1(psi, probe);
        double err = 0.0;
        for (int i = 0; i < proj.n_points; ++i) {
            err = std::max(err, std::abs(proj.samples[i] - closed(proj.coord(i))));
        }
        add("quadrature_project_vs_closed_form", err, 1e-8);
    }

    // Analytic pipeline against the end-to-end numeric rebuild.
    {
        const double mags[] = {0.0, 0.5, 1.0};
        for (double m : mags) {
            RunConfig c = cfg;
            c.mode = RunMode::pattern;
            c.overlap_magnitude = m;
            const Pattern analytic = run_pattern(c);
            const Pattern numeric = pattern_numeric(
                c.geometry, c.detector(), c.z1_fixed, analytic.z2_samples);
            Pattern an_raw = analytic;
            an_raw.metadata.normalization_mode = "raw";
            const ComparisonReport r = compare_patterns(an_raw, numeric);
            add("pattern_analytic_vs_numeric_overlap_" + format_full(m),
                r.max_rel_error, 1e-6);
        }
    }

    // Eraser sum rule against the fringeless pattern.
    {
        RunConfig plus = cfg;
        plus.mode = RunMode::eraser_plus;
        plus.normalization = "raw";
        RunConfig minus = plus;
        minus.mode = RunMode::eraser_minus;
        RunConfig zero = plus;
        zero.mode = RunMode::pattern;
        zero.overlap_magnitude = 0.0;
        const Pattern pp = run_pattern(plus);
        const Pattern pm = run_pattern(minus);
        const Pattern pz = run_pattern(zero);
        double peak = 0.0, err = 0.0;
        for (double v : pz.intensity) peak = std::max(peak, v);
        for (std::size_t i = 0; i < pz.intensity.size(); ++i) {
            err = std::max(err, std::abs(pp.intensity[i] + pm.intensity[i] -
                                         pz.intensity[i]));
        }
        add("eraser_sum_rule", err / peak, 1e-12);
    }

    out << (rep.ok() ? "validation passed" : "validation FAILED") << "\n";
    return rep;
}

}  // namespace ghost
