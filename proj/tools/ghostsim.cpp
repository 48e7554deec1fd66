// ghostsim: ghost-interference simulator front end.
//
// Subcommands: pattern, eraser, sweep, validate. Each reads a plain-text
// "key = value" config; command-line flags override file values.
// Exit codes: 0 success, 1 usage/parse error, 2 domain error,
// 3 validation failure.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ghost/run.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw ghost::ParseError("cannot read config file " + path);
    }
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

struct Overrides {
    std::string out_dir;
    int workers = -1;
    long long seed = -1;
};

void apply(ghost::RunConfig& cfg, const Overrides& o) {
    if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
    if (o.workers > 0) cfg.workers = o.workers;
    if (o.seed >= 0) cfg.seed = static_cast<unsigned long>(o.seed);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ghost-interference simulator"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides ov;
    app.add_option("--config", config_path, "path to run config")
        ->required();
    app.add_option("--out", ov.out_dir, "output directory (overrides config)");
    app.add_option("--workers", ov.workers, "sweep worker count");
    app.add_option("--seed", ov.seed,
                   "seed recorded in summaries (reserved for stochastic runs)");

    auto* sub_pattern = app.add_subcommand("pattern", "coincidence pattern run");
    auto* sub_eraser = app.add_subcommand("eraser", "eraser plus/minus run");
    auto* sub_sweep = app.add_subcommand("sweep", "parameter sweep");
    auto* sub_validate = app.add_subcommand("validate", "oracle comparison suite");
    for (CLI::App* s : {sub_pattern, sub_eraser, sub_sweep, sub_validate}) {
        s->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 1 : 0;
    }

    try {
        ghost::RunConfig cfg = ghost::parse_config(read_file(config_path));
        apply(cfg, ov);

        if (sub_pattern->parsed()) {
            if (cfg.mode != ghost::RunMode::eraser_plus &&
                cfg.mode != ghost::RunMode::eraser_minus) {
                cfg.mode = ghost::RunMode::pattern;
            }
            ghost::cmd_pattern(cfg);
        } else if (sub_eraser->parsed()) {
            ghost::cmd_eraser(cfg);
        } else if (sub_sweep->parsed()) {
            cfg.mode = ghost::RunMode::sweep;
            ghost::cmd_sweep(cfg);
        } else if (sub_validate->parsed()) {
            const ghost::ValidationReport rep =
                ghost::cmd_validate(cfg, std::cout);
            if (!rep.ok()) return 3;
        }
        return 0;
    } catch (const ghost::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
