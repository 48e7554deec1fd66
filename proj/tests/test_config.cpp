// Config parsing / emission tests.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "ghost/config.hpp"

using namespace ghost;

namespace {

const char* kMinimal =
    "sigma = 2\n"
    "omega = 50\n"
    "epsilon = 0.25\n"
    "z0 = 1\n"
    "lambda = 0.4\n"
    "L1 = 10\n"
    "L2 = 5\n";

}  // namespace

TEST_CASE("minimal config fills defaults") {
    const RunConfig cfg = parse_config(kMinimal);
    CHECK(cfg.geometry.sigma == 2.0);
    CHECK(cfg.geometry.omega == 50.0);
    CHECK(cfg.overlap_magnitude == 0.0);
    CHECK(cfg.z1_fixed == 0.0);
    CHECK(cfg.z2_points == 2048);
    CHECK(cfg.mode == RunMode::pattern);
    CHECK(cfg.normalization == "raw");
    CHECK(cfg.workers == 1);
    CHECK(!cfg.z2_min.has_value());
    const auto grid = cfg.z2_grid();
    CHECK(int(grid.size()) == 2048);
    CHECK(grid.front() == doctest::Approx(-grid.back()));
    cfg.validate();
}

TEST_CASE("comments, blank lines and full keys") {
    std::string text = kMinimal;
    text +=
        "\n# detector\n"
        "overlap_magnitude = 0.5\n"
        "overlap_phase = 0.25\n"
        "z1_fixed = 0.3\n"
        "z2_min = -20\n"
        "z2_max = 20\n"
        "z2_points = 512\n"
        "mode = eraser_plus\n"
        "normalization = unit_peak\n"
        "workers = 4\n"
        "seed = 123\n";
    const RunConfig cfg = parse_config(text);
    CHECK(cfg.overlap_magnitude == 0.5);
    CHECK(cfg.mode == RunMode::eraser_plus);
    CHECK(cfg.z2_min.value() == -20.0);
    CHECK(cfg.seed == 123);
    CHECK(cfg.z2_grid().size() == 512);
}

TEST_CASE("errors name the offending input") {
    SUBCASE("unknown key with line number") {
        try {
            parse_config(std::string(kMinimal) + "sigmaa = 3\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            const std::string msg = e.what();
            CHECK(msg.find("sigmaa") != std::string::npos);
            CHECK(msg.find("8") != std::string::npos);  // line number
        }
    }

    SUBCASE("duplicate key") {
        CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "sigma = 3\n"),
                        ParseError);
    }

    SUBCASE("missing geometry key") {
        CHECK_THROWS_AS(parse_config("sigma = 2\nomega = 50\n"), ParseError);
    }

    SUBCASE("malformed number") {
        CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "z1_fixed = abc\n"),
                        ParseError);
    }

    SUBCASE("invalid domain names the parameter") {
        std::string text = kMinimal;
        text.replace(text.find("sigma = 2"), 9, "sigma = -1");
        const RunConfig cfg = parse_config(text);
        try {
            cfg.validate();
            FAIL("expected domain_error");
        } catch (const std::domain_error& e) {
            CHECK(std::string(e.what()).find("sigma") != std::string::npos);
        }
    }

    SUBCASE("overlap magnitude above one") {
        const RunConfig cfg =
            parse_config(std::string(kMinimal) + "overlap_magnitude = 1.5\n");
        CHECK_THROWS_AS(cfg.validate(), std::domain_error);
    }

    SUBCASE("bad mode string") {
        CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "mode = nonsense\n"),
                        ParseError);
    }

    SUBCASE("sweep mode requires key and values") {
        const RunConfig cfg =
            parse_config(std::string(kMinimal) + "mode = sweep\n");
        CHECK_THROWS_AS(cfg.validate(), std::domain_error);
    }
}

TEST_CASE("emission round-trips exactly") {
    std::string text = kMinimal;
    text +=
        "overlap_magnitude = 0.70710678118654757\n"
        "overlap_phase = 1.1000000000000001\n"
        "z2_min = -31.25\n"
        "z2_max = 31.25\n"
        "mode = eraser_minus\n";
    const RunConfig a = parse_config(text);
    const std::string emitted = emit_config(a);
    const RunConfig b = parse_config(emitted);
    CHECK(b.overlap_magnitude == a.overlap_magnitude);
    CHECK(b.overlap_phase == a.overlap_phase);
    CHECK(b.geometry.sigma == a.geometry.sigma);
    CHECK(b.z2_min.value() == a.z2_min.value());
    CHECK(b.mode == a.mode);
    CHECK(emit_config(b) == emitted);
}

TEST_CASE("full-precision formatting survives a round trip") {
    for (double v : {1.0 / 3.0, 0.1, 12345.6789012345678, 1e-300}) {
        CHECK(std::stod(format_full(v)) == v);
    }
}
