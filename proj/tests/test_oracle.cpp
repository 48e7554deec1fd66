// Tests for the grid/quadrature/FFT verification path.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ghost/experiment.hpp"
#include "ghost/oracle.hpp"
#include "ghost/run.hpp"

using namespace ghost;

namespace {

Geometry small_geometry() {
    Geometry g;
    g.sigma = 2.0;
    g.omega = 10.0;
    g.epsilon = 0.5;
    g.z0 = 1.5;
    g.lambda = 0.5;
    g.L1 = 12.0;
    g.L2 = 4.0;
    return g;
}

DetectorModel detector(double mag, double phase = 0.0) {
    DetectorModel d;
    d.overlap = std::polar(mag, phase);
    d.orthogonal = (mag == 0.0);
    return d;
}

}  // namespace

TEST_CASE("grid sampling") {
    SUBCASE("packet samples match pointwise evaluation, norm to 1e-9") {
        const GaussianPacket p =
            GaussianPacket(cplx{0.0}, 0.7, cplx{1.3, 0.4}, 2.0).normalized();
        const Grid1D g = sample_packet(p, 40.0, 1024);
        CHECK(g.samples[512] == p(g.coord(512)));
        CHECK(g.norm_sq() == doctest::Approx(1.0).epsilon(1e-9));
    }

    SUBCASE("bipartite samples match pointwise evaluation, norm to 1e-9") {
        BipartiteGaussianState s = make_epr(2.0, 8.0);
        s = free_evolve(s, EvolutionParam(0.3));
        const Grid2D g = sample_bipartite(s, 80.0, 1024);
        CHECK(g.at(100, 900) == s(g.coord(100), g.coord(900)));
        CHECK(g.norm_sq() == doctest::Approx(1.0).epsilon(1e-9));
    }

    SUBCASE("grid too small for the support is rejected") {
        const GaussianPacket p =
            GaussianPacket(cplx{0.0}, 30.0, cplx{4.0, 0.0}, 0.0).normalized();
        CHECK_THROWS_AS(sample_packet(p, 35.0, 1024), ResolutionError);
    }

    SUBCASE("grid too coarse for the phase is rejected with a suggestion") {
        const GaussianPacket p =
            GaussianPacket(cplx{0.0}, 0.0, cplx{1.0, 0.0}, 200.0).normalized();
        try {
            sample_packet(p, 20.0, 64);
            FAIL("expected ResolutionError");
        } catch (const ResolutionError& e) {
            CHECK(e.suggested_n_points > 64);
        }
    }

    SUBCASE("non-power-of-two point counts are rejected") {
        const GaussianPacket p = slit_packet(0.0, 1.0);
        CHECK_THROWS_AS(sample_packet(p, 20.0, 1000), std::domain_error);
    }
}

TEST_CASE("quadrature projection") {
    BipartiteGaussianState s = make_epr(2.0, 8.0);
    s = free_evolve(s, EvolutionParam(0.4));
    const Grid2D g = sample_bipartite(s, 80.0, 2048);
    const GaussianPacket probe = slit_packet(1.2, 0.6);
    const Grid1D proj = quadrature_project(g, probe);
    const GaussianPacket closed = project_particle1(s, probe);

    SUBCASE("matches the closed-form projection to 1e-8") {
        double max_err = 0.0;
        for (int i = 0; i < proj.n_points; i += 7) {
            max_err = std::max(max_err,
                               std::abs(proj.samples[i] - closed(proj.coord(i))));
        }
        CHECK(max_err < 1e-8);
        CHECK(proj.norm_sq() == doctest::Approx(closed.norm_sq()).epsilon(1e-8));
    }

    SUBCASE("probe far outside the support projects to nothing") {
        const Grid1D far = quadrature_project(g, slit_packet(70.0, 0.6));
        CHECK(far.norm_sq() <= 1e-12);
    }

    SUBCASE("linear in the state") {
        Grid2D g2 = g;
        for (auto& v : g2.samples) v *= cplx{2.0, 0.0};
        const Grid1D proj2 = quadrature_project(g2, probe);
        CHECK(std::abs(proj2.samples[1000] - 2.0 * proj.samples[1000]) < 1e-14);
    }
}

TEST_CASE("momentum-space propagation") {
    const GaussianPacket p =
        GaussianPacket(cplx{0.0}, 0.5, cplx{0.8, 0.0}, 3.0).normalized();
    const Grid1D g = sample_packet(p, 60.0, 2048);

    SUBCASE("matches the closed-form evolution to 1e-8") {
        const double tau = 1.7;
        const Grid1D evolved = momentum_space_propagate(g, EvolutionParam(tau));
        const GaussianPacket closed = free_evolve(p, EvolutionParam(tau));
        double max_err = 0.0;
        for (int i = 0; i < evolved.n_points; i += 5) {
            max_err = std::max(
                max_err, std::abs(evolved.samples[i] - closed(evolved.coord(i))));
        }
        CHECK(max_err < 1e-8);
        CHECK(evolved.norm_sq() == doctest::Approx(g.norm_sq()).epsilon(1e-12));
    }

    SUBCASE("tau = 0 is the identity") {
        const Grid1D same = momentum_space_propagate(g, EvolutionParam(0.0));
        for (int i = 0; i < g.n_points; i += 101) {
            CHECK(same.samples[i] == g.samples[i]);
        }
    }

    SUBCASE("band-edge occupation is rejected") {
        Grid1D chirp(20.0, 256);
        const double k_edge = kPi / chirp.spacing() * 0.98;
        for (int i = 0; i < chirp.n_points; ++i) {
            const double z = chirp.coord(i);
            chirp.samples[i] = std::exp(cplx(0.0, k_edge * z) - z * z / 100.0);
        }
        try {
            momentum_space_propagate(chirp, EvolutionParam(0.5));
            FAIL("expected ResolutionError");
        } catch (const ResolutionError& e) {
            CHECK(e.suggested_n_points >= 512);
        }
    }

    SUBCASE("2D propagation matches the closed-form bipartite evolution") {
        BipartiteGaussianState s = make_epr(1.5, 6.0);
        const Grid2D gs = sample_bipartite(s, 60.0, 1024);
        const double tau = 0.9;
        const Grid2D evolved = momentum_space_propagate(gs, EvolutionParam(tau));
        const BipartiteGaussianState closed = free_evolve(s, EvolutionParam(tau));
        double max_err = 0.0;
        for (int i = 0; i < 1024; i += 37) {
            for (int j = 0; j < 1024; j += 41) {
                max_err = std::max(
                    max_err, std::abs(evolved.at(i, j) -
                                      closed(evolved.coord(i), evolved.coord(j))));
            }
        }
        CHECK(max_err < 1e-8);
        CHECK(evolved.norm_sq() == doctest::Approx(gs.norm_sq()).epsilon(1e-12));
    }
}

TEST_CASE("band-limited evaluation at arbitrary points") {
    const GaussianPacket p =
        GaussianPacket(cplx{0.0}, -0.3, cplx{1.1, 0.2}, 1.5).normalized();
    const Grid1D g = sample_packet(p, 50.0, 2048);
    const double tau = 0.8;
    const GaussianPacket closed = free_evolve(p, EvolutionParam(tau));
    const std::vector<double> zs{-3.123456, -0.5, 0.0, 0.77, 2.9181};
    const std::vector<cplx> vals = propagate_and_evaluate(g, EvolutionParam(tau), zs);
    REQUIRE(vals.size() == zs.size());
    for (std::size_t i = 0; i < zs.size(); ++i) {
        CHECK(std::abs(vals[i] - closed(zs[i])) < 1e-9);
    }
    CHECK(std::abs(propagate_and_evaluate(g, EvolutionParam(tau), 0.77) -
                   vals[3]) == 0.0);
}

TEST_CASE("end-to-end numeric pattern") {
    const Geometry g = small_geometry();
    const auto [lo, hi] = default_z2_window(g);
    const std::vector<double> grid = uniform_grid(lo, hi, 1024);

    SUBCASE("matches the analytic pipeline to 1e-6") {
        for (double mag : {0.0, 0.5, 1.0}) {
            const DetectorModel det = detector(mag, mag == 0.5 ? 0.8 : 0.0);
            const BranchedState bs = build_branches(g, det);
            const Pattern analytic =
                unit_peak(coincidence_pattern(bs, det, 0.3, grid));
            const Pattern numeric = unit_peak(pattern_numeric(g, det, 0.3, grid));
            const ComparisonReport r = compare_patterns(analytic, numeric);
            CHECK(r.max_rel_error < 1e-6);
            CHECK(r.l2_error < 1e-6);
        }
    }

    SUBCASE("zero overlap leaves no numeric fringes") {
        const DetectorModel det = detector(0.0);
        const Pattern numeric = pattern_numeric(g, det, 0.0, grid);
        const VisibilityResult v = measured_visibility(numeric, 0.0);
        CHECK(v.value <= 1e-6);
    }

    SUBCASE("wide source approaches the closed-form pattern") {
        Geometry gw = small_geometry();
        gw.omega = 100.0 * std::max(gw.epsilon, 1.0 / gw.sigma);
        const DetectorModel det = detector(1.0);
        const auto [wlo, whi] = default_z2_window(gw);
        const std::vector<double> wgrid = uniform_grid(wlo, whi, 1024);
        const Pattern numeric =
            unit_peak(pattern_numeric(gw, det, 0.0, wgrid, 4096));
        const Pattern approx = unit_peak(closed_form_pattern(gw, det, wgrid));
        const ComparisonReport r = compare_patterns(numeric, approx);
        CHECK(r.max_rel_error < 0.02);
    }
}

TEST_CASE("compare_patterns") {
    const Geometry g = small_geometry();
    const DetectorModel det = detector(0.5);
    const BranchedState bs = build_branches(g, det);
    const auto [lo, hi] = default_z2_window(g);
    const std::vector<double> grid = uniform_grid(lo, hi, 512);
    const Pattern p = coincidence_pattern(bs, det, 0.0, grid);

    SUBCASE("identity compares to zero error") {
        const ComparisonReport r = compare_patterns(p, p);
        CHECK(r.max_abs_error == 0.0);
        CHECK(r.max_rel_error == 0.0);
        CHECK(r.l2_error == 0.0);
    }

    SUBCASE("known perturbation is reported at the right place") {
        Pattern q = p;
        double peak = 0.0;
        for (double v : q.intensity) peak = std::max(peak, v);
        q.intensity[100] += 0.25 * peak;
        const ComparisonReport r = compare_patterns(q, p);
        CHECK(r.max_rel_error == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(r.location_of_max == doctest::Approx(grid[100]));
    }

    SUBCASE("mismatched grids are rejected") {
        Pattern q = p;
        q.z2_samples[5] += 0.1;
        CHECK_THROWS_AS(compare_patterns(q, p), std::domain_error);
    }
}

TEST_CASE("grid refinement improves agreement") {
    const Geometry g = small_geometry();
    const DetectorModel det = detector(1.0);
    const BranchedState bs = build_branches(g, det);
    const auto [lo, hi] = default_z2_window(g);
    const std::vector<double> grid = uniform_grid(lo, hi, 512);
    const Pattern analytic = unit_peak(coincidence_pattern(bs, det, 0.0, grid));
    const Pattern coarse = unit_peak(pattern_numeric(g, det, 0.0, grid, 1024));
    const Pattern fine = unit_peak(pattern_numeric(g, det, 0.0, grid, 2048));
    const double ec = compare_patterns(analytic, coarse).max_rel_error;
    const double ef = compare_patterns(analytic, fine).max_rel_error;
    CHECK(ef < ec);
    CHECK(ec < 1e-4);
    CHECK(ef < 1e-6);
}
