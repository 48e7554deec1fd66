// Brute-force verification path: grid sampling, quadrature projection,
// momentum-space free propagation and end-to-end numeric rebuild of the
// coincidence pattern. Downstream of the initial sampling everything here
// is independent of the closed-form pipeline.

#pragma once

#include <vector>

#include "ghost/experiment.hpp"
#include "ghost/gaussian.hpp"

namespace ghost {

/// Thrown when a grid cannot resolve the requested state; carries a
/// suggested point count.
struct ResolutionError : std::runtime_error {
    int suggested_n_points;
    explicit ResolutionError(const std::string& what, int suggested)
        : std::runtime_error(what), suggested_n_points(suggested) {}
};

/// Uniform complex samples on [-half_extent, half_extent), n a power of two.
struct Grid1D {
    double half_extent = 0.0;
    int n_points = 0;
    std::vector<cplx> samples;

    Grid1D() = default;
    Grid1D(double half_extent_, int n_points_);

    double spacing() const { return 2.0 * half_extent / n_points; }
    double coord(int i) const { return -half_extent + i * spacing(); }
    double norm_sq() const;  // trapezoid-weighted discrete norm
};

/// Row-major n x n samples; first index is z1, second z2.
struct Grid2D {
    double half_extent = 0.0;
    int n_points = 0;
    std::vector<cplx> samples;

    Grid2D() = default;
    Grid2D(double half_extent_, int n_points_);

    double spacing() const { return 2.0 * half_extent / n_points; }
    double coord(int i) const { return -half_extent + i * spacing(); }
    cplx& at(int i1, int i2) { return samples[std::size_t(i1) * n_points + i2]; }
    cplx at(int i1, int i2) const {
        return samples[std::size_t(i1) * n_points + i2];
    }
    double norm_sq() const;
};

struct ComparisonReport {
    double max_abs_error = 0.0;
    double max_rel_error = 0.0;  // relative to the reference pattern peak
    double l2_error = 0.0;
    double location_of_max = 0.0;
};

/// Pointwise sampling; throws ResolutionError if the grid cannot hold or
/// resolve the state.
Grid1D sample_packet(const GaussianPacket& p, double half_extent, int n_points);
Grid2D sample_bipartite(const BipartiteGaussianState& s, double half_extent,
                        int n_points);

/// Composite-trapezoid integral over z1 of conj(probe)*Psi, one value per
/// z2 grid sample.
Grid1D quadrature_project(const Grid2D& g, const GaussianPacket& probe);

/// FFT -> multiply by exp(-i k^2 tau / 2) -> inverse FFT.
Grid1D momentum_space_propagate(const Grid1D& g, EvolutionParam tau);
Grid2D momentum_space_propagate(const Grid2D& g, EvolutionParam tau);

/// Band-limited evaluation of the propagated field at arbitrary points
/// (direct DFT sum; exact for the discrete spectrum).
std::vector<cplx> propagate_and_evaluate(const Grid1D& g, EvolutionParam tau,
                                         const std::vector<double>& zs);
cplx propagate_and_evaluate(const Grid1D& g, EvolutionParam tau, double z);

/// Grid side for the end-to-end numeric pattern; follows the default-grid
/// sizing rule of the oracle (8x the largest relevant length scale).
double default_half_extent(const Geometry& geom);

/// End-to-end numeric rebuild: sample the source state, evolve to the slit
/// plane on the grid, project by quadrature, propagate to the detectors and
/// assemble the coincidence intensity with the detector cross term.
Pattern pattern_numeric(const Geometry& geom, const DetectorModel& det,
                        double z1_fixed, const std::vector<double>& z2_grid,
                        int n_points = 2048);

/// Error norms between two patterns on identical grids. If the
/// normalization modes differ, both are aligned to unit peak first.
ComparisonReport compare_patterns(const Pattern& a, const Pattern& b);

}  // namespace ghost
