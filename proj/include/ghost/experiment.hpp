// Ghost-interference pipeline: geometry, double-slit projection with a
// which-path detector, propagation to the detectors, coincidence pattern,
// visibility, distinguishability, duality margin and eraser projections.

#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ghost/gaussian.hpp"

namespace ghost {

/// Thrown when an approximate formula is requested outside its regime.
struct RegimeError : std::domain_error {
    using std::domain_error::domain_error;
};

struct Geometry {
    double sigma = 1.0;    // source momentum-correlation parameter [1/u]
    double omega = 100.0;  // source position-correlation parameter [u]
    double epsilon = 0.5;  // slit half-width parameter [u]
    double z0 = 1.0;       // slit half-separation [u], d = 2*z0
    double lambda = 0.1;   // de Broglie / photon wavelength [u]
    double L1 = 10.0;      // slit-to-detector distance [u]
    double L2 = 5.0;       // source-to-slit distance [u]

    double D() const { return L1 + 2.0 * L2; }
    double gamma_sq() const { return epsilon * epsilon + 1.0 / (sigma * sigma); }
    double tau0() const { return lambda * L2 / (2.0 * kPi); }
    double tau1() const { return lambda * L1 / (2.0 * kPi); }

    /// Gate for the wide-source approximate formulas.
    bool approx_valid() const {
        return omega >= 100.0 * std::max(epsilon, 1.0 / sigma);
    }

    /// Throws std::domain_error if any parameter is non-positive.
    void validate() const;
};

/// Which-path detector: the only physical input is <d1|d2>.
struct DetectorModel {
    cplx overlap{0.0, 0.0};
    bool orthogonal = false;

    void validate() const;
};

/// D1 = sqrt(1 - |<d1|d2>|^2).
double distinguishability(const DetectorModel& det);

enum class DetectorTag { d1, d2 };

struct Branch {
    cplx weight{0.0};
    DetectorTag tag = DetectorTag::d1;
    GaussianPacket packet1;  // particle 1 (slit side)
    GaussianPacket packet2;  // particle 2 (ghost side)

    double norm_sq() const;
};

struct BranchedState {
    std::vector<Branch> branches;
    double pass_probability = 1.0;  // A^2 before renormalization
    bool degenerate_slits = false;  // slits closer than their width
};

/// Projects the slit-plane state onto the two slit packets, tags the
/// branches with the detector states and renormalizes by
/// A = sqrt(<psiA|psiA> + <psiB|psiB>) (cross term excluded).
BranchedState apply_double_slit(const BipartiteGaussianState& state_at_t0,
                                const Geometry& geom, const DetectorModel& det);

/// Exact closed-form ghost-image slit position (peak of |psiA|); with
/// exact=false returns z0 (valid only in the wide-source regime).
double slit_image_center(const Geometry& geom, bool exact = true);

/// Exact closed-form width of the projected packet psiA at the slit plane;
/// with exact=false returns gamma^2 + 4i*tau0 (wide-source limit).
cplx gamma_param(const Geometry& geom, bool exact = true);

/// Free evolution of both packets in every branch; weights unchanged.
BranchedState propagate_branches(const BranchedState& bs, EvolutionParam tau);

struct PatternMeta {
    Geometry geometry;
    cplx overlap{0.0};
    double z1_fixed = 0.0;
    std::string normalization_mode = "raw";
};

/// Sampled coincidence intensity vs z2.
struct Pattern {
    std::vector<double> z2_samples;
    std::vector<double> intensity;
    PatternMeta metadata;
};

std::vector<double> uniform_grid(double z_min, double z_max, int n);

/// Coincidence probability density at D2 conditioned on D1 firing at
/// z1_fixed, with the detector cross term weighted by <d2|d1>.
Pattern coincidence_pattern(const BranchedState& bs, const DetectorModel& det,
                            double z1_fixed, const std::vector<double>& z2_grid);

enum class EraserBasis { plus, minus };

/// Pattern after projecting the detector onto (|d1> +/- |d2>)/sqrt(2).
/// Requires orthogonal detector states.
Pattern eraser_pattern(const BranchedState& bs, EraserBasis basis,
                       double z1_fixed, const std::vector<double>& z2_grid);

/// Closed-form wide-source pattern: envelope * cosh * (1 + |c| cos/cosh).
/// fringe_sign +1/-1 selects the eraser plus/minus variant (with the
/// detector overlap replaced by 1 and the amplitude halved).
Pattern closed_form_pattern(const Geometry& geom, const DetectorModel& det,
                            const std::vector<double>& z2_grid);
Pattern closed_form_eraser(const Geometry& geom, EraserBasis basis,
                           const std::vector<double>& z2_grid);

/// V2(z2) = |<d1|d2>| / cosh(4 z2 z0 / W), W = gamma^2 + (lambda D/(pi gamma))^2.
double local_visibility(const Geometry& geom, const DetectorModel& det,
                        double z2);

struct Extremum {
    double z = 0.0;
    double value = 0.0;
    bool is_max = false;
};

/// Interior extrema located by local comparison and refined by three-point
/// parabolic interpolation.
std::vector<Extremum> find_extrema(const Pattern& p);

struct VisibilityResult {
    double value = 0.0;
    bool fringeless = false;
};

/// (Imax - Imin)/(Imax + Imin) from the maximum nearest `around` and the
/// mean of its flanking minima. Fringeless patterns give {0, true}.
VisibilityResult measured_visibility(const Pattern& p, double around);

/// 1 - (D1^2 + V2^2); nonnegative for every physical configuration.
double duality_margin(const DetectorModel& det, double v2_peak);

/// Period of the cos fringe term: (gamma^4 pi^2 + lambda^2 D^2)/(2 z0 lambda D).
double fringe_spacing(const Geometry& geom);

/// Rescale intensity so the peak is 1; metadata records "unit_peak".
Pattern unit_peak(const Pattern& p);

/// Default symmetric z2 window covering a few fringes of the envelope.
std::pair<double, double> default_z2_window(const Geometry& geom);

}  // namespace ghost
