#include "ghost/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ghost {

namespace {

double fringe_spacing_formula(const Geometry& g) {
    const double g2 = g.gamma_sq();
    const double lD = g.lambda * g.D();
    return (g2 * g2 * kPi * kPi + lD * lD) / (2.0 * g.z0 * lD);
}

// Exact complex center of the projected packet psiA (before the peak-position
// transform); shares its denominator with the exact width.
struct SlitImage {
    cplx gamma;
    cplx center;  // complex completed-square center
};

SlitImage exact_slit_image(const Geometry& g) {
    const double s2 = g.sigma * g.sigma;
    const double W2 = g.omega * g.omega;
    const double e2 = g.epsilon * g.epsilon;
    const double t0 = g.tau0();
    const cplx den = 4.0 * W2 * s2 + 4.0 * e2 * s2 + cplx(0.0, 8.0 * s2 * t0) + 1.0;
    const cplx num = 4.0 * W2 * e2 * s2 + cplx(0.0, 16.0 * W2 * s2 * t0) +
                     4.0 * W2 + cplx(0.0, 8.0 * e2 * s2 * t0) + e2 -
                     16.0 * s2 * t0 * t0 + cplx(0.0, 4.0 * t0);
    return {num / den, g.z0 * (4.0 * W2 * s2 - 1.0) / den};
}

double envelope_width(const Geometry& g) {
    // 1/Re(1/Gamma_t) with Gamma_t the exact particle-2 width at the detector.
    const cplx gt = exact_slit_image(g).gamma + cplx(0.0, 2.0 * g.tau1());
    return 1.0 / (1.0 / gt).real();
}

}  // namespace

void Geometry::validate() const {
    auto req = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw std::domain_error(std::string("Geometry: ") + name +
                                    " must be positive and finite");
        }
    };
    req(sigma, "sigma");
    req(omega, "omega");
    req(epsilon, "epsilon");
    req(lambda, "lambda");
    req(L1, "L1");
    req(L2, "L2");
    if (!(z0 >= 0.0) || !std::isfinite(z0)) {
        throw std::domain_error("Geometry: z0 must be nonnegative and finite");
    }
}

void DetectorModel::validate() const {
    if (!(std::abs(overlap) <= 1.0 + 1e-12)) {
        throw std::domain_error("DetectorModel: |<d1|d2>| must be <= 1");
    }
    if (orthogonal && std::abs(overlap) > 1e-12) {
        throw std::domain_error(
            "DetectorModel: orthogonal flag requires <d1|d2> = 0");
    }
}

double distinguishability(const DetectorModel& det) {
    det.validate();
    const double c2 = std::norm(det.overlap);
    return std::sqrt(std::max(0.0, 1.0 - c2));
}

double Branch::norm_sq() const {
    return std::norm(weight) * packet1.norm_sq() * packet2.norm_sq();
}

BranchedState apply_double_slit(const BipartiteGaussianState& state_at_t0,
                                const Geometry& geom, const DetectorModel& det) {
    geom.validate();
    det.validate();
    state_at_t0.validate();

    const GaussianPacket phiA = slit_packet(geom.z0, geom.epsilon);
    const GaussianPacket phiB = slit_packet(-geom.z0, geom.epsilon);
    const GaussianPacket psiA = project_particle1(state_at_t0, phiA);
    const GaussianPacket psiB = project_particle1(state_at_t0, phiB);

    // Renormalization rule: cross term <psiB|psiA><phiA|phiB> excluded.
    const double A2 = psiA.norm_sq() + psiB.norm_sq();
    if (!(A2 > 0.0)) {
        throw std::domain_error("apply_double_slit: vanishing pass amplitude");
    }
    const cplx w = 1.0 / std::sqrt(A2);

    BranchedState bs;
    bs.branches = {Branch{w, DetectorTag::d1, phiA, psiA},
                   Branch{w, DetectorTag::d2, phiB, psiB}};
    bs.pass_probability = A2;
    bs.degenerate_slits = (2.0 * geom.z0 < geom.epsilon);
    return bs;
}

double slit_image_center(const Geometry& geom, bool exact) {
    geom.validate();
    if (!exact) {
        if (!geom.approx_valid()) {
            throw RegimeError("slit_image_center: approximate form requires "
                              "omega >= 100*max(epsilon, 1/sigma)");
        }
        return geom.z0;
    }
    const SlitImage si = exact_slit_image(geom);
    // Peak of |psiA|: real center of the canonical packet representation.
    return (si.center / si.gamma).real() / (1.0 / si.gamma).real();
}

cplx gamma_param(const Geometry& geom, bool exact) {
    geom.validate();
    if (!exact) {
        if (!geom.approx_valid()) {
            throw RegimeError("gamma_param: approximate form requires "
                              "omega >= 100*max(epsilon, 1/sigma)");
        }
        return cplx(geom.gamma_sq(), 4.0 * geom.tau0());
    }
    return exact_slit_image(geom).gamma;
}

BranchedState propagate_branches(const BranchedState& bs, EvolutionParam tau) {
    BranchedState out = bs;
    for (Branch& b : out.branches) {
        b.packet1 = free_evolve(b.packet1, tau);
        b.packet2 = free_evolve(b.packet2, tau);
    }
    return out;
}

std::vector<double> uniform_grid(double z_min, double z_max, int n) {
    if (n < 2 || !(z_max > z_min)) {
        throw std::domain_error("uniform_grid: need n >= 2 and z_max > z_min");
    }
    std::vector<double> g(n);
    const double h = (z_max - z_min) / (n - 1);
    for (int i = 0; i < n; ++i) g[i] = z_min + i * h;
    return g;
}

Pattern coincidence_pattern(const BranchedState& bs, const DetectorModel& det,
                            double z1_fixed, const std::vector<double>& z2_grid) {
    det.validate();
    if (z2_grid.empty()) {
        throw std::domain_error("coincidence_pattern: empty z2 grid");
    }
    if (bs.branches.size() != 2) {
        throw std::domain_error("coincidence_pattern: expected two branches");
    }
    const Branch& b1 = bs.branches[0];
    const Branch& b2 = bs.branches[1];
    const cplx f1 = b1.weight * b1.packet1(z1_fixed);
    const cplx f2 = b2.weight * b2.packet1(z1_fixed);
    const cplx d2d1 = std::conj(det.overlap);  // <d2|d1>

    Pattern p;
    p.z2_samples = z2_grid;
    p.intensity.resize(z2_grid.size());
    for (std::size_t i = 0; i < z2_grid.size(); ++i) {
        const cplx a1 = f1 * b1.packet2(z2_grid[i]);
        const cplx a2 = f2 * b2.packet2(z2_grid[i]);
        p.intensity[i] = std::norm(a1) + std::norm(a2) +
                         2.0 * (d2d1 * a1 * std::conj(a2)).real();
    }
    p.metadata.overlap = det.overlap;
    p.metadata.z1_fixed = z1_fixed;
    p.metadata.normalization_mode = "raw";
    return p;
}

Pattern eraser_pattern(const BranchedState& bs, EraserBasis basis,
                       double z1_fixed, const std::vector<double>& z2_grid) {
    if (z2_grid.empty()) {
        throw std::domain_error("eraser_pattern: empty z2 grid");
    }
    if (bs.branches.size() != 2) {
        throw std::domain_error("eraser_pattern: expected two branches");
    }
    const double sign = (basis == EraserBasis::plus) ? 1.0 : -1.0;
    const Branch& b1 = bs.branches[0];
    const Branch& b2 = bs.branches[1];
    const cplx f1 = b1.weight * b1.packet1(z1_fixed);
    const cplx f2 = b2.weight * b2.packet1(z1_fixed);

    Pattern p;
    p.z2_samples = z2_grid;
    p.intensity.resize(z2_grid.size());
    for (std::size_t i = 0; i < z2_grid.size(); ++i) {
        const cplx amp = (f1 * b1.packet2(z2_grid[i]) +
                          sign * f2 * b2.packet2(z2_grid[i])) /
                         std::sqrt(2.0);
        p.intensity[i] = std::norm(amp);
    }
    p.metadata.z1_fixed = z1_fixed;
    p.metadata.normalization_mode = "raw";
    return p;
}

namespace {

// Shared closed-form wide-source assembly. fringe_coef in [-1, 1] is the
// coefficient of the cos term; amp_scale multiplies the whole pattern.
Pattern closed_form_impl(const Geometry& g, double fringe_coef,
                         double amp_scale, const std::vector<double>& z2_grid) {
    g.validate();
    if (!g.approx_valid()) {
        throw RegimeError("closed-form pattern requires "
                          "omega >= 100*max(epsilon, 1/sigma)");
    }
    if (z2_grid.empty()) {
        throw std::domain_error("closed-form pattern: empty z2 grid");
    }
    const double g2 = g.gamma_sq();
    const double lD = g.lambda * g.D();
    const double W = g2 + (lD / (kPi * std::sqrt(g2))) * (lD / (kPi * std::sqrt(g2)));
    const double We = g.epsilon * g.epsilon +
                      (g.lambda * g.L1 / (kPi * g.epsilon)) *
                          (g.lambda * g.L1 / (kPi * g.epsilon));
    const double k = 4.0 * g.z0 * lD * kPi / (g2 * g2 * kPi * kPi + lD * lD);
    const double alpha = std::sqrt(2.0 / (kPi * We)) * std::sqrt(2.0 / (kPi * W)) *
                         std::exp(-2.0 * g.z0 * g.z0 / We);

    Pattern p;
    p.z2_samples = z2_grid;
    p.intensity.resize(z2_grid.size());
    for (std::size_t i = 0; i < z2_grid.size(); ++i) {
        const double z = z2_grid[i];
        const double env = alpha * std::exp(-2.0 * (z * z + g.z0 * g.z0) / W);
        const double ch = std::cosh(4.0 * z * g.z0 / W);
        p.intensity[i] = amp_scale * env *
                         (ch + fringe_coef * std::cos(k * z));
    }
    p.metadata.geometry = g;
    p.metadata.normalization_mode = "raw";
    return p;
}

}  // namespace

Pattern closed_form_pattern(const Geometry& geom, const DetectorModel& det,
                            const std::vector<double>& z2_grid) {
    det.validate();
    Pattern p = closed_form_impl(geom, std::abs(det.overlap), 1.0, z2_grid);
    p.metadata.overlap = det.overlap;
    return p;
}

Pattern closed_form_eraser(const Geometry& geom, EraserBasis basis,
                           const std::vector<double>& z2_grid) {
    const double sign = (basis == EraserBasis::plus) ? 1.0 : -1.0;
    return closed_form_impl(geom, sign, 0.5, z2_grid);
}

double local_visibility(const Geometry& geom, const DetectorModel& det,
                        double z2) {
    geom.validate();
    det.validate();
    if (!geom.approx_valid()) {
        throw RegimeError("local_visibility requires "
                          "omega >= 100*max(epsilon, 1/sigma)");
    }
    const double g2 = geom.gamma_sq();
    const double lD = geom.lambda * geom.D();
    const double W = g2 + lD * lD / (kPi * kPi * g2);
    return std::abs(det.overlap) / std::cosh(4.0 * z2 * geom.z0 / W);
}

std::vector<Extremum> find_extrema(const Pattern& p) {
    const auto& y = p.intensity;
    const auto& z = p.z2_samples;
    std::vector<Extremum> out;
    std::size_t i = 1;
    while (i + 1 < y.size()) {
        // Treat runs of exactly equal samples as one candidate (a symmetric
        // grid can straddle an extremum with two equal neighbors).
        std::size_t j = i;
        while (j + 1 < y.size() - 1 && y[j + 1] == y[i]) ++j;
        const bool is_max = y[i] > y[i - 1] && y[i] > y[j + 1];
        const bool is_min = y[i] < y[i - 1] && y[i] < y[j + 1];
        if (!is_max && !is_min) {
            i = j + 1;
            continue;
        }
        Extremum e;
        e.is_max = is_max;
        if (j > i) {
            // plateau: place the extremum at its center
            e.z = 0.5 * (z[i] + z[j]);
            e.value = y[i];
        } else {
            const double denom = y[i - 1] - 2.0 * y[i] + y[i + 1];
            double off = 0.0;
            if (denom != 0.0) off = 0.5 * (y[i - 1] - y[i + 1]) / denom;
            off = std::clamp(off, -0.5, 0.5);
            const double h = z[i + 1] - z[i];
            e.z = z[i] + off * h;
            e.value = y[i] - 0.25 * (y[i - 1] - y[i + 1]) * off;
        }
        out.push_back(e);
        i = j + 1;
    }
    return out;
}

VisibilityResult measured_visibility(const Pattern& p, double around) {
    const auto ext = find_extrema(p);
    const Extremum* best_max = nullptr;
    for (const auto& e : ext) {
        if (!e.is_max) continue;
        if (!best_max || std::abs(e.z - around) < std::abs(best_max->z - around)) {
            best_max = &e;
        }
    }
    if (!best_max) return {0.0, true};

    // Flanking minima; their mean cancels the symmetric envelope slope.
    const Extremum* lo = nullptr;
    const Extremum* hi = nullptr;
    for (const auto& e : ext) {
        if (e.is_max) continue;
        if (e.z < best_max->z && (!lo || e.z > lo->z)) lo = &e;
        if (e.z > best_max->z && (!hi || e.z < hi->z)) hi = &e;
    }
    if (!lo && !hi) return {0.0, true};
    double imin = 0.0;
    if (lo && hi) imin = 0.5 * (lo->value + hi->value);
    else imin = (lo ? lo->value : hi->value);

    const double imax = best_max->value;
    if (!(imax + imin > 0.0)) return {0.0, true};
    return {std::max(0.0, (imax - imin) / (imax + imin)), false};
}

double duality_margin(const DetectorModel& det, double v2_peak) {
    det.validate();
    if (!(v2_peak >= 0.0) || !(v2_peak <= 1.0 + 1e-6)) {
        throw std::domain_error("duality_margin: visibility outside [0, 1]");
    }
    const double d1 = distinguishability(det);
    return 1.0 - (d1 * d1 + v2_peak * v2_peak);
}

double fringe_spacing(const Geometry& geom) {
    geom.validate();
    if (geom.z0 == 0.0) {
        throw std::domain_error("fringe_spacing: undefined for z0 = 0");
    }
    return fringe_spacing_formula(geom);
}

Pattern unit_peak(const Pattern& p) {
    Pattern out = p;
    const double peak =
        *std::max_element(p.intensity.begin(), p.intensity.end());
    if (!(peak > 0.0)) {
        throw std::domain_error("unit_peak: nonpositive pattern peak");
    }
    for (double& v : out.intensity) v /= peak;
    out.metadata.normalization_mode = "unit_peak";
    return out;
}

std::pair<double, double> default_z2_window(const Geometry& geom) {
    geom.validate();
    const double w = std::sqrt(envelope_width(geom));
    double half;
    if (geom.z0 > 0.0) {
        half = std::min(2.5 * fringe_spacing_formula(geom), 4.0 * w + geom.z0);
        half = std::max(half, 0.5 * w);
    } else {
        half = 3.0 * w;
    }
    return {-half, half};
}

}  // namespace ghost
