#include "ghost/oracle.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdio>
#include <mutex>
#include <stdexcept>

namespace ghost {

namespace {

std::mutex fftw_plan_mutex;

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

int next_pow2(double x) {
    int n = 16;
    while (n < x && n < (1 << 24)) n <<= 1;
    return n;
}

void require_pow2(int n) {
    if (!is_pow2(n) || n < 16) {
        throw std::domain_error("grid n_points must be a power of two >= 16");
    }
}

struct SupportInfo {
    double radius;     // center offset + 6.5 position standard deviations
    double bandwidth;  // |mean momentum| + 6.5 momentum standard deviations
};

SupportInfo packet_support(const GaussianPacket& p) {
    const cplx a = 1.0 / p.width;
    const double sd = std::sqrt(1.0 / (4.0 * a.real()));
    const double r = std::abs(p.center) + 6.5 * sd;
    // Var(p) = |a|^2 / Re(a) for exp(-a z^2 + ...); chirp included.
    const double sd_p = std::sqrt(std::norm(a) / a.real());
    const double bw = std::abs(p.linear_phase) + 6.5 * sd_p;
    return {r, bw};
}

// Nyquist check shared by 1D/2D sampling; throws with a suggested n.
void check_resolution(const SupportInfo& s, double half_extent, int n,
                      const char* what) {
    const double dz = 2.0 * half_extent / n;
    if (half_extent < s.radius) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "%s: half_extent %.3g below state support %.3g", what,
                      half_extent, s.radius);
        throw ResolutionError(buf, n);
    }
    const double nyquist = kPi / dz;
    if (nyquist < s.bandwidth) {
        const int sug = next_pow2(2.0 * half_extent * s.bandwidth / kPi);
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "%s: Nyquist %.3g below state bandwidth %.3g; "
                      "suggest n_points >= %d",
                      what, nyquist, s.bandwidth, sug);
        throw ResolutionError(buf, sug);
    }
}

void fft_1d(std::vector<cplx>& v, int sign) {
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex);
        plan = fftw_plan_dft_1d(int(v.size()),
                                reinterpret_cast<fftw_complex*>(v.data()),
                                reinterpret_cast<fftw_complex*>(v.data()),
                                sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex);
        fftw_destroy_plan(plan);
    }
}

void fft_2d(std::vector<cplx>& v, int n, int sign) {
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex);
        plan = fftw_plan_dft_2d(n, n,
                                reinterpret_cast<fftw_complex*>(v.data()),
                                reinterpret_cast<fftw_complex*>(v.data()),
                                sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex);
        fftw_destroy_plan(plan);
    }
}

double signed_wavenumber(int m, int n, double dz) {
    const int ms = (m < n / 2) ? m : m - n;
    return 2.0 * kPi * ms / (n * dz);
}

// Fraction of spectral power in the 16 bins nearest the band edge.
void check_aliasing(const std::vector<cplx>& spectrum, int n, const char* what) {
    double total = 0.0;
    for (const cplx& c : spectrum) total += std::norm(c);
    if (total == 0.0) return;
    double edge = 0.0;
    for (int off = -8; off < 8; ++off) {
        int m = (n / 2 + off + n) % n;
        edge += std::norm(spectrum[m]);
    }
    if (edge / total > 1e-10) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "%s: band-edge energy fraction %.3g exceeds 1e-10; "
                      "grid under-resolved",
                      what, edge / total);
        throw ResolutionError(buf, 2 * n);
    }
}

}  // namespace

Grid1D::Grid1D(double half_extent_, int n_points_)
    : half_extent(half_extent_), n_points(n_points_) {
    require_pow2(n_points);
    if (!(half_extent > 0.0)) {
        throw std::domain_error("Grid1D: half_extent must be > 0");
    }
    samples.assign(n_points, cplx{0.0});
}

double Grid1D::norm_sq() const {
    double s = 0.0;
    for (int i = 0; i < n_points; ++i) {
        const double w = (i == 0 || i == n_points - 1) ? 0.5 : 1.0;
        s += w * std::norm(samples[i]);
    }
    return s * spacing();
}

Grid2D::Grid2D(double half_extent_, int n_points_)
    : half_extent(half_extent_), n_points(n_points_) {
    require_pow2(n_points);
    if (!(half_extent > 0.0)) {
        throw std::domain_error("Grid2D: half_extent must be > 0");
    }
    samples.assign(std::size_t(n_points) * n_points, cplx{0.0});
}

double Grid2D::norm_sq() const {
    double s = 0.0;
    for (int i = 0; i < n_points; ++i) {
        const double wi = (i == 0 || i == n_points - 1) ? 0.5 : 1.0;
        for (int j = 0; j < n_points; ++j) {
            const double wj = (j == 0 || j == n_points - 1) ? 0.5 : 1.0;
            s += wi * wj * std::norm(at(i, j));
        }
    }
    const double h = spacing();
    return s * h * h;
}

Grid1D sample_packet(const GaussianPacket& p, double half_extent, int n_points) {
    Grid1D g(half_extent, n_points);
    check_resolution(packet_support(p), half_extent, n_points, "sample_packet");
    for (int i = 0; i < n_points; ++i) g.samples[i] = p(g.coord(i));
    return g;
}

Grid2D sample_bipartite(const BipartiteGaussianState& s, double half_extent,
                        int n_points) {
    s.validate();
    Grid2D g(half_extent, n_points);

    // Support and phase-gradient bounds from the real quadratic form.
    const double a11 = 2.0 * s.quad11.real();
    const double a12 = 2.0 * s.quad12.real();
    const double a22 = 2.0 * s.quad22.real();
    const double det = a11 * a22 - a12 * a12;
    // Covariance of |Psi|^2 is (2A)^{-1} with A the real quadratic matrix.
    const double c11 = a22 / (2.0 * det);
    const double c22 = a11 / (2.0 * det);
    const double m1 = (a22 * 2.0 * s.lin[0].real() - a12 * 2.0 * s.lin[1].real()) / det;
    const double m2 = (a11 * 2.0 * s.lin[1].real() - a12 * 2.0 * s.lin[0].real()) / det;
    const double r1 = std::abs(m1) + 6.5 * std::sqrt(c11);
    const double r2 = std::abs(m2) + 6.5 * std::sqrt(c22);
    // Momentum covariance K = conj(Q) Re(Q)^{-1} Q (diagonal entries real);
    // mean momentum k_i = Im(-2 (Q m)_i + L_i).
    const cplx q11 = s.quad11, q12 = s.quad12, q22 = s.quad22;
    const double ir11 = 2.0 * a22 / det;  // (Re Q)^{-1} entries
    const double ir12 = -2.0 * a12 / det;
    const double ir22 = 2.0 * a11 / det;
    const cplx t1 = std::conj(q11) * ir11 + std::conj(q12) * ir12;
    const cplx t2 = std::conj(q11) * ir12 + std::conj(q12) * ir22;
    const cplx u1 = std::conj(q12) * ir11 + std::conj(q22) * ir12;
    const cplx u2 = std::conj(q12) * ir12 + std::conj(q22) * ir22;
    const double varp1 = (t1 * q11 + t2 * q12).real();
    const double varp2 = (u1 * q12 + u2 * q22).real();
    const double k1 = std::abs(
        std::imag(-2.0 * (q11 * m1 + q12 * m2) + s.lin[0]));
    const double k2 = std::abs(
        std::imag(-2.0 * (q12 * m1 + q22 * m2) + s.lin[1]));
    const double g1 = k1 + 6.5 * std::sqrt(std::max(varp1, 0.0));
    const double g2 = k2 + 6.5 * std::sqrt(std::max(varp2, 0.0));
    check_resolution({r1, g1}, half_extent, n_points, "sample_bipartite");
    check_resolution({r2, g2}, half_extent, n_points, "sample_bipartite");

    for (int i = 0; i < n_points; ++i) {
        const double z1 = g.coord(i);
        for (int j = 0; j < n_points; ++j) {
            g.at(i, j) = s(z1, g.coord(j));
        }
    }
    return g;
}

Grid1D quadrature_project(const Grid2D& g, const GaussianPacket& probe) {
    Grid1D out(g.half_extent, g.n_points);
    const double h = g.spacing();
    std::vector<cplx> pv(g.n_points);
    for (int i = 0; i < g.n_points; ++i) {
        const double w = (i == 0 || i == g.n_points - 1) ? 0.5 : 1.0;
        pv[i] = w * std::conj(probe(g.coord(i)));
    }
    for (int j = 0; j < g.n_points; ++j) {
        cplx acc{0.0};
        for (int i = 0; i < g.n_points; ++i) {
            acc += pv[i] * g.at(i, j);
        }
        out.samples[j] = acc * h;
    }
    return out;
}

Grid1D momentum_space_propagate(const Grid1D& g, EvolutionParam tau) {
    if (!(tau.tau >= 0.0)) {
        throw std::domain_error("momentum_space_propagate: tau must be >= 0");
    }
    Grid1D out = g;
    if (tau.tau == 0.0) return out;
    fft_1d(out.samples, FFTW_FORWARD);
    check_aliasing(out.samples, out.n_points, "momentum_space_propagate");
    const double dz = g.spacing();
    for (int m = 0; m < out.n_points; ++m) {
        const double k = signed_wavenumber(m, out.n_points, dz);
        out.samples[m] *= std::polar(1.0, -0.5 * k * k * tau.tau);
    }
    fft_1d(out.samples, FFTW_BACKWARD);
    const double inv = 1.0 / out.n_points;
    for (cplx& c : out.samples) c *= inv;
    return out;
}

Grid2D momentum_space_propagate(const Grid2D& g, EvolutionParam tau) {
    if (!(tau.tau >= 0.0)) {
        throw std::domain_error("momentum_space_propagate: tau must be >= 0");
    }
    Grid2D out = g;
    if (tau.tau == 0.0) return out;
    fft_2d(out.samples, out.n_points, FFTW_FORWARD);
    // Band-edge check along each axis (row/column through k=edge).
    {
        double total = 0.0, edge = 0.0;
        for (const cplx& c : out.samples) total += std::norm(c);
        const int ne = out.n_points / 2;
        for (int i = 0; i < out.n_points; ++i) {
            edge += std::norm(out.at(ne, i)) + std::norm(out.at(i, ne));
        }
        if (total > 0.0 && edge / total > 1e-10) {
            throw ResolutionError(
                "momentum_space_propagate(2D): band-edge energy exceeds 1e-10",
                2 * out.n_points);
        }
    }
    const double dz = g.spacing();
    for (int m1 = 0; m1 < out.n_points; ++m1) {
        const double k1 = signed_wavenumber(m1, out.n_points, dz);
        for (int m2 = 0; m2 < out.n_points; ++m2) {
            const double k2 = signed_wavenumber(m2, out.n_points, dz);
            out.at(m1, m2) *=
                std::polar(1.0, -0.5 * (k1 * k1 + k2 * k2) * tau.tau);
        }
    }
    fft_2d(out.samples, out.n_points, FFTW_BACKWARD);
    const double inv = 1.0 / (double(out.n_points) * out.n_points);
    for (cplx& c : out.samples) c *= inv;
    return out;
}

std::vector<cplx> propagate_and_evaluate(const Grid1D& g, EvolutionParam tau,
                                         const std::vector<double>& zs) {
    std::vector<cplx> spectrum = g.samples;
    fft_1d(spectrum, FFTW_FORWARD);
    check_aliasing(spectrum, g.n_points, "propagate_and_evaluate");
    const int n = g.n_points;
    const double dz = g.spacing();
    for (int m = 0; m < n; ++m) {
        const double k = signed_wavenumber(m, n, dz);
        spectrum[m] *= std::polar(1.0 / n, -0.5 * k * k * tau.tau);
    }
    std::vector<cplx> out(zs.size());
    for (std::size_t p = 0; p < zs.size(); ++p) {
        const double x = zs[p] + g.half_extent;  // offset from grid origin
        const double dk = 2.0 * kPi / (n * dz);
        const cplx step = std::polar(1.0, dk * x);
        // positive frequencies m = 0 .. n/2-1
        cplx rot{1.0};
        cplx acc{0.0};
        for (int m = 0; m < n / 2; ++m) {
            acc += spectrum[m] * rot;
            rot *= step;
        }
        // negative frequencies m = n/2 .. n-1 map to m-n
        const cplx cstep = std::conj(step);
        rot = cstep;  // k = -dk
        for (int m = n - 1; m >= n / 2; --m) {
            acc += spectrum[m] * rot;
            rot *= cstep;
        }
        out[p] = acc;
    }
    return out;
}

cplx propagate_and_evaluate(const Grid1D& g, EvolutionParam tau, double z) {
    return propagate_and_evaluate(g, tau, std::vector<double>{z})[0];
}

double default_half_extent(const Geometry& geom) {
    geom.validate();
    const cplx gt = gamma_param(geom, true) + cplx(0.0, 2.0 * geom.tau1());
    const double spread = std::sqrt(1.0 / (1.0 / gt).real());
    return 8.0 * std::max({geom.omega, geom.z0 + 3.0 * geom.epsilon, spread});
}

Pattern pattern_numeric(const Geometry& geom, const DetectorModel& det,
                        double z1_fixed, const std::vector<double>& z2_grid,
                        int n_points) {
    geom.validate();
    det.validate();
    if (z2_grid.empty()) {
        throw std::domain_error("pattern_numeric: empty z2 grid");
    }
    const double H = default_half_extent(geom);

    // Closed forms are used only to sample the t = 0 source state.
    const BipartiteGaussianState epr = make_epr(geom.sigma, geom.omega);
    Grid2D grid = sample_bipartite(epr, H, n_points);
    grid = momentum_space_propagate(grid, EvolutionParam(geom.tau0()));

    const GaussianPacket phiA = slit_packet(geom.z0, geom.epsilon);
    const GaussianPacket phiB = slit_packet(-geom.z0, geom.epsilon);
    const Grid1D psiA = quadrature_project(grid, phiA);
    const Grid1D psiB = quadrature_project(grid, phiB);

    const double A2 = psiA.norm_sq() + psiB.norm_sq();
    const double w = 1.0 / std::sqrt(A2);

    const EvolutionParam tau1(geom.tau1());
    const cplx f1 =
        w * propagate_and_evaluate(sample_packet(phiA, H, n_points), tau1,
                                   z1_fixed);
    const cplx f2 =
        w * propagate_and_evaluate(sample_packet(phiB, H, n_points), tau1,
                                   z1_fixed);
    const std::vector<cplx> vA = propagate_and_evaluate(psiA, tau1, z2_grid);
    const std::vector<cplx> vB = propagate_and_evaluate(psiB, tau1, z2_grid);

    const cplx d2d1 = std::conj(det.overlap);
    Pattern p;
    p.z2_samples = z2_grid;
    p.intensity.resize(z2_grid.size());
    for (std::size_t i = 0; i < z2_grid.size(); ++i) {
        const cplx a1 = f1 * vA[i];
        const cplx a2 = f2 * vB[i];
        p.intensity[i] = std::norm(a1) + std::norm(a2) +
                         2.0 * (d2d1 * a1 * std::conj(a2)).real();
    }
    p.metadata.geometry = geom;
    p.metadata.overlap = det.overlap;
    p.metadata.z1_fixed = z1_fixed;
    p.metadata.normalization_mode = "raw";
    return p;
}

ComparisonReport compare_patterns(const Pattern& a, const Pattern& b) {
    if (a.z2_samples.size() != b.z2_samples.size()) {
        throw std::domain_error("compare_patterns: grid size mismatch");
    }
    for (std::size_t i = 0; i < a.z2_samples.size(); ++i) {
        if (std::abs(a.z2_samples[i] - b.z2_samples[i]) > 1e-12) {
            throw std::domain_error("compare_patterns: grid coordinate mismatch");
        }
    }
    Pattern pa = a, pb = b;
    if (a.metadata.normalization_mode != b.metadata.normalization_mode) {
        pa = unit_peak(a);
        pb = unit_peak(b);
    }
    ComparisonReport r;
    double peak = 0.0, sum_b = 0.0, sum_d = 0.0;
    for (double v : pb.intensity) peak = std::max(peak, std::abs(v));
    for (std::size_t i = 0; i < pa.intensity.size(); ++i) {
        const double d = std::abs(pa.intensity[i] - pb.intensity[i]);
        sum_d += d * d;
        sum_b += pb.intensity[i] * pb.intensity[i];
        if (d > r.max_abs_error) {
            r.max_abs_error = d;
            r.location_of_max = pa.z2_samples[i];
        }
    }
    r.max_rel_error = (peak > 0.0) ? r.max_abs_error / peak : 0.0;
    r.l2_error = (sum_b > 0.0) ? std::sqrt(sum_d / sum_b) : std::sqrt(sum_d);
    return r;
}

}  // namespace ghost
