#include "ghost/gaussian.hpp"

#include <cmath>
#include <stdexcept>

namespace ghost {

namespace {

// log of the 1D Gaussian integral: log( integral exp(-A z^2 + B z) dz )
// = 0.5*log(pi/A) + B^2/(4A), valid for Re(A) > 0.
cplx log_gauss_integral(cplx A, cplx B) {
    if (A.real() <= 0.0) {
        throw std::domain_error("gaussian integral: Re(quadratic coefficient) <= 0");
    }
    return 0.5 * std::log(kPi / A) + B * B / (4.0 * A);
}

}  // namespace

EvolutionParam::EvolutionParam(double t) : tau(t) {
    if (!(t >= 0.0)) {
        throw std::domain_error("EvolutionParam: tau must be >= 0");
    }
}

EvolutionParam EvolutionParam::from_path(double lambda, double L) {
    if (!(lambda > 0.0) || !(L >= 0.0)) {
        throw std::domain_error("EvolutionParam::from_path: need lambda > 0, L >= 0");
    }
    return EvolutionParam(lambda * L / (2.0 * kPi));
}

GaussianPacket::GaussianPacket(cplx log_coeff_, double center_, cplx width_,
                               double linear_phase_)
    : log_coeff(log_coeff_), center(center_), width(width_),
      linear_phase(linear_phase_) {
    if (!(width.real() > 0.0)) {
        throw std::domain_error("GaussianPacket: Re(width) must be > 0");
    }
}

cplx GaussianPacket::operator()(double z) const {
    const double d = z - center;
    return std::exp(log_coeff - d * d / width + cplx(0.0, linear_phase * z));
}

double GaussianPacket::norm_sq() const {
    // |psi|^2 = e^{2 Re lc} exp(-2 Re(1/width) (z-center)^2)
    const double ar = (1.0 / width).real();
    return std::exp(2.0 * log_coeff.real()) * std::sqrt(kPi / (2.0 * ar));
}

double GaussianPacket::norm() const { return std::sqrt(norm_sq()); }

GaussianPacket GaussianPacket::normalized() const {
    GaussianPacket p = *this;
    p.log_coeff -= 0.5 * std::log(norm_sq());
    return p;
}

std::array<cplx, 3> GaussianPacket::canonical() const {
    const cplx a = 1.0 / width;
    const cplx b = 2.0 * center * a + cplx(0.0, linear_phase);
    const cplx c = log_coeff - center * center * a;
    return {a, b, c};
}

GaussianPacket GaussianPacket::from_canonical(cplx a, cplx b, cplx c) {
    if (!(a.real() > 0.0)) {
        throw std::domain_error("from_canonical: Re(a) must be > 0");
    }
    // Split b = 2*c0*a + i*k with real c0, k. Re(b) = 2*c0*Re(a).
    const double c0 = b.real() / (2.0 * a.real());
    const double k = b.imag() - 2.0 * c0 * a.imag();
    const cplx lc = c + a * (c0 * c0);
    return GaussianPacket(lc, c0, 1.0 / a, k);
}

GaussianPacket slit_packet(double center, double epsilon) {
    if (!(epsilon > 0.0)) {
        throw std::domain_error("slit_packet: epsilon must be > 0");
    }
    const double lc = -0.25 * std::log(kPi / 2.0) - 0.5 * std::log(epsilon);
    return GaussianPacket(cplx(lc, 0.0), center, cplx(epsilon * epsilon, 0.0));
}

GaussianPacket free_evolve(const GaussianPacket& p, EvolutionParam tau) {
    if (!(tau.tau >= 0.0)) {
        throw std::domain_error("free_evolve: tau must be >= 0");
    }
    if (tau.tau == 0.0) return p;
    const auto [a, b, c] = p.canonical();
    const cplx g = 1.0 + cplx(0.0, 2.0 * tau.tau) * a;
    const cplx a2 = a / g;
    const cplx b2 = b / g;
    const cplx c2 = c + cplx(0.0, 0.5 * tau.tau) * b * b / g - 0.5 * std::log(g);
    return GaussianPacket::from_canonical(a2, b2, c2);
}

cplx packet_overlap(const GaussianPacket& p, const GaussianPacket& q) {
    const auto [ap, bp, cp] = p.canonical();
    const auto [aq, bq, cq] = q.canonical();
    const cplx A = std::conj(ap) + aq;
    const cplx B = std::conj(bp) + bq;
    const cplx C = std::conj(cp) + cq;
    return std::exp(log_gauss_integral(A, B) + C);
}

cplx BipartiteGaussianState::operator()(double z1, double z2) const {
    const cplx quad = quad11 * z1 * z1 + 2.0 * quad12 * z1 * z2 + quad22 * z2 * z2;
    return std::exp(-quad + lin[0] * z1 + lin[1] * z2 + log_coeff);
}

void BipartiteGaussianState::validate() const {
    const double r11 = quad11.real();
    const double r22 = quad22.real();
    const double r12 = quad12.real();
    if (!(r11 > 0.0) || !(r11 * r22 - r12 * r12 > 0.0)) {
        throw std::domain_error(
            "BipartiteGaussianState: Re(quad) must be positive definite");
    }
}

double BipartiteGaussianState::norm_sq() const {
    validate();
    // |Psi|^2 = exp(-z^T A z + r.z + 2 Re lc), A = 2 Re(quad), r = 2 Re(lin).
    const double a11 = 2.0 * quad11.real();
    const double a12 = 2.0 * quad12.real();
    const double a22 = 2.0 * quad22.real();
    const double det = a11 * a22 - a12 * a12;
    const double r1 = 2.0 * lin[0].real();
    const double r2 = 2.0 * lin[1].real();
    // r^T A^{-1} r / 4
    const double q = (a22 * r1 * r1 - 2.0 * a12 * r1 * r2 + a11 * r2 * r2) /
                     (4.0 * det);
    return std::exp(2.0 * log_coeff.real() + q) * kPi / std::sqrt(det);
}

double BipartiteGaussianState::norm() const { return std::sqrt(norm_sq()); }

BipartiteGaussianState BipartiteGaussianState::normalized() const {
    BipartiteGaussianState s = *this;
    s.log_coeff -= 0.5 * std::log(norm_sq());
    return s;
}

BipartiteGaussianState make_epr(double sigma, double omega) {
    if (!(sigma > 0.0) || !(omega > 0.0)) {
        throw std::domain_error("make_epr: sigma and omega must be > 0");
    }
    BipartiteGaussianState s;
    const double q = 1.0 / (4.0 * omega * omega);
    const double s2 = sigma * sigma;
    s.quad11 = cplx(s2 + q, 0.0);
    s.quad22 = cplx(s2 + q, 0.0);
    s.quad12 = cplx(-s2 + q, 0.0);
    s.lin = {cplx{0.0}, cplx{0.0}};
    // Prefactor sqrt(2*sigma/(pi*Omega)) gives unit total norm.
    s.log_coeff = 0.5 * std::log(2.0 * sigma / (kPi * omega));
    return s;
}

BipartiteGaussianState free_evolve(const BipartiteGaussianState& s,
                                   EvolutionParam tau) {
    if (!(tau.tau >= 0.0)) {
        throw std::domain_error("free_evolve: tau must be >= 0");
    }
    s.validate();
    if (tau.tau == 0.0) return s;
    const cplx it2(0.0, 2.0 * tau.tau);
    // G = I + 2i*tau*M
    const cplx g11 = 1.0 + it2 * s.quad11;
    const cplx g12 = it2 * s.quad12;
    const cplx g22 = 1.0 + it2 * s.quad22;
    const cplx detG = g11 * g22 - g12 * g12;
    // M' = G^{-1} M  (symmetric since G is a polynomial in M)
    const cplx i11 = g22 / detG, i12 = -g12 / detG, i22 = g11 / detG;
    BipartiteGaussianState r;
    r.quad11 = i11 * s.quad11 + i12 * s.quad12;
    r.quad12 = i11 * s.quad12 + i12 * s.quad22;
    r.quad22 = i12 * s.quad12 + i22 * s.quad22;
    // L' = G^{-1} L
    r.lin[0] = i11 * s.lin[0] + i12 * s.lin[1];
    r.lin[1] = i12 * s.lin[0] + i22 * s.lin[1];
    // c' = c + (i tau / 2) L^T G^{-1} L - 0.5 log det G
    const cplx lgl = s.lin[0] * r.lin[0] + s.lin[1] * r.lin[1];
    r.log_coeff = s.log_coeff + cplx(0.0, 0.5 * tau.tau) * lgl -
                  0.5 * std::log(detG);
    return r;
}

GaussianPacket project_particle1(const BipartiteGaussianState& s,
                                 const GaussianPacket& probe) {
    s.validate();
    const auto [ap, bp, cp] = probe.canonical();
    // Integrate conj(probe)*Psi over z1. Exponent in z1:
    //   -(conj(ap) + m11) z1^2 + (conj(bp) + L1 - 2 m12 z2) z1 + ...
    const cplx A = std::conj(ap) + s.quad11;
    const cplx B0 = std::conj(bp) + s.lin[0];
    const cplx B1 = -2.0 * s.quad12;
    // Result exponent in z2: -(m22 - B1^2/4A) z2^2 + (L2 + B0 B1/2A) z2
    //                        + (c + conj(cp) + B0^2/4A + 0.5 log(pi/A))
    const cplx a2 = s.quad22 - B1 * B1 / (4.0 * A);
    const cplx b2 = s.lin[1] + B0 * B1 / (2.0 * A);
    const cplx c2 = s.log_coeff + std::conj(cp) + log_gauss_integral(A, B0);
    return GaussianPacket::from_canonical(a2, b2, c2);
}

cplx evaluate_packet(const GaussianPacket& p, double z) { return p(z); }

cplx evaluate_bipartite(const BipartiteGaussianState& s, double z1, double z2) {
    return s(z1, z2);
}

}  // namespace ghost
