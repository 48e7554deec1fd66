// Closed-form complex Gaussian algebra for one- and two-coordinate
// wavefunctions: construction, normalization, free evolution, inner
// products and pointwise evaluation. Natural units hbar = m = 1; the
// only dynamical parameter is tau = hbar*t/m, related to a flight
// distance L by tau = lambda*L/(2*pi).

#pragma once

#include <array>
#include <complex>

namespace ghost {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Evolution parameter tau = hbar*t/m (units of length^2).
struct EvolutionParam {
    double tau = 0.0;

    EvolutionParam() = default;
    explicit EvolutionParam(double t);

    /// tau accumulated over a flight distance L at de Broglie wavelength
    /// lambda: tau = lambda*L/(2*pi).
    static EvolutionParam from_path(double lambda, double L);
};

/// One-coordinate Gaussian amplitude
///   psi(z) = exp(log_coeff) * exp(-(z - center)^2 / width + i*linear_phase*z)
/// with Re(width) > 0. The log-amplitude absorbs all prefactors.
struct GaussianPacket {
    cplx log_coeff{0.0, 0.0};
    double center = 0.0;
    cplx width{1.0, 0.0};
    double linear_phase = 0.0;

    GaussianPacket() = default;
    GaussianPacket(cplx log_coeff_, double center_, cplx width_,
                   double linear_phase_ = 0.0);

    /// Amplitude at z.
    cplx operator()(double z) const;

    double norm_sq() const;
    double norm() const;

    /// Same packet scaled to unit norm.
    GaussianPacket normalized() const;

    /// Canonical coefficients {a, b, c} of exp(-a z^2 + b z + c).
    std::array<cplx, 3> canonical() const;
    static GaussianPacket from_canonical(cplx a, cplx b, cplx c);
};

/// Normalized slit wavepacket (pi/2)^{-1/4} eps^{-1/2} exp(-(z-center)^2/eps^2).
GaussianPacket slit_packet(double center, double epsilon);

/// Free-particle evolution: width -> width + 2i*tau, center drifts with the
/// plane-wave momentum, norm preserved.
GaussianPacket free_evolve(const GaussianPacket& p, EvolutionParam tau);

/// <p|q> (conjugate on the first argument).
cplx packet_overlap(const GaussianPacket& p, const GaussianPacket& q);

/// Two-coordinate Gaussian amplitude
///   Psi(z1,z2) = exp(-(z * quad * z) + lin.z + log_coeff),
/// quad complex symmetric with positive-definite real part.
struct BipartiteGaussianState {
    cplx quad11{1.0, 0.0};
    cplx quad12{0.0, 0.0};
    cplx quad22{1.0, 0.0};
    std::array<cplx, 2> lin{cplx{0.0}, cplx{0.0}};
    cplx log_coeff{0.0, 0.0};

    cplx operator()(double z1, double z2) const;
    double norm_sq() const;
    double norm() const;
    BipartiteGaussianState normalized() const;

    /// Throws std::domain_error unless Re(quad) is positive definite.
    void validate() const;
};

/// Generalized EPR state ~ exp[-(z1-z2)^2 sigma^2 - (z1+z2)^2/(4 Omega^2)],
/// normalized to unit total norm.
BipartiteGaussianState make_epr(double sigma, double omega);

/// Free evolution of both coordinates for time tau; norm preserved.
BipartiteGaussianState free_evolve(const BipartiteGaussianState& s,
                                   EvolutionParam tau);

/// psi(z2) = <probe(z1) | Psi(z1, z2)>, an unnormalized packet whose
/// squared norm is the branch probability.
GaussianPacket project_particle1(const BipartiteGaussianState& s,
                                 const GaussianPacket& probe);

cplx evaluate_packet(const GaussianPacket& p, double z);
cplx evaluate_bipartite(const BipartiteGaussianState& s, double z1, double z2);

}  // namespace ghost
