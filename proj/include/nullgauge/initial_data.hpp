#pragma once

#include <boost/math/quadrature/gauss.hpp>
#include <numbers>

#include "nullgauge/unitary.hpp"

namespace nullgauge {

inline ComplexKgmState zero_kgm_state(const GridSpec& g) { return ComplexKgmState::zeros(g.n_x()); }

// psi = amp exp(i k x) with k = 2 pi mode / L, psi_t = -i omega psi, omega^2 = k^2 + m^2, A = 0.
// A solution of the uncoupled (e = 0) equations.
inline ComplexKgmState plane_wave(const GridSpec& g, const PhysicalConstants& c, double amp, int mode) {
    const double k = 2.0 * std::numbers::pi * mode / g.length();
    const double omega = std::sqrt(k * k + c.m * c.m);
    ComplexKgmState s = ComplexKgmState::zeros(g.n_x());
    for (std::size_t j = 0; j < g.n_x(); ++j) {
        s.psi[j] = amp * std::polar(1.0, k * g.x(j));
        s.psi_dot[j] = cplx(0.0, -omega) * s.psi[j];
    }
    return s;
}

inline double plane_wave_omega(const GridSpec& g, const PhysicalConstants& c, int mode) {
    const double k = 2.0 * std::numbers::pi * mode / g.length();
    return std::sqrt(k * k + c.m * c.m);
}

// Two Gaussian bumps on a uniform background, carrying opposite charge so that the periodic Gauss
// law is solvable. psi(-x) = conj(psi(x)): the density is even about x = 0, the frequency profile
// and the momentum profile odd and even respectively. B^0 then vanishes only at x = 0 and x = L/2,
// which lie midway between lattice sites.
struct NeutralPacketParams {
    double amplitude = 0.2;
    double bump = 0.3;      // relative height of the Gaussians above the background
    double width = 1.5;     // Gaussian width
    double frequency = 1.0; // |psi_t / psi| at the packet centres
    double profile_eps = 1.0;
    double momentum = 0.5;  // phase gradient at the packet centres (sign: -momentum at both)
};

namespace detail {

struct PacketProfile {
    NeutralPacketParams p;
    double length;
    double kappa;

    // Periodic Gaussian centred at x0.
    double gauss(double x, double x0) const {
        const double s = kappa * p.width;
        return std::exp((std::cos(kappa * (x - x0)) - 1.0) / (s * s));
    }
    double density(double x) const {
        return p.amplitude * (1.0 + p.bump * (gauss(x, 0.25 * length) + gauss(x, -0.25 * length)));
    }
    double omega(double x) const {
        const double sn = std::sin(kappa * x);
        const double eps = p.profile_eps;
        return p.frequency * sn / std::sqrt(sn * sn + eps * eps) * std::sqrt(1.0 + eps * eps);
    }
    // Phase S with S' = (k/2)(cos 2 kappa x - cos 4 kappa x): zero mean, zero at x = 0 and L/2.
    double phase(double x) const {
        return 0.5 * p.momentum * (std::sin(2.0 * kappa * x) / (2.0 * kappa) - std::sin(4.0 * kappa * x) / (4.0 * kappa));
    }
};

}  // namespace detail

// Periodic zero-mean antiderivative of f sampled at the sites, integrated with Gauss-Legendre
// quadrature on each cell. Throws if f has nonzero integral over the period.
template <class F>
RealField periodic_antiderivative(F&& f, const GridSpec& g, double neutrality_tol = 1e-10) {
    using boost::math::quadrature::gauss;
    const std::size_t n = g.n_x();
    const double dx = g.dx();
    RealField out(n);
    double acc = gauss<double, 15>::integrate(f, 0.0, 0.5 * dx);
    double total_abs = 0.0;
    out[0] = acc;
    for (std::size_t j = 1; j < n; ++j) {
        const double piece = gauss<double, 15>::integrate(f, g.x(j - 1), g.x(j));
        acc += piece;
        total_abs += std::abs(piece);
        out[j] = acc;
    }
    const double last = gauss<double, 15>::integrate(f, g.x(n - 1), g.length());
    const double total = acc + last;
    if (std::abs(total) > neutrality_tol * std::max(total_abs, 1e-300))
        throw InvalidArgument("periodic_antiderivative: integrand has nonzero mean (" + std::to_string(total) + ")");
    const double mean = sum(out) / static_cast<double>(n);
    for (double& v : out) v -= mean;
    return out;
}

// Complex slice with A = 0, Lorenz condition satisfied, and d_t A^1 fixed by the Gauss law.
inline ComplexKgmState neutral_packet(const GridSpec& g, const PhysicalConstants& c, const NeutralPacketParams& p = {}) {
    const detail::PacketProfile prof{p, g.length(), 2.0 * std::numbers::pi / g.length()};
    ComplexKgmState s = ComplexKgmState::zeros(g.n_x());
    for (std::size_t j = 0; j < g.n_x(); ++j) {
        const double x = g.x(j);
        s.psi[j] = prof.density(x) * std::polar(1.0, prof.phase(x));
        s.psi_dot[j] = cplx(0.0, -prof.omega(x)) * s.psi[j];
    }
    // j^0 = 2 e Omega rho^2 and d_x E = j^0 with E = -d_t A^1.
    auto j0 = [&](double x) {
        const double r = prof.density(x);
        return 2.0 * c.e * prof.omega(x) * r * r;
    };
    const RealField integral = periodic_antiderivative(j0, g);
    for (std::size_t j = 0; j < g.n_x(); ++j) s.a_dot[1][j] = -integral[j];
    return s;
}

// Potential-only slice B^0 = a cos(k x) + c0, B^1 = 0, zero time derivatives.
inline EmOnlyState cos_profile(const GridSpec& g, double a, int mode, double c0) {
    const double k = 2.0 * std::numbers::pi * mode / g.length();
    EmOnlyState em = EmOnlyState::zeros(g.n_x());
    for (std::size_t j = 0; j < g.n_x(); ++j) em.b[0][j] = a * std::cos(k * g.x(j)) + c0;
    return em;
}

}  // namespace nullgauge
