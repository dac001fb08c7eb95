#pragma once

#include "nullgauge/rk4.hpp"

namespace nullgauge {

struct KgmDiagnostics {
    double total_charge = 0.0;
    double lorenz_residual_max = 0.0;
    double energy = 0.0;
    double current_divergence_max = 0.0;
};

// Contravariant current (j^0, j^1) of the complex field.
inline Potential kg_current(const ComplexField& psi, const ComplexField& psi_dot, const ComplexField& psi_x,
                            const Potential& a, const PhysicalConstants& c) {
    const std::size_t n = psi.size();
    Potential j = zero_potential(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double rho = std::norm(psi[i]);
        j[0][i] = -2.0 * c.e * std::imag(std::conj(psi[i]) * psi_dot[i]) - 2.0 * c.e * c.e * a[0][i] * rho;
        j[1][i] = 2.0 * c.e * std::imag(std::conj(psi[i]) * psi_x[i]) - 2.0 * c.e * c.e * a[1][i] * rho;
    }
    return j;
}

inline Potential kg_current(const ComplexKgmState& s, const GridSpec& g, const PhysicalConstants& c) {
    check_state(s, g, "kg_current");
    return kg_current(s.psi, s.psi_dot, spatial_derivative(s.psi, g), s.a, c);
}

struct KgmAccel {
    ComplexField psi_ddot;
    Potential a_ddot;
};

// Second time derivatives in Lorenz gauge. The A^1 coupling is split as D(A^1 psi) + A^1 D psi,
// which is skew on the lattice and makes the semi-discrete charge exactly conserved.
inline KgmAccel kgm_rhs(const ComplexKgmState& s, const GridSpec& g, const PhysicalConstants& c) {
    check_state(s, g, "kgm_rhs");
    const std::size_t n = g.n_x();
    const cplx ie(0.0, c.e);
    const ComplexField psi_x = spatial_derivative(s.psi, g);
    const ComplexField lap = laplacian_1d(s.psi, g);
    ComplexField a1psi(n);
    for (std::size_t i = 0; i < n; ++i) a1psi[i] = s.a[1][i] * s.psi[i];
    const ComplexField d_a1psi = spatial_derivative(a1psi, g);

    KgmAccel r{ComplexField(n), zero_potential(n)};
    for (std::size_t i = 0; i < n; ++i) {
        const double a0 = s.a[0][i], a1 = s.a[1][i];
        r.psi_ddot[i] = lap[i] - ie * (s.a_dot[0][i] * s.psi[i] + d_a1psi[i] + a1 * psi_x[i]) -
                        2.0 * ie * a0 * s.psi_dot[i] + (c.e * c.e * (a0 * a0 - a1 * a1) - c.m * c.m) * s.psi[i];
    }
    const Potential j = kg_current(s.psi, s.psi_dot, psi_x, s.a, c);
    for (int mu = 0; mu < 2; ++mu) {
        const RealField lap_a = laplacian_1d(s.a[mu], g);
        for (std::size_t i = 0; i < n; ++i) r.a_ddot[mu][i] = lap_a[i] + j[mu][i];
    }
    return r;
}

inline ComplexKgmState kgm_rate(const ComplexKgmState& s, const GridSpec& g, const PhysicalConstants& c) {
    KgmAccel acc = kgm_rhs(s, g, c);
    return {s.psi_dot, std::move(acc.psi_ddot), s.a_dot, std::move(acc.a_ddot), 1.0};
}

inline ComplexKgmState kgm_step(const ComplexKgmState& s, const GridSpec& g, const PhysicalConstants& c) {
    ComplexKgmState out = rk4_step(s, g.dt(), [&](const ComplexKgmState& y) { return kgm_rate(y, g, c); });
    require_finite(out, "kgm_step");
    return out;
}

// Energy density 1/2(|D_0 psi|^2 + |D_1 psi|^2 + m^2|psi|^2) + 1/4 E^2, with D_mu = d_mu + ie A_mu
// and E = -d_x A^0 - d_t A^1. The Maxwell term carries the normalization under which the
// field equations read box A = j.
inline RealField kgm_energy_density(const ComplexKgmState& s, const GridSpec& g, const PhysicalConstants& c) {
    check_state(s, g, "kgm_energy_density");
    const std::size_t n = g.n_x();
    const cplx ie(0.0, c.e);
    const ComplexField psi_x = spatial_derivative(s.psi, g);
    const RealField a0_x = spatial_derivative(s.a[0], g);
    RealField eps(n);
    for (std::size_t i = 0; i < n; ++i) {
        const cplx d0 = s.psi_dot[i] + ie * s.a[0][i] * s.psi[i];
        const cplx d1 = psi_x[i] - ie * s.a[1][i] * s.psi[i];
        const double ef = -a0_x[i] - s.a_dot[1][i];
        eps[i] = 0.5 * (std::norm(d0) + std::norm(d1) + c.m * c.m * std::norm(s.psi[i])) + 0.25 * ef * ef;
    }
    return eps;
}

inline KgmDiagnostics kgm_diagnostics(const ComplexKgmState& s, const GridSpec& g, const PhysicalConstants& c) {
    const std::size_t n = g.n_x();
    const double dx = g.dx();
    const ComplexField psi_x = spatial_derivative(s.psi, g);
    const Potential j = kg_current(s.psi, s.psi_dot, psi_x, s.a, c);
    const KgmAccel acc = kgm_rhs(s, g, c);
    const RealField a1_x = spatial_derivative(s.a[1], g);
    const RealField j1_x = spatial_derivative(j[1], g);

    KgmDiagnostics d;
    d.total_charge = sum(j[0]) * dx;
    d.energy = sum(kgm_energy_density(s, g, c)) * dx;
    for (std::size_t i = 0; i < n; ++i) {
        d.lorenz_residual_max = std::max(d.lorenz_residual_max, std::abs(s.a_dot[0][i] + a1_x[i]));
        const double rho = std::norm(s.psi[i]);
        const double j0_dot = -2.0 * c.e * std::imag(std::conj(s.psi[i]) * acc.psi_ddot[i]) -
                              2.0 * c.e * c.e *
                                  (s.a_dot[0][i] * rho + 2.0 * s.a[0][i] * std::real(std::conj(s.psi[i]) * s.psi_dot[i]));
        d.current_divergence_max = std::max(d.current_divergence_max, std::abs(j0_dot + j1_x[i]));
    }
    return d;
}

}  // namespace nullgauge
