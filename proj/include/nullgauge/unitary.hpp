#pragma once

#include <numbers>

#include "nullgauge/kgm.hpp"

namespace nullgauge {

struct GaugeTransformResult {
    UnitaryState unitary;
    RealField theta;
    std::vector<std::size_t> node_sites;
    // Net phase change around the periodic loop in units of pi. Zero when a global real gauge exists.
    int half_turns = 0;
};

struct ToUnitaryOptions {
    double node_threshold_rel = 1e-8;
    bool require_periodic = true;
};

// psi = exp(-i theta) phi with phi real and signed, B_mu = A_mu - d_mu theta / e, so that
// B^0 = A^0 - theta_t / e and B^1 = A^1 + theta_x / e.
inline GaugeTransformResult to_unitary(const ComplexKgmState& s, const GridSpec& g, const PhysicalConstants& c,
                                       const ToUnitaryOptions& opt = {}) {
    check_state(s, g, "to_unitary");
    c.require_coupling("to_unitary");
    const std::size_t n = g.n_x();
    const double pi = std::numbers::pi;
    const double thr = opt.node_threshold_rel * max_abs(s.psi);

    GaugeTransformResult res;
    // Vacuum: no matter field, the phase is immaterial and B = A.
    if (max_abs(s.psi) == 0.0 && max_abs(s.psi_dot) == 0.0) {
        res.unitary = {RealField(n, 0.0), RealField(n, 0.0), s.a, s.a_dot, s.t};
        res.theta = RealField(n, 0.0);
        return res;
    }
    for (std::size_t j = 0; j < n; ++j)
        if (!(std::abs(s.psi[j]) > thr)) res.node_sites.push_back(j);
    if (!res.node_sites.empty())
        throw NodeError("to_unitary: psi vanishes at " + std::to_string(res.node_sites.size()) +
                            " site(s), first at index " + std::to_string(res.node_sites.front()),
                        res.node_sites, s.t);

    // Follow theta continuously from site 0; a jump by an odd multiple of pi is absorbed into the sign of phi.
    RealField theta(n), phi(n);
    auto follow = [&](double prev, std::size_t j, double& th, double& ph) {
        const double raw = -std::arg(s.psi[j]);
        const double shifts = std::round((prev - raw) / pi);
        th = raw + shifts * pi;
        const bool odd = std::fmod(std::abs(shifts), 2.0) == 1.0;
        ph = odd ? -std::abs(s.psi[j]) : std::abs(s.psi[j]);
    };
    theta[0] = -std::arg(s.psi[0]);
    phi[0] = std::abs(s.psi[0]);
    for (std::size_t j = 1; j < n; ++j) follow(theta[j - 1], j, theta[j], phi[j]);
    double th_wrap = 0.0, ph_wrap = 0.0;
    follow(theta[n - 1], 0, th_wrap, ph_wrap);
    res.half_turns = static_cast<int>(std::lround((th_wrap - theta[0]) / pi));
    if (opt.require_periodic && res.half_turns != 0)
        throw WindingError("to_unitary: phase winds by " + std::to_string(res.half_turns) +
                               " half turn(s) around the periodic domain; no global real gauge exists",
                           res.half_turns, s.t);

    const KgmAccel acc = kgm_rhs(s, g, c);
    const ComplexField psi_x = spatial_derivative(s.psi, g);
    RealField theta_t(n), theta_tt(n), theta_x(n), phi_dot(n);
    for (std::size_t j = 0; j < n; ++j) {
        const cplx r = std::polar(1.0, theta[j]);
        phi_dot[j] = std::real(r * s.psi_dot[j]);
        theta_t[j] = -std::imag(r * s.psi_dot[j]) / phi[j];
        theta_tt[j] = -(std::imag(r * acc.psi_ddot[j]) + 2.0 * theta_t[j] * phi_dot[j]) / phi[j];
        theta_x[j] = -std::imag(r * psi_x[j]) / phi[j];
    }
    const RealField theta_tx = spatial_derivative(theta_t, g);

    UnitaryState& u = res.unitary;
    u = UnitaryState::zeros(n);
    u.t = s.t;
    u.phi = phi;
    u.phi_dot = phi_dot;
    for (std::size_t j = 0; j < n; ++j) {
        u.b[0][j] = s.a[0][j] - theta_t[j] / c.e;
        u.b[1][j] = s.a[1][j] + theta_x[j] / c.e;
        u.b_dot[0][j] = s.a_dot[0][j] - theta_tt[j] / c.e;
        u.b_dot[1][j] = s.a_dot[1][j] + theta_tx[j] / c.e;
    }
    res.theta = std::move(theta);
    return res;
}

// Contravariant current j^mu = -2 e^2 B^mu phi^2.
inline Potential unitary_current(const UnitaryState& u, const PhysicalConstants& c) {
    const std::size_t n = u.phi.size();
    Potential j = zero_potential(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double p2 = u.phi[i] * u.phi[i];
        j[0][i] = -2.0 * c.e * c.e * u.b[0][i] * p2;
        j[1][i] = -2.0 * c.e * c.e * u.b[1][i] * p2;
    }
    return j;
}

inline RealField charge_density(const UnitaryState& u, const PhysicalConstants& c) {
    return unitary_current(u, c)[0];
}

// phi_tt from the real-field wave equation, shared by the direct and the field-only steppers.
inline RealField unitary_phi_ddot(const RealField& phi, const Potential& b, const GridSpec& g,
                                  const PhysicalConstants& c) {
    const RealField lap = laplacian_1d(phi, g);
    RealField out(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) {
        const double bb = b[0][i] * b[0][i] - b[1][i] * b[1][i];
        out[i] = lap[i] + (c.e * c.e * bb - c.m * c.m) * phi[i];
    }
    return out;
}

// B^1_tt = -d_x B^0_t + j^1.
inline RealField unitary_b1_ddot(const RealField& phi, const Potential& b, const Potential& b_dot,
                                 const GridSpec& g, const PhysicalConstants& c) {
    const RealField db0t = spatial_derivative(b_dot[0], g);
    RealField out(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i)
        out[i] = -db0t[i] - 2.0 * c.e * c.e * b[1][i] * phi[i] * phi[i];
    return out;
}

struct UnitaryAccel {
    RealField phi_ddot;
    Potential b_ddot;
};

inline bool is_vacuum(const RealField& phi, const RealField& phi_dot) {
    return max_abs(phi) == 0.0 && max_abs(phi_dot) == 0.0;
}

// B^0_tt is closed by differentiating the flux-form continuity d_t(B^0 phi^2) + d_x(B^1 phi^2) = 0
// in time. The lattice charge sum(B^0 phi^2) and the lattice Gauss residual are then invariants of
// the semi-discrete flow. In a vacuum slice B^0_tt is pure gauge and set to zero.
inline UnitaryAccel unitary_rhs(const UnitaryState& u, const GridSpec& g, const PhysicalConstants& c,
                                double node_threshold_rel = 1e-8) {
    check_state(u, g, "unitary_rhs");
    const std::size_t n = g.n_x();
    UnitaryAccel r{unitary_phi_ddot(u.phi, u.b, g, c), zero_potential(n)};
    r.b_ddot[1] = unitary_b1_ddot(u.phi, u.b, u.b_dot, g, c);
    if (is_vacuum(u.phi, u.phi_dot)) return r;

    const double floor = node_threshold_rel * max_abs(u.phi);
    std::vector<std::size_t> nodes;
    for (std::size_t i = 0; i < n; ++i)
        if (!(std::abs(u.phi[i]) > floor)) nodes.push_back(i);
    if (!nodes.empty())
        throw NodeError("unitary_rhs: phi passes through zero at site " + std::to_string(nodes.front()) +
                            "; the B^0 closure is singular there",
                        nodes, u.t);

    RealField flux(n);
    for (std::size_t i = 0; i < n; ++i)
        flux[i] = u.b_dot[1][i] * u.phi[i] * u.phi[i] + 2.0 * u.b[1][i] * u.phi[i] * u.phi_dot[i];
    const RealField dflux = spatial_derivative(flux, g);
    for (std::size_t i = 0; i < n; ++i) {
        const double p = u.phi[i], pd = u.phi_dot[i];
        r.b_ddot[0][i] = -(4.0 * u.b_dot[0][i] * p * pd + 2.0 * u.b[0][i] * (pd * pd + p * r.phi_ddot[i]) + dflux[i]) /
                         (p * p);
    }
    return r;
}

inline UnitaryState unitary_rate(const UnitaryState& u, const GridSpec& g, const PhysicalConstants& c) {
    UnitaryAccel acc = unitary_rhs(u, g, c);
    return {u.phi_dot, std::move(acc.phi_ddot), u.b_dot, std::move(acc.b_ddot), 1.0};
}

inline UnitaryState unitary_step(const UnitaryState& u, const GridSpec& g, const PhysicalConstants& c) {
    UnitaryState out = rk4_step(u, g.dt(), [&](const UnitaryState& y) { return unitary_rate(y, g, c); });
    require_finite(out, "unitary_step");
    return out;
}

// Electric field E = -d_x A^0 - d_t A^1 (same expression in either gauge).
inline RealField electric_field(const Potential& b, const Potential& b_dot, const GridSpec& g) {
    const RealField b0x = spatial_derivative(b[0], g);
    RealField ef(b0x.size());
    for (std::size_t i = 0; i < ef.size(); ++i) ef[i] = -b0x[i] - b_dot[1][i];
    return ef;
}

// Lagrangian density 1/4 E^2 + 1/2 e^2 B.B phi^2 + 1/2 (d phi . d phi - m^2 phi^2), the Maxwell term
// normalized as in kgm_energy_density.
inline RealField unitary_lagrangian_density(const UnitaryState& u, const GridSpec& g, const PhysicalConstants& c) {
    check_state(u, g, "unitary_lagrangian_density");
    const RealField ef = electric_field(u.b, u.b_dot, g);
    const RealField phi_x = spatial_derivative(u.phi, g);
    RealField l(u.phi.size());
    for (std::size_t i = 0; i < l.size(); ++i) {
        const double p2 = u.phi[i] * u.phi[i];
        const double bb = u.b[0][i] * u.b[0][i] - u.b[1][i] * u.b[1][i];
        l[i] = 0.25 * ef[i] * ef[i] + 0.5 * c.e * c.e * bb * p2 +
               0.5 * (u.phi_dot[i] * u.phi_dot[i] - phi_x[i] * phi_x[i] - c.m * c.m * p2);
    }
    return l;
}

inline RealField unitary_energy_density(const UnitaryState& u, const GridSpec& g, const PhysicalConstants& c) {
    check_state(u, g, "unitary_energy_density");
    const RealField ef = electric_field(u.b, u.b_dot, g);
    const RealField phi_x = spatial_derivative(u.phi, g);
    RealField eps(u.phi.size());
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const double p2 = u.phi[i] * u.phi[i];
        const double bb = u.b[0][i] * u.b[0][i] + u.b[1][i] * u.b[1][i];
        eps[i] = 0.5 * (u.phi_dot[i] * u.phi_dot[i] + phi_x[i] * phi_x[i] + c.m * c.m * p2 + c.e * c.e * bb * p2) +
                 0.25 * ef[i] * ef[i];
    }
    return eps;
}

struct UnitaryDiagnostics {
    double total_charge = 0.0;
    double charge_scale = 0.0;  // sum |j^0| dx
    double energy = 0.0;
    double gauss_residual_max = 0.0;
    double continuity_residual_max = 0.0;
    double phi_min = 0.0;
    double phi_max = 0.0;
};

inline UnitaryDiagnostics unitary_diagnostics(const UnitaryState& u, const GridSpec& g, const PhysicalConstants& c) {
    const std::size_t n = g.n_x();
    const double dx = g.dx();
    const Potential j = unitary_current(u, c);
    const RealField div_e = spatial_derivative(electric_field(u.b, u.b_dot, g), g);
    RealField flux(n);
    for (std::size_t i = 0; i < n; ++i) flux[i] = u.b[1][i] * u.phi[i] * u.phi[i];
    const RealField dflux = spatial_derivative(flux, g);

    UnitaryDiagnostics d;
    d.total_charge = sum(j[0]) * dx;
    d.charge_scale = sum(abs_field(j[0])) * dx;
    d.energy = sum(unitary_energy_density(u, g, c)) * dx;
    d.phi_min = *std::min_element(u.phi.begin(), u.phi.end());
    d.phi_max = *std::max_element(u.phi.begin(), u.phi.end());
    for (std::size_t i = 0; i < n; ++i) {
        d.gauss_residual_max = std::max(d.gauss_residual_max, std::abs(div_e[i] - j[0][i]));
        const double cont = u.b_dot[0][i] * u.phi[i] * u.phi[i] + 2.0 * u.b[0][i] * u.phi[i] * u.phi_dot[i] + dflux[i];
        d.continuity_residual_max = std::max(d.continuity_residual_max, std::abs(cont));
    }
    return d;
}

}  // namespace nullgauge
