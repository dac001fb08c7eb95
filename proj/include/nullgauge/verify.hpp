#pragma once

#include <iomanip>
#include <sstream>
#include <numbers>

#include "nullgauge/scenario.hpp"

namespace nullgauge {

struct CheckLine {
    std::string suite;
    std::string name;
    bool pass = false;
    std::string detail;
};

namespace detail {

inline CheckLine check(const std::string& suite, const std::string& name, double value, double threshold,
                       bool at_least = false) {
    const bool ok = at_least ? value >= threshold : value <= threshold;
    std::ostringstream o;
    o << std::setprecision(6) << value << (at_least ? " >= " : " <= ") << threshold;
    return {suite, name, ok, o.str()};
}

inline GridSpec packet_grid(std::size_t n) {
    const double dx = 25.6 / static_cast<double>(n);
    return GridSpec(n, dx, 0.2 * dx);
}

inline std::vector<CheckLine> verify_grid() {
    std::vector<CheckLine> out;
    double err_d[3], err_l[3];
    for (int level = 0; level < 3; ++level) {
        const std::size_t n = 64u << level;
        const GridSpec g(n, 2.0 * std::numbers::pi / static_cast<double>(n), 0.1 * 2.0 * std::numbers::pi / n);
        RealField f(n);
        for (std::size_t j = 0; j < n; ++j) f[j] = std::sin(g.x(j)) + 0.5 * std::cos(3.0 * g.x(j));
        const RealField d = spatial_derivative(f, g), l = laplacian_1d(f, g);
        err_d[level] = err_l[level] = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double x = g.x(j);
            err_d[level] = std::max(err_d[level], std::abs(d[j] - (std::cos(x) - 1.5 * std::sin(3.0 * x))));
            err_l[level] = std::max(err_l[level], std::abs(l[j] - (-std::sin(x) - 4.5 * std::cos(3.0 * x))));
        }
    }
    out.push_back(check("grid", "derivative_order",
                        std::min(observed_order(err_d[0], err_d[1]), observed_order(err_d[1], err_d[2])), 1.9, true));
    out.push_back(check("grid", "laplacian_order",
                        std::min(observed_order(err_l[0], err_l[1]), observed_order(err_l[1], err_l[2])), 1.9, true));
    bool rejected = false;
    try {
        GridSpec(64, 0.1, 0.09);
    } catch (const InvalidArgument&) {
        rejected = true;
    }
    out.push_back({"grid", "cfl_rejected", rejected, rejected ? "dt/dx = 0.9 rejected" : "accepted"});
    return out;
}

inline std::vector<CheckLine> verify_kgm() {
    const GridSpec g = packet_grid(256);
    const PhysicalConstants c(1.0, 1.0);
    ComplexKgmState s = neutral_packet(g, c);
    const KgmDiagnostics d0 = kgm_diagnostics(s, g, c);
    const double scale = sum(abs_field(kg_current(s, g, c)[0])) * g.dx();
    for (int k = 0; k < 200; ++k) s = kgm_step(s, g, c);
    const KgmDiagnostics d1 = kgm_diagnostics(s, g, c);
    std::vector<CheckLine> out;
    out.push_back(check("kgm", "charge_drift", std::abs(d1.total_charge - d0.total_charge) / scale, 1e-6));
    out.push_back(check("kgm", "energy_drift", std::abs(d1.energy - d0.energy) / d0.energy, 1e-3));
    return out;
}

inline std::vector<CheckLine> verify_unitary() {
    const PhysicalConstants c(1.0, 1.0);
    double err[2];
    for (int level = 0; level < 2; ++level) {
        const GridSpec g = packet_grid(256u << level);
        ComplexKgmState s = neutral_packet(g, c);
        UnitaryState u = to_unitary(s, g, c).unitary;
        const auto steps = static_cast<int>(std::llround(0.5 / g.dt()));
        for (int k = 0; k < steps; ++k) {
            s = kgm_step(s, g, c);
            u = unitary_step(u, g, c);
        }
        err[level] = 0.0;
        for (std::size_t j = 0; j < g.n_x(); ++j)
            err[level] = std::max(err[level], std::abs(std::abs(s.psi[j]) - std::abs(u.phi[j])));
    }
    std::vector<CheckLine> out;
    out.push_back(check("unitary", "modulus_agreement_order", observed_order(err[0], err[1]), 1.7, true));
    return out;
}

inline std::vector<CheckLine> verify_em_only() {
    std::vector<CheckLine> out;
    const PhysicalConstants c(1.0, 1.0);
    const GridSpec g = packet_grid(256);
    const UnitaryState u = to_unitary(neutral_packet(g, c), g, c).unitary;
    const EmOnlyState em = project_to_em(u);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd;
    const LinearJetForm form = gauss_numerator_form();
    const RealField base = form.evaluate(LatticeJet{em, g}, g.n_x());
    std::size_t differing = 0;
    for (int trial = 0; trial < 100; ++trial) {
        Potential fake{RealField(g.n_x()), RealField(g.n_x())};
        for (auto& f : fake)
            for (auto& v : f) v = 1e3 * nd(rng);
        if (form.evaluate(LatticeJet{em, g, &fake}, g.n_x()) != base) ++differing;
    }
    out.push_back(check("em-only", "b_ddot_cancellation_mismatches", static_cast<double>(differing), 0.0));
    const RealField phi = reconstruct_phi(em, g, c);
    double err = 0.0;
    for (std::size_t j = 0; j < g.n_x(); ++j) err = std::max(err, std::abs(phi[j] - std::abs(u.phi[j])));
    out.push_back(check("em-only", "phi_reconstruction", err / max_abs(u.phi), 1e-3));
    bool threw = false;
    try {
        reconstruct_phi(cos_profile(g, 0.5, 1, 2.0), g, c);
    } catch (const NegativeRadicand&) {
        threw = true;
    }
    out.push_back({"em-only", "cos_profile_negative_radicand", threw, threw ? "NegativeRadicand" : "no breakdown"});
    return out;
}

inline std::vector<CheckLine> verify_bohm() {
    const PhysicalConstants c(1.0, 1.0);
    const GridSpec g = packet_grid(256);
    UnitaryState u = to_unitary(neutral_packet(g, c), g, c).unitary;
    std::vector<UnitaryState> slices{u};
    const auto steps = static_cast<int>(std::llround(1.0 / g.dt()));
    for (int k = 0; k < steps; ++k) slices.push_back(u = unitary_step(u, g, c));
    const Ensemble ens = sample_ensemble(abs_field(charge_density(slices.front(), c)), g, 2500, 12345);
    const AdvectResult r = advect_ensemble(ens, slices, g);
    const double l1 = histogram_l1(r.final, abs_field(charge_density(slices.back(), c)), g, 64);
    return {check("bohm", "histogram_l1", l1, 0.05)};
}

inline std::vector<CheckLine> verify_dirac_flow() {
    const PhysicalConstants c(1.0, 1.0);
    std::vector<CheckLine> out;
    auto deviation = [&](const AnalyticPotential& pot, double& ms_max) {
        const Vec2 x0{0.0, 0.7};
        const auto path = flow_line(pot, c.e, c.m, x0, 1e-3, 10000);
        RelParticle q = particle_on_potential(pot, c.e, x0);
        ms_max = 0.0;
        for (std::size_t k = 1; k < path.size(); ++k) {
            q = lorentz_push(q, pot, c.e, c.m, 1e-3);
            ms_max = std::max(ms_max, std::abs(mass_shell_residual(q, c.m)));
        }
        const FlowPoint& f = path.back();
        return std::max({std::abs(q.x[0] - f.x[0]), std::abs(q.x[1] - f.x[1]), std::abs(q.p[0] - f.p[0]),
                         std::abs(q.p[1] - f.p[1])});
    };
    double ms = 0.0;
    const double dev = deviation(rapidity_potential(c.e, c.m), ms);
    out.push_back(check("dirac-flow", "path_agreement", dev, 1e-6));
    out.push_back(check("dirac-flow", "mass_shell", ms, 1e-8));
    double ms_ctrl = 0.0;
    out.push_back(check("dirac-flow", "control_divergence", deviation(unconstrained_potential(c.e, c.m), ms_ctrl), 1e-2,
                        true));
    return out;
}

inline std::vector<CheckLine> verify_majorana() {
    std::vector<CheckLine> out;
    MajoranaSuiteOptions o;
    o.trials = 200;
    o.spot_checks = 20;
    o.probes = 20;
    for (const GammaSet& g : {dirac_gammas(), majorana_gammas()})
        for (const PropertyResult& r : run_majorana_suite(g, 2024, o))
            out.push_back(check("majorana", r.property + "/" + r.representation, r.value, r.threshold, r.at_least));
    return out;
}

}  // namespace detail

inline const std::vector<std::string>& verify_suite_names() {
    static const std::vector<std::string> names{"grid", "kgm", "unitary", "em-only", "bohm", "dirac-flow", "majorana", "all"};
    return names;
}

// Throws InvalidArgument for an unknown suite.
inline std::vector<CheckLine> run_verify(const std::string& suite) {
    using Fn = std::vector<CheckLine> (*)();
    const std::vector<std::pair<std::string, Fn>> suites{
        {"grid", detail::verify_grid},           {"kgm", detail::verify_kgm},
        {"unitary", detail::verify_unitary},     {"em-only", detail::verify_em_only},
        {"bohm", detail::verify_bohm},           {"dirac-flow", detail::verify_dirac_flow},
        {"majorana", detail::verify_majorana}};
    std::vector<CheckLine> out;
    bool found = false;
    for (const auto& [name, fn] : suites) {
        if (suite != "all" && suite != name) continue;
        found = true;
        try {
            for (auto& l : fn()) out.push_back(std::move(l));
        } catch (const Error& e) {
            out.push_back({name, "completed", false, e.what()});
        }
    }
    if (!found) throw InvalidArgument("unknown suite '" + suite + "'");
    return out;
}

}  // namespace nullgauge
