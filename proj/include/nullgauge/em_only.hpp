#pragma once

#include <functional>
#include <map>
#include <optional>
#include <thread>
#include <tuple>

#include "nullgauge/parallel.hpp"
#include "nullgauge/unitary.hpp"

namespace nullgauge {

// ---- symbolic expansion of the Gauss numerator -------------------------------------------------

// Minkowski metric diag(+1, -1).
inline constexpr double metric(int mu) { return mu == 0 ? 1.0 : -1.0; }

// Linear combination of partial derivatives of the contravariant potential components:
// sum over terms coeff * d_t^{n_t} d_x^{n_x} B^mu.
class LinearJetForm {
public:
    using Key = std::tuple<int, int, int>;  // (mu, n_t, n_x)

    void add(int mu, int n_t, int n_x, double coeff) { terms_[{mu, n_t, n_x}] += coeff; }

    // d_alpha d_beta applied to the covariant component B_mu = g_{mu mu} B^mu.
    void add_covariant_second(int mu, int alpha, int beta, double coeff) {
        add(mu, (alpha == 0) + (beta == 0), (alpha == 1) + (beta == 1), coeff * metric(mu));
    }

    // Terms whose coefficients cancelled exactly are removed.
    LinearJetForm collected() const {
        LinearJetForm out;
        for (const auto& [k, v] : terms_)
            if (v != 0.0) out.terms_[k] = v;
        return out;
    }

    int max_time_order() const {
        int m = 0;
        for (const auto& [k, v] : terms_) m = std::max(m, std::get<1>(k));
        return m;
    }

    const std::map<Key, double>& terms() const { return terms_; }

    // provider(mu, n_t, n_x) returns the field d_t^{n_t} d_x^{n_x} B^mu.
    template <class Provider>
    RealField evaluate(Provider&& provider, std::size_t n) const {
        RealField out(n, 0.0);
        for (const auto& [k, v] : terms_) {
            const RealField f = provider(std::get<0>(k), std::get<1>(k), std::get<2>(k));
            for (std::size_t i = 0; i < n; ++i) out[i] += v * f[i];
        }
        return out;
    }

private:
    std::map<Key, double> terms_;
};

// box B_0 - d_0 d_nu B^nu, built term by term from the metric and collected.
inline LinearJetForm gauss_numerator_form() {
    LinearJetForm f;
    for (int alpha = 0; alpha < 2; ++alpha) f.add_covariant_second(0, alpha, alpha, metric(alpha));
    for (int nu = 0; nu < 2; ++nu) f.add(nu, 1 + (nu == 0), nu == 1, -1.0);
    return f.collected();
}

// Lattice jet of an EmOnlyState: time order 0 and 1 come from the state, spatial orders from the
// central difference. Higher time orders are only available if supplied (fake_b_ddot) and the
// collected numerator never asks for them.
struct LatticeJet {
    const EmOnlyState& em;
    const GridSpec& g;
    const Potential* fake_b_ddot = nullptr;

    RealField operator()(int mu, int n_t, int n_x) const {
        RealField f;
        if (n_t == 0) f = em.b[mu];
        else if (n_t == 1) f = em.b_dot[mu];
        else if (n_t == 2 && fake_b_ddot) f = (*fake_b_ddot)[mu];
        else throw InvalidArgument("lattice jet: time derivative of order " + std::to_string(n_t) + " not available");
        for (int k = 0; k < n_x; ++k) f = spatial_derivative(f, g);
        return f;
    }
};

// box B_0 - B^nu_{,nu 0}. On the lattice this is D(-D B^0 - B^1_t), the divergence of the electric
// field, and it equals j^0 on solutions.
inline RealField gauss_numerator(const EmOnlyState& em, const GridSpec& g) {
    check_state(em, g, "gauss_numerator");
    static const LinearJetForm form = gauss_numerator_form();
    return form.evaluate(LatticeJet{em, g}, g.n_x());
}

// ---- reconstruction ----------------------------------------------------------------------------

struct EmOnlyParams {
    // Absolute floor for |B^0|; negative means 1e-6 * max|B^0| of the slice it is first used on.
    double b0_floor = -1.0;
    double b0_floor_rel = 1e-6;
    double radicand_tolerance_rel = 1e-10;
    double phi_floor_rel = 1e-8;

    double floor_for(const EmOnlyState& em) const {
        return b0_floor >= 0.0 ? b0_floor : b0_floor_rel * max_abs(em.b[0]);
    }
};

// Fixes the floor from an initial slice so that later slices are judged against it.
inline EmOnlyParams params_for_initial(const EmOnlyState& em, EmOnlyParams p) {
    if (p.b0_floor < 0.0) p.b0_floor = p.b0_floor_rel * max_abs(em.b[0]);
    return p;
}
inline EmOnlyParams params_for_initial(const EmOnlyState& em) { return params_for_initial(em, EmOnlyParams{}); }

struct ReconstructionReport {
    RealField phi_rec;
    RealField phi_dot_rec;
    double radicand_min = 0.0;
    double b0_min_abs = 0.0;
    bool vacuum = false;
};

// Signed radicand phi^2 = N / (-2 e^2 B^0) for a given numerator N.
inline RealField radicand_from_numerator(const RealField& numerator, const RealField& b0, const PhysicalConstants& c) {
    c.require_coupling("radicand");
    RealField r(b0.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = numerator[i] / (-2.0 * c.e * c.e * b0[i]);
    return r;
}

inline void check_b0_floor(const EmOnlyState& em, double floor, const char* what) {
    for (std::size_t i = 0; i < em.b[0].size(); ++i)
        if (!(std::abs(em.b[0][i]) >= floor) || em.b[0][i] == 0.0)
            throw VanishingB0(std::string(what) + ": |B^0| = " + std::to_string(std::abs(em.b[0][i])) +
                                  " below floor " + std::to_string(floor) + " at site " + std::to_string(i) +
                                  ", t = " + std::to_string(em.t),
                              i, em.b[0][i], em.t);
}

struct PhiReconstruction {
    RealField phi;
    double radicand_min = 0.0;
    bool vacuum = false;
};

inline PhiReconstruction reconstruct_phi_full(const EmOnlyState& em, const GridSpec& g, const PhysicalConstants& c,
                                              const EmOnlyParams& p = {}) {
    const RealField num = gauss_numerator(em, g);
    const std::size_t n = g.n_x();
    PhiReconstruction out{RealField(n, 0.0), 0.0, false};
    // A slice without charge anywhere carries no matter field; B^0 is then unconstrained.
    if (max_abs(num) == 0.0) {
        out.vacuum = true;
        return out;
    }
    check_b0_floor(em, p.floor_for(em), "reconstruct_phi");
    const RealField r = radicand_from_numerator(num, em.b[0], c);
    const double tol = p.radicand_tolerance_rel * max_abs(r);
    out.radicand_min = *std::min_element(r.begin(), r.end());
    for (std::size_t i = 0; i < n; ++i) {
        if (r[i] < -tol)
            throw NegativeRadicand("reconstruct_phi: radicand " + std::to_string(r[i]) + " < 0 at site " +
                                       std::to_string(i) + ", t = " + std::to_string(em.t),
                                   i, r[i], em.t);
        out.phi[i] = std::sqrt(std::max(r[i], 0.0));
    }
    return out;
}

inline RealField reconstruct_phi(const EmOnlyState& em, const GridSpec& g, const PhysicalConstants& c,
                                 const EmOnlyParams& p = {}) {
    return reconstruct_phi_full(em, g, c, p).phi;
}

// phi_t from the continuity equation: -[(B^0_t + d_x B^1) phi + 2 B^1 d_x phi] / (2 B^0).
inline RealField reconstruct_phi_dot(const EmOnlyState& em, const RealField& phi, const GridSpec& g,
                                     const PhysicalConstants& c, const EmOnlyParams& p = {}) {
    (void)c;
    check_state(em, g, "reconstruct_phi_dot");
    check_length(phi, g, "reconstruct_phi_dot");
    const std::size_t n = g.n_x();
    if (max_abs(phi) == 0.0) return RealField(n, 0.0);
    check_b0_floor(em, p.floor_for(em), "reconstruct_phi_dot");
    const RealField b1x = spatial_derivative(em.b[1], g);
    const RealField phix = spatial_derivative(phi, g);
    RealField out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = -((em.b_dot[0][i] + b1x[i]) * phi[i] + 2.0 * em.b[1][i] * phix[i]) / (2.0 * em.b[0][i]);
    return out;
}

inline ReconstructionReport reconstruct(const EmOnlyState& em, const GridSpec& g, const PhysicalConstants& c,
                                        const EmOnlyParams& p = {}) {
    PhiReconstruction pr = reconstruct_phi_full(em, g, c, p);
    ReconstructionReport rep;
    rep.phi_dot_rec = reconstruct_phi_dot(em, pr.phi, g, c, p);
    rep.phi_rec = std::move(pr.phi);
    rep.radicand_min = pr.radicand_min;
    rep.b0_min_abs = min_abs(em.b[0]);
    rep.vacuum = pr.vacuum;
    return rep;
}

struct EmAccel {
    Potential b_ddot;
    ReconstructionReport recon;
};

// B^1_tt from the spatial Maxwell equation with the reconstructed current; B^0_tt from the time
// derivative of the continuity equation with phi, phi_t and phi_tt substituted.
inline EmAccel em_second_derivatives_full(const EmOnlyState& em, const GridSpec& g, const PhysicalConstants& c,
                                          const EmOnlyParams& p = {}) {
    const std::size_t n = g.n_x();
    EmAccel out{zero_potential(n), reconstruct(em, g, c, p)};
    const RealField& phi = out.recon.phi_rec;
    const RealField& phi_t = out.recon.phi_dot_rec;
    out.b_ddot[1] = unitary_b1_ddot(phi, em.b, em.b_dot, g, c);
    if (out.recon.vacuum) return out;

    const double floor = p.phi_floor_rel * max_abs(phi);
    for (std::size_t i = 0; i < n; ++i)
        if (!(phi[i] > floor))
            throw VanishingPhi("em_second_derivatives: reconstructed phi vanishes at site " + std::to_string(i) +
                                   ", t = " + std::to_string(em.t),
                               i, em.t);

    const RealField phi_tt = unitary_phi_ddot(phi, em.b, g, c);
    const RealField b1x = spatial_derivative(em.b[1], g);
    const RealField b1tx = spatial_derivative(em.b_dot[1], g);
    const RealField phix = spatial_derivative(phi, g);
    const RealField phitx = spatial_derivative(phi_t, g);
    for (std::size_t i = 0; i < n; ++i) {
        const double div_b = em.b_dot[0][i] + b1x[i];
        const double rest = div_b * phi_t[i] + 2.0 * (em.b_dot[0][i] * phi_t[i] + em.b[0][i] * phi_tt[i] +
                                                      em.b_dot[1][i] * phix[i] + em.b[1][i] * phitx[i]);
        out.b_ddot[0][i] = -b1tx[i] - rest / phi[i];
    }
    return out;
}

inline Potential em_second_derivatives(const EmOnlyState& em, const GridSpec& g, const PhysicalConstants& c,
                                       const EmOnlyParams& p = {}) {
    return em_second_derivatives_full(em, g, c, p).b_ddot;
}

inline EmOnlyState em_rate(const EmOnlyState& em, const GridSpec& g, const PhysicalConstants& c,
                           const EmOnlyParams& p) {
    return {em.b_dot, em_second_derivatives(em, g, c, p), 1.0};
}

inline EmOnlyState em_only_step(const EmOnlyState& em, const GridSpec& g, const PhysicalConstants& c,
                                const EmOnlyParams& p = {}) {
    const EmOnlyParams fixed = params_for_initial(em, p);
    EmOnlyState out = rk4_step(em, g.dt(), [&](const EmOnlyState& y) { return em_rate(y, g, c, fixed); });
    require_finite(out, "em_only_step");
    return out;
}

// Energy of the real-field system evaluated with the reconstructed matter field.
inline double em_only_energy(const EmOnlyState& em, const GridSpec& g, const PhysicalConstants& c,
                             const EmOnlyParams& p = {}) {
    const ReconstructionReport r = reconstruct(em, g, c, p);
    const UnitaryState u{r.phi_rec, r.phi_dot_rec, em.b, em.b_dot, em.t};
    return sum(unitary_energy_density(u, g, c)) * g.dx();
}

// ---- comparison of the two evolution paths -----------------------------------------------------

struct CompareRow {
    double t = 0.0;
    double l2_b0 = 0.0;
    double l2_b1 = 0.0;
    double linf_b0 = 0.0;
    double linf_b1 = 0.0;
    double radicand_min = 0.0;
    double b0_min_abs = 0.0;
};

struct PathFailure {
    std::string path;   // "em-only" or "unitary"
    std::string cause;  // exception class name
    std::string message;
    double time = 0.0;
};

struct CompareResult {
    std::vector<CompareRow> rows;
    std::optional<PathFailure> failure;
    UnitaryState final_unitary;
    EmOnlyState final_em;
};

inline std::string breakdown_name(const Breakdown& b) {
    if (dynamic_cast<const NegativeRadicand*>(&b)) return "NegativeRadicand";
    if (dynamic_cast<const VanishingB0*>(&b)) return "VanishingB0";
    if (dynamic_cast<const VanishingPhi*>(&b)) return "VanishingPhi";
    if (dynamic_cast<const NodeError*>(&b)) return "NodeError";
    if (dynamic_cast<const WindingError*>(&b)) return "WindingError";
    if (dynamic_cast<const VanishingB0AtPoint*>(&b)) return "VanishingB0AtPoint";
    if (dynamic_cast<const NonFinite*>(&b)) return "NonFinite";
    return "Breakdown";
}

// Evolves the direct real-field system and the potential-only system side by side from the same
// slice, recording divergence of B every `stride` steps. The two paths run on separate threads.
inline CompareResult compare_evolutions(const UnitaryState& initial, const GridSpec& g, const PhysicalConstants& c,
                                        double t_end, std::size_t stride = 1, const EmOnlyParams& params = {}) {
    const std::size_t steps = static_cast<std::size_t>(std::llround(t_end / g.dt()));
    stride = std::max<std::size_t>(1, stride);
    const EmOnlyState em0 = project_to_em(initial);
    const EmOnlyParams p = params_for_initial(em0, params);

    struct PathRun {
        std::vector<Potential> snapshots;
        std::vector<double> radicand_min, b0_min_abs;
        std::optional<PathFailure> failure;
    };
    PathRun ru, re;
    UnitaryState u = initial;
    EmOnlyState em = em0;

    auto run_unitary = [&] {
        try {
            for (std::size_t k = 0; k <= steps; ++k) {
                if (k % stride == 0 || k == steps) ru.snapshots.push_back(u.b);
                if (k < steps) u = unitary_step(u, g, c);
            }
        } catch (const Breakdown& b) {
            ru.failure = PathFailure{"unitary", breakdown_name(b), b.what(), b.time()};
        }
    };
    auto run_em = [&] {
        try {
            for (std::size_t k = 0; k <= steps; ++k) {
                if (k % stride == 0 || k == steps) {
                    const ReconstructionReport r = reconstruct(em, g, c, p);
                    re.snapshots.push_back(em.b);
                    re.radicand_min.push_back(r.radicand_min);
                    re.b0_min_abs.push_back(r.b0_min_abs);
                }
                if (k < steps) em = em_only_step(em, g, c, p);
            }
        } catch (const Breakdown& b) {
            re.failure = PathFailure{"em-only", breakdown_name(b), b.what(), b.time()};
        }
    };
    if (worker_count() > 1) {
        std::thread tu(run_unitary);
        run_em();
        tu.join();
    } else {
        run_unitary();
        run_em();
    }

    CompareResult res;
    const std::size_t rows = std::min(ru.snapshots.size(), re.snapshots.size());
    std::vector<double> times;
    for (std::size_t k = 0; k <= steps; ++k)
        if (k % stride == 0 || k == steps) times.push_back(initial.t + static_cast<double>(k) * g.dt());
    for (std::size_t r = 0; r < rows; ++r) {
        CompareRow row;
        row.t = times[r];
        RealField d0(g.n_x()), d1(g.n_x());
        for (std::size_t i = 0; i < g.n_x(); ++i) {
            d0[i] = re.snapshots[r][0][i] - ru.snapshots[r][0][i];
            d1[i] = re.snapshots[r][1][i] - ru.snapshots[r][1][i];
        }
        row.l2_b0 = l2_norm(d0, g.dx());
        row.l2_b1 = l2_norm(d1, g.dx());
        row.linf_b0 = max_abs(d0);
        row.linf_b1 = max_abs(d1);
        row.radicand_min = re.radicand_min[r];
        row.b0_min_abs = re.b0_min_abs[r];
        res.rows.push_back(row);
    }
    // The earlier failure is the one reported.
    if (ru.failure && re.failure) res.failure = ru.failure->time <= re.failure->time ? ru.failure : re.failure;
    else if (ru.failure) res.failure = ru.failure;
    else if (re.failure) res.failure = re.failure;
    res.final_unitary = u;
    res.final_em = em;
    return res;
}

}  // namespace nullgauge
