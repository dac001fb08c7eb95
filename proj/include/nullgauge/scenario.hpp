#pragma once

#include <chrono>
#include <ctime>
#include <filesystem>
#include <json.hpp>

#include "nullgauge/bohm.hpp"
#include "nullgauge/config.hpp"
#include "nullgauge/convergence.hpp"
#include "nullgauge/csv.hpp"
#include "nullgauge/dirac_flow.hpp"
#include "nullgauge/em_only.hpp"
#include "nullgauge/initial_data.hpp"
#include "nullgauge/majorana_suite.hpp"

namespace nullgauge {

inline constexpr const char* version_string = "1.0.0";

enum ExitCode : int { exit_success = 0, exit_config = 1, exit_invariant = 2, exit_breakdown = 3 };

struct InvariantCheck {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool at_least = false;
    bool pass() const { return at_least ? value >= threshold : value <= threshold; }
};

struct Failure {
    std::string cause;
    std::string message;
    double time = 0.0;
};

struct RunOutcome {
    int exit_code = exit_success;
    std::optional<Failure> failure;
    std::vector<InvariantCheck> invariants;
    nlohmann::ordered_json diagnostics = nlohmann::ordered_json::object();
    std::vector<std::string> outputs;
};

namespace detail {

inline std::string iso_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline std::size_t steps_for(double t_end, double dt) { return static_cast<std::size_t>(std::llround(t_end / dt)); }

inline std::size_t stride_for(double interval, double dt) {
    if (!(interval > 0.0)) return 1;
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(interval / dt)));
}

inline ComplexKgmState complex_from_csv(const ScenarioConfig& cfg, const GridSpec& g) {
    std::filesystem::path p = cfg.text("initial.file");
    if (p.is_relative() && !cfg.base_dir.empty()) p = std::filesystem::path(cfg.base_dir) / p;
    Table t;
    try {
        t = read_csv(p.string());
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("initial.file: ") + e.what());
    }
    if (t.rows.size() != g.n_x())
        throw ConfigError("initial.file: " + std::to_string(t.rows.size()) + " rows, expected n_x = " +
                          std::to_string(g.n_x()));
    ComplexKgmState s = ComplexKgmState::zeros(g.n_x());
    try {
        const std::size_t pr = t.column("psi_re"), pi = t.column("psi_im"), dr = t.column("psi_dot_re"),
                          di = t.column("psi_dot_im"), a0 = t.column("a0"), a1 = t.column("a1"),
                          a0d = t.column("a0_dot"), a1d = t.column("a1_dot");
        for (std::size_t j = 0; j < g.n_x(); ++j) {
            s.psi[j] = cplx(t.number(j, pr), t.number(j, pi));
            s.psi_dot[j] = cplx(t.number(j, dr), t.number(j, di));
            s.a[0][j] = t.number(j, a0);
            s.a[1][j] = t.number(j, a1);
            s.a_dot[0][j] = t.number(j, a0d);
            s.a_dot[1][j] = t.number(j, a1d);
        }
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("initial.file: ") + e.what());
    }
    if (!state_finite(s)) throw ConfigError("initial.file: non-finite values");
    return s;
}

inline ComplexKgmState complex_initial(const ScenarioConfig& cfg, const GridSpec& g, const PhysicalConstants& c) {
    const std::string r = cfg.text("initial.recipe");
    if (r == "zero") return zero_kgm_state(g);
    if (r == "plane_wave")
        return plane_wave(g, c, cfg.real("initial.amplitude"), static_cast<int>(cfg.integer("initial.mode")));
    if (r == "csv") return complex_from_csv(cfg, g);
    if (r == "neutral_packet") {
        NeutralPacketParams p;
        p.amplitude = cfg.real("initial.amplitude");
        p.bump = cfg.real("initial.bump");
        p.width = cfg.real("initial.width");
        p.frequency = cfg.real("initial.frequency");
        p.profile_eps = cfg.real("initial.profile_eps");
        p.momentum = cfg.real("initial.momentum");
        try {
            return neutral_packet(g, c, p);
        } catch (const InvalidArgument& e) {
            throw ConfigError(std::string("initial: ") + e.what());
        }
    }
    throw ConfigError("recipe '" + r + "' does not define a complex field slice; it is valid for scenario em-only only");
}

inline UnitaryState unitary_initial(const ScenarioConfig& cfg, const GridSpec& g, const PhysicalConstants& c) {
    ToUnitaryOptions opt;
    opt.node_threshold_rel = cfg.real("tolerances.node_threshold_rel");
    return to_unitary(complex_initial(cfg, g, c), g, c, opt).unitary;
}

inline EmOnlyParams em_params(const ScenarioConfig& cfg) {
    EmOnlyParams p;
    p.b0_floor_rel = cfg.real("tolerances.b0_floor_rel");
    p.radicand_tolerance_rel = cfg.real("tolerances.radicand_rel");
    return p;
}

inline double relative_drift(double q, double q0, double scale) {
    return scale > 0.0 ? std::abs(q - q0) / scale : std::abs(q - q0);
}

inline RunOutcome run_kgm(const ScenarioConfig& cfg, const std::filesystem::path& dir) {
    const GridSpec g = cfg.grid();
    const PhysicalConstants c = cfg.constants();
    RunOutcome out;
    ComplexKgmState s = complex_initial(cfg, g, c);
    const std::size_t steps = steps_for(cfg.real("run.t_end"), g.dt());
    const std::size_t stride = stride_for(cfg.real("run.output_interval"), g.dt());
    CsvWriter csv((dir / "kgm.csv").string(), {"t", "charge", "charge_drift", "energy", "lorenz_residual_max",
                                               "current_divergence_max", "psi_abs_max"});
    out.outputs.push_back("kgm.csv");
    const KgmDiagnostics d0 = kgm_diagnostics(s, g, c);
    const double scale = sum(abs_field(kg_current(s, g, c)[0])) * g.dx();
    double drift_max = 0.0;
    KgmDiagnostics d = d0;
    for (std::size_t k = 0; k <= steps; ++k) {
        if (k > 0) s = kgm_step(s, g, c);
        d = kgm_diagnostics(s, g, c);
        const double drift = relative_drift(d.total_charge, d0.total_charge, scale);
        drift_max = std::max(drift_max, drift);
        if (k % stride == 0 || k == steps)
            csv.row({s.t, d.total_charge, drift, d.energy, d.lorenz_residual_max, d.current_divergence_max,
                     max_abs(s.psi)});
    }
    out.invariants.push_back({"charge_drift_max", drift_max, cfg.real("tolerances.charge_drift")});
    out.diagnostics = {{"steps", steps},           {"initial_charge", d0.total_charge}, {"charge_scale", scale},
                       {"final_charge", d.total_charge}, {"initial_energy", d0.energy}, {"final_energy", d.energy},
                       {"charge_drift_max", drift_max}};
    return out;
}

inline RunOutcome run_unitary(const ScenarioConfig& cfg, const std::filesystem::path& dir) {
    const GridSpec g = cfg.grid();
    const PhysicalConstants c = cfg.constants();
    RunOutcome out;
    UnitaryState u = unitary_initial(cfg, g, c);
    const std::size_t steps = steps_for(cfg.real("run.t_end"), g.dt());
    const std::size_t stride = stride_for(cfg.real("run.output_interval"), g.dt());
    CsvWriter csv((dir / "unitary.csv").string(), {"t", "charge", "charge_drift", "energy", "gauss_residual_max",
                                                   "continuity_residual_max", "phi_min", "phi_max"});
    out.outputs.push_back("unitary.csv");
    const UnitaryDiagnostics d0 = unitary_diagnostics(u, g, c);
    double drift_max = 0.0;
    UnitaryDiagnostics d = d0;
    for (std::size_t k = 0; k <= steps; ++k) {
        if (k > 0) u = unitary_step(u, g, c);
        d = unitary_diagnostics(u, g, c);
        const double drift = relative_drift(d.total_charge, d0.total_charge, d0.charge_scale);
        drift_max = std::max(drift_max, drift);
        if (k % stride == 0 || k == steps)
            csv.row({u.t, d.total_charge, drift, d.energy, d.gauss_residual_max, d.continuity_residual_max, d.phi_min,
                     d.phi_max});
    }
    out.invariants.push_back({"charge_drift_max", drift_max, cfg.real("tolerances.charge_drift")});
    out.diagnostics = {{"steps", steps},
                       {"initial_charge", d0.total_charge},
                       {"charge_scale", d0.charge_scale},
                       {"final_charge", d.total_charge},
                       {"initial_energy", d0.energy},
                       {"final_energy", d.energy},
                       {"final_gauss_residual_max", d.gauss_residual_max},
                       {"charge_drift_max", drift_max}};
    return out;
}

inline RunOutcome run_em_only(const ScenarioConfig& cfg, const std::filesystem::path& dir) {
    const GridSpec g = cfg.grid();
    const PhysicalConstants c = cfg.constants();
    RunOutcome out;
    EmOnlyState em = cfg.text("initial.recipe") == "cos_profile"
                         ? cos_profile(g, cfg.real("initial.cos_a"), static_cast<int>(cfg.integer("initial.mode")),
                                       cfg.real("initial.cos_c"))
                         : project_to_em(unitary_initial(cfg, g, c));
    const EmOnlyParams p = params_for_initial(em, em_params(cfg));
    const std::size_t steps = steps_for(cfg.real("run.t_end"), g.dt());
    const std::size_t stride = stride_for(cfg.real("run.output_interval"), g.dt());
    CsvWriter csv((dir / "em-only.csv").string(),
                  {"t", "radicand_min", "b0_min_abs", "phi_rec_min", "phi_rec_max", "energy"});
    out.outputs.push_back("em-only.csv");
    double e0 = 0.0, e1 = 0.0;
    for (std::size_t k = 0; k <= steps; ++k) {
        if (k > 0) em = em_only_step(em, g, c, p);
        if (k % stride == 0 || k == steps) {
            const ReconstructionReport r = reconstruct(em, g, c, p);
            const UnitaryState u{r.phi_rec, r.phi_dot_rec, em.b, em.b_dot, em.t};
            e1 = sum(unitary_energy_density(u, g, c)) * g.dx();
            if (k == 0) e0 = e1;
            csv.row({em.t, r.radicand_min, r.b0_min_abs, *std::min_element(r.phi_rec.begin(), r.phi_rec.end()),
                     max_abs(r.phi_rec), e1});
        }
    }
    out.diagnostics = {{"steps", steps}, {"b0_floor", p.b0_floor}, {"initial_energy", e0}, {"final_energy", e1}};
    return out;
}

inline void write_compare_csv(const CompareResult& r, const std::filesystem::path& path) {
    CsvWriter csv(path.string(), {"t", "l2_B0", "l2_B1", "linf_B0", "linf_B1", "radicand_min", "b0_min_abs"});
    for (const auto& row : r.rows)
        csv.row({row.t, row.l2_b0, row.l2_b1, row.linf_b0, row.linf_b1, row.radicand_min, row.b0_min_abs});
}

inline RunOutcome run_compare(const ScenarioConfig& cfg, const std::filesystem::path& dir) {
    const GridSpec g = cfg.grid();
    const PhysicalConstants c = cfg.constants();
    RunOutcome out;
    const UnitaryState u0 = unitary_initial(cfg, g, c);
    const CompareResult r = compare_evolutions(u0, g, c, cfg.real("run.t_end"),
                                               stride_for(cfg.real("run.output_interval"), g.dt()), em_params(cfg));
    write_compare_csv(r, dir / "compare.csv");
    out.outputs.push_back("compare.csv");
    if (r.failure) {
        out.failure = Failure{r.failure->cause, r.failure->path + ": " + r.failure->message, r.failure->time};
        out.exit_code = exit_breakdown;
        return out;
    }
    const CompareRow& last = r.rows.back();
    const double norm_b = std::hypot(l2_norm(r.final_unitary.b[0], g.dx()), l2_norm(r.final_unitary.b[1], g.dx()));
    const double div = std::hypot(last.l2_b0, last.l2_b1);
    const double rel = norm_b > 0.0 ? div / norm_b : div;
    out.invariants.push_back({"final_relative_divergence", rel, cfg.real("tolerances.compare_divergence")});
    out.diagnostics = {{"rows", r.rows.size()}, {"final_l2_B0", last.l2_b0}, {"final_l2_B1", last.l2_b1},
                       {"final_relative_divergence", rel}};
    return out;
}

inline RunOutcome run_bohm(const ScenarioConfig& cfg, const std::filesystem::path& dir) {
    const GridSpec g = cfg.grid();
    const PhysicalConstants c = cfg.constants();
    RunOutcome out;
    UnitaryState u = unitary_initial(cfg, g, c);
    const std::size_t steps = steps_for(cfg.real("run.t_end"), g.dt());
    const std::size_t stride = stride_for(cfg.real("run.output_interval"), g.dt());
    std::vector<UnitaryState> slices{u};
    for (std::size_t k = 0; k < steps; ++k) {
        u = unitary_step(u, g, c);
        slices.push_back(u);
    }
    CsvWriter csv((dir / "bohm.csv").string(), {"t", "active", "stopped", "max_abs_v", "hist_l1"});
    CsvWriter stops((dir / "bohm_stops.csv").string(), {"particle", "t", "x"});
    out.outputs.push_back("bohm.csv");
    out.outputs.push_back("bohm_stops.csv");
    const RealField w0 = abs_field(charge_density(slices.front(), c));
    const auto count = static_cast<std::size_t>(cfg.integer("run.particles"));
    const auto bins = static_cast<std::size_t>(cfg.integer("run.bins"));
    if (max_abs(w0) == 0.0) {
        for (std::size_t k = 0; k <= steps; k += 1)
            if (k % stride == 0 || k == steps) csv.row({slices[k].t, 0.0, 0.0, 0.0, 0.0});
        out.diagnostics = {{"particles", 0}, {"note", "charge density vanishes; no ensemble"}};
        return out;
    }
    const Ensemble ens = sample_ensemble(w0, g, count, static_cast<std::uint64_t>(cfg.integer("run.seed")));
    const AdvectResult r = advect_ensemble(ens, slices, g, true);
    double l1 = 0.0;
    for (std::size_t k = 0; k <= steps; ++k) {
        if (!(k % stride == 0 || k == steps)) continue;
        Ensemble at = ens;
        std::size_t active = 0;
        for (std::size_t i = 0; i < at.particles.size(); ++i) {
            at.particles[i].x = r.paths[k][i];
            at.particles[i].active = true;
        }
        for (const auto& ev : r.stops)
            if (ev.t < slices[k].t) at.particles[ev.particle].active = false;
        active = at.active_count();
        l1 = active ? histogram_l1(at, abs_field(charge_density(slices[k], c)), g, bins) : 0.0;
        csv.row({slices[k].t, static_cast<double>(active), static_cast<double>(count - active), r.max_abs_v[k], l1});
    }
    for (const auto& ev : r.stops) stops.row({static_cast<double>(ev.particle), ev.t, ev.x});
    out.invariants.push_back({"final_histogram_l1", l1, cfg.real("tolerances.bohm_l1")});
    out.diagnostics = {{"particles", count}, {"stopped", r.stops.size()}, {"final_histogram_l1", l1},
                       {"max_abs_v", *std::max_element(r.max_abs_v.begin(), r.max_abs_v.end())}};
    return out;
}

inline RunOutcome run_dirac_flow(const ScenarioConfig& cfg, const std::filesystem::path& dir) {
    const PhysicalConstants c = cfg.constants();
    RunOutcome out;
    const std::string kind = cfg.text("run.potential");
    const double amp = cfg.real("run.rapidity_amplitude");
    const AnalyticPotential pot = kind == "rapidity"        ? rapidity_potential(c.e, c.m, amp)
                                  : kind == "unconstrained" ? unconstrained_potential(c.e, c.m, amp)
                                                            : uniform_potential(-c.m / (c.require_coupling("dirac-flow"), c.e), 0.0);
    const double dtau = cfg.real("run.dtau");
    const auto n = static_cast<std::size_t>(cfg.integer("run.n_steps"));
    const std::size_t stride = stride_for(cfg.real("run.output_interval"), dtau);
    const Vec2 x0{0.0, cfg.real("run.x0")};
    const std::vector<FlowPoint> path = flow_line(pot, c.e, c.m, x0, dtau, n);
    RelParticle q = particle_on_potential(pot, c.e, x0);
    CsvWriter csv((dir / "dirac-flow.csv").string(),
                  {"tau", "t_push", "x_push", "p0_push", "p1_push", "t_flow", "x_flow", "p0_flow", "p1_flow",
                   "deviation", "mass_shell_residual"});
    out.outputs.push_back("dirac-flow.csv");
    double ms_max = 0.0, dev = 0.0;
    std::vector<Vec2> samples;
    for (std::size_t k = 0; k <= n; ++k) {
        if (k > 0) q = lorentz_push(q, pot, c.e, c.m, dtau);
        const FlowPoint& f = path[k];
        dev = std::max({std::abs(q.x[0] - f.x[0]), std::abs(q.x[1] - f.x[1]), std::abs(q.p[0] - f.p[0]),
                        std::abs(q.p[1] - f.p[1])});
        const double ms = mass_shell_residual(q, c.m);
        ms_max = std::max(ms_max, std::abs(ms));
        if (k % stride == 0 || k == n) {
            csv.row({q.tau, q.x[0], q.x[1], q.p[0], q.p[1], f.x[0], f.x[1], f.p[0], f.p[1], dev, ms});
            samples.push_back(f.x);
        }
    }
    const DiracResiduals res = dirac_residuals(pot, c.e, c.m, samples);
    if (kind == "unconstrained") {
        out.invariants.push_back({"control_divergence", dev, cfg.real("tolerances.control_divergence"), true});
    } else {
        out.invariants.push_back({"path_agreement", dev, cfg.real("tolerances.path_agreement")});
        out.invariants.push_back({"mass_shell_max", ms_max, cfg.real("tolerances.mass_shell")});
    }
    out.diagnostics = {{"potential", kind},
                       {"final_deviation", dev},
                       {"mass_shell_max", ms_max},
                       {"constraint_residual_max", res.constraint_residual_max},
                       {"differentiated_constraint_max", res.differentiated_constraint_max},
                       {"field_equation_residual_max", res.field_equation_residual_max}};
    return out;
}

inline RunOutcome run_majorana(const ScenarioConfig& cfg, const std::filesystem::path& dir) {
    RunOutcome out;
    MajoranaSuiteOptions o;
    o.trials = static_cast<std::size_t>(cfg.integer("run.trials"));
    o.spot_checks = std::min<std::size_t>(100, o.trials);
    o.probes = std::min<std::size_t>(100, o.trials);
    o.null_current = cfg.real("tolerances.null_current");
    o.nullspace = cfg.real("tolerances.nullspace");
    o.identity = cfg.real("tolerances.identity");
    o.mutation = cfg.real("tolerances.mutation");
    o.phase = cfg.real("tolerances.phase");
    const auto seed = static_cast<std::uint64_t>(cfg.integer("run.seed"));
    CsvWriter csv((dir / "majorana-suite.csv").string(),
                  {"property", "representation", "trials", "max_residual", "threshold", "pass"});
    out.outputs.push_back("majorana-suite.csv");
    nlohmann::ordered_json props = nlohmann::ordered_json::array();
    for (const GammaSet& g : {dirac_gammas(), majorana_gammas()}) {
        for (const PropertyResult& r : run_majorana_suite(g, seed, o)) {
            csv.row_text({r.property, r.representation, std::to_string(r.trials), format_number(r.value),
                          format_number(r.threshold), r.pass() ? "true" : "false"});
            out.invariants.push_back({r.property + "/" + r.representation, r.value, r.threshold, r.at_least});
            props.push_back({{"property", r.property},
                             {"representation", r.representation},
                             {"max_residual", r.value},
                             {"threshold", r.threshold},
                             {"pass", r.pass()}});
        }
    }
    out.diagnostics = {{"properties", props}};
    return out;
}

inline RunOutcome run_convergence(const ScenarioConfig& cfg, const std::filesystem::path& dir) {
    const GridSpec g = cfg.grid();
    const PhysicalConstants c = cfg.constants();
    RunOutcome out;
    std::vector<Table> tables;
    for (int level = 0; level < 3; ++level) {
        const double f = std::ldexp(1.0, level);
        const GridSpec gl(g.n_x() * static_cast<std::size_t>(f), g.dx() / f, g.dt() / f);
        ScenarioConfig cl = cfg;
        cl.values()["grid.n_x"].text = std::to_string(gl.n_x());
        const UnitaryState u0 = unitary_initial(cl, gl, c);
        const CompareResult r = compare_evolutions(u0, gl, c, cfg.real("run.t_end"),
                                                   stride_for(cfg.real("run.output_interval"), gl.dt()), em_params(cfg));
        const std::string name = "compare_n" + std::to_string(gl.n_x()) + ".csv";
        write_compare_csv(r, dir / name);
        out.outputs.push_back(name);
        if (r.failure) {
            out.failure = Failure{r.failure->cause, "n_x = " + std::to_string(gl.n_x()) + ", " + r.failure->path + ": " +
                                                        r.failure->message,
                                  r.failure->time};
            out.exit_code = exit_breakdown;
            return out;
        }
        tables.push_back(read_csv((dir / name).string()));
    }
    const ConvergenceReport rep = convergence_report(tables[0], tables[1], tables[2]);
    CsvWriter csv((dir / "convergence.csv").string(), {"quantity", "t", "order_12", "order_23"});
    out.outputs.push_back("convergence.csv");
    nlohmann::ordered_json orders = nlohmann::ordered_json::object();
    for (const auto& o : rep.orders) {
        if (o.quantity.rfind("l2_", 0) == 0 || o.quantity.rfind("linf_", 0) == 0) {
            csv.row_text({o.quantity, format_number(o.t), format_number(o.order_12), format_number(o.order_23)});
            orders[o.quantity] = {o.order_12, o.order_23};
            if (o.quantity.rfind("l2_", 0) == 0)
                out.invariants.push_back({"order_" + o.quantity, o.min_order(), cfg.real("tolerances.order_min"), true});
        }
    }
    out.diagnostics = {{"orders", orders}};
    return out;
}

}  // namespace detail

inline nlohmann::ordered_json config_echo(const ScenarioConfig& cfg) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [k, v] : cfg.values()) j[k] = v.text;
    return j;
}

inline std::string status_name(int code) {
    switch (code) {
        case exit_success: return "success";
        case exit_config: return "config_error";
        case exit_invariant: return "invariant_failure";
        default: return "breakdown";
    }
}

inline void write_manifest(const std::filesystem::path& path, const nlohmann::ordered_json& config,
                           const RunOutcome& out, const std::string& started, const std::string& finished) {
    nlohmann::ordered_json m;
    m["tool"] = "nullgauge";
    m["version"] = version_string;
    m["started_at"] = started;
    m["finished_at"] = finished;
    m["scenario"] = config.contains("scenario") ? config["scenario"] : nlohmann::ordered_json(nullptr);
    if (config.contains("run.seed")) m["seed"] = std::stoll(config["run.seed"].get<std::string>());
    else m["seed"] = nullptr;
    m["config"] = config;
    m["exit_code"] = out.exit_code;
    m["status"] = status_name(out.exit_code);
    if (out.failure)
        m["failure"] = {{"cause", out.failure->cause}, {"message", out.failure->message}, {"time", out.failure->time}};
    else
        m["failure"] = nullptr;
    nlohmann::ordered_json inv = nlohmann::ordered_json::array();
    for (const auto& c : out.invariants)
        inv.push_back({{"name", c.name},
                       {"value", c.value},
                       {"threshold", c.threshold},
                       {"relation", c.at_least ? ">=" : "<="},
                       {"pass", c.pass()}});
    m["invariants"] = inv;
    m["diagnostics"] = out.diagnostics;
    m["outputs"] = out.outputs;
    std::ofstream f(path);
    f << m.dump(2) << "\n";
}

// Runs one scenario into `dir`, always writing manifest.json there. Breakdowns become exit 3 and
// failed invariants exit 2; configuration problems found while building the run become exit 1.
inline RunOutcome run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& dir) {
    const std::string started = detail::iso_now();
    RunOutcome out;
    std::filesystem::create_directories(dir);
    try {
        const std::string s = cfg.scenario();
        if (s == "kgm") out = detail::run_kgm(cfg, dir);
        else if (s == "unitary") out = detail::run_unitary(cfg, dir);
        else if (s == "em-only") out = detail::run_em_only(cfg, dir);
        else if (s == "compare") out = detail::run_compare(cfg, dir);
        else if (s == "bohm") out = detail::run_bohm(cfg, dir);
        else if (s == "dirac-flow") out = detail::run_dirac_flow(cfg, dir);
        else if (s == "majorana-suite") out = detail::run_majorana(cfg, dir);
        else if (s == "convergence") out = detail::run_convergence(cfg, dir);
        else throw ConfigError("unknown scenario '" + s + "'");
        const double t_final = s == "dirac-flow"       ? cfg.real("run.dtau") * static_cast<double>(cfg.integer("run.n_steps"))
                               : s == "majorana-suite" ? 0.0
                                                       : cfg.real("run.t_end");
        if (out.exit_code == exit_success)
            for (const auto& c : out.invariants)
                if (!c.pass()) {
                    out.exit_code = exit_invariant;
                    if (!out.failure)
                        out.failure = Failure{"InvariantViolated",
                                              c.name + " = " + format_number(c.value) + " violates " +
                                                  (c.at_least ? ">= " : "<= ") + format_number(c.threshold),
                                              t_final};
                }
    } catch (const ConfigError& e) {
        out.exit_code = exit_config;
        out.failure = Failure{"ConfigError", e.what(), 0.0};
    } catch (const Breakdown& e) {
        out.exit_code = exit_breakdown;
        out.failure = Failure{breakdown_name(e), e.what(), e.time()};
    } catch (const InvalidArgument& e) {
        out.exit_code = exit_config;
        out.failure = Failure{"InvalidArgument", e.what(), 0.0};
    }
    write_manifest(dir / "manifest.json", config_echo(cfg), out, started, detail::iso_now());
    return out;
}

}  // namespace nullgauge
