#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "nullgauge/verify.hpp"

namespace fs = std::filesystem;
using namespace nullgauge;

namespace {

std::string brief(double v) {
    std::ostringstream o;
    o << std::setprecision(6) << v;
    return o.str();
}

int config_failure(const std::string& message, const std::string& out_dir, const std::string& started) {
    std::cerr << "nullgauge: " << message << "\n";
    RunOutcome o;
    o.exit_code = exit_config;
    o.failure = Failure{"ConfigError", message, 0.0};
    if (!out_dir.empty()) {
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        if (!ec) {
            write_manifest(fs::path(out_dir) / "manifest.json", nlohmann::ordered_json::object(), o, started,
                           detail::iso_now());
            return exit_config;
        }
    }
    return exit_config;
}

int cmd_run(const std::string& path, std::string out_dir, const std::optional<long long>& seed,
            const std::vector<std::string>& overrides) {
    const std::string started = detail::iso_now();
    std::ifstream f(path);
    if (!f) return config_failure("cannot read config file '" + path + "'", out_dir, started);
    std::stringstream buf;
    buf << f.rdbuf();
    ScenarioConfig cfg;
    try {
        cfg = parse_config(buf.str());
        for (const auto& o : overrides) apply_override(cfg, o);
        if (seed) apply_override(cfg, "run.seed=" + std::to_string(*seed));
        std::vector<std::string> errors;
        validate_config(cfg, errors);
        if (!errors.empty()) {
            std::string all;
            for (const auto& e : errors) all += (all.empty() ? "" : "\n") + e;
            throw ConfigError(all);
        }
    } catch (const ConfigError& e) {
        return config_failure(e.what(), out_dir, started);
    }
    cfg.base_dir = fs::absolute(path).parent_path().string();
    if (out_dir.empty()) out_dir = cfg.text("run.output_dir");
    const RunOutcome r = run_scenario(cfg, out_dir);
    std::cout << cfg.scenario() << ": " << status_name(r.exit_code);
    if (r.failure) std::cout << " (" << r.failure->cause << " at t = " << r.failure->time << ": " << r.failure->message << ")";
    std::cout << "\n";
    for (const auto& c : r.invariants)
        std::cout << (c.pass() ? "PASS " : "FAIL ") << c.name << " " << brief(c.value) << (c.at_least ? " >= " : " <= ")
                  << brief(c.threshold) << "\n";
    return r.exit_code;
}

int cmd_verify(const std::string& suite) {
    std::vector<CheckLine> lines;
    try {
        lines = run_verify(suite);
    } catch (const InvalidArgument& e) {
        std::cerr << "nullgauge: " << e.what() << "\n";
        return exit_config;
    }
    bool ok = true;
    for (const auto& l : lines) {
        std::cout << (l.pass ? "PASS " : "FAIL ") << l.suite << "/" << l.name << " " << l.detail << "\n";
        ok = ok && l.pass;
    }
    return ok ? exit_success : exit_invariant;
}

int cmd_converge(const std::vector<std::string>& files, bool richardson) {
    try {
        const ConvergenceReport rep = convergence_report(read_csv(files[0]), read_csv(files[1]), read_csv(files[2]),
                                                         richardson ? OrderMode::richardson : OrderMode::error);
        std::cout << "quantity,t,order_12,order_23\n";
        for (const auto& o : rep.orders)
            std::cout << o.quantity << "," << format_number(o.t) << "," << format_number(o.order_12) << ","
                      << format_number(o.order_23) << "\n";
    } catch (const InvalidArgument& e) {
        std::cerr << "nullgauge: " << e.what() << "\n";
        return exit_config;
    }
    return exit_success;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lattice gauge-field scenarios and verification suites"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run a scenario from a config file");
    std::string config, out_dir;
    long long seed = 0;
    std::vector<std::string> overrides;
    run->add_option("config", config, "INI config path")->required();
    auto* seed_opt = run->add_option("--seed", seed, "RNG seed");
    run->add_option("--out", out_dir, "Output directory");
    run->add_option("--override", overrides, "key=value override")->take_all()->allow_extra_args(false);

    auto* verify = app.add_subcommand("verify", "Run a built-in verification suite");
    std::string suite;
    verify->add_option("suite", suite, "grid, kgm, unitary, em-only, bohm, dirac-flow, majorana or all")->required();

    auto* converge = app.add_subcommand("converge", "Observed orders from three refinement levels");
    std::vector<std::string> files;
    bool richardson = false;
    converge->add_option("csv", files, "Series at dx, dx/2, dx/4")->required()->expected(3);
    converge->add_flag("--richardson", richardson, "Estimate order from the values themselves");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_success : exit_config;
    }
    try {
        if (*run) {
            std::optional<long long> s;
            if (*seed_opt) s = seed;
            return cmd_run(config, out_dir, s, overrides);
        }
        if (*verify) return cmd_verify(suite);
        return cmd_converge(files, richardson);
    } catch (const std::exception& e) {
        std::cerr << "nullgauge: " << e.what() << "\n";
        return exit_breakdown;
    }
}
