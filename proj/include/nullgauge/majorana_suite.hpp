#pragma once

#include <limits>
#include "nullgauge/majorana.hpp"

namespace nullgauge {

struct PropertyResult {
    std::string property;
    std::string representation;
    std::size_t trials = 0;
    double value = 0.0;
    double threshold = 0.0;
    bool at_least = false;  // pass when value >= threshold instead of <=
    bool pass() const { return at_least ? value >= threshold : value <= threshold; }
};

struct MajoranaSuiteOptions {
    std::size_t trials = 1000;
    std::size_t spot_checks = 100;
    std::size_t probes = 100;
    double null_current = 1e-12;
    double nullspace = 1e-10;
    double identity = 1e-10;
    double mutation = 1e-2;
    double phase = 1e-10;
};

inline std::string rep_name(Representation r) { return r == Representation::dirac ? "dirac" : "majorana"; }

// Randomized checks of the spinor claims in one gamma representation.
inline std::vector<PropertyResult> run_majorana_suite(const GammaSet& g, std::uint64_t seed,
                                                      const MajoranaSuiteOptions& o = {}) {
    std::mt19937_64 rng(seed);
    const std::string rep = rep_name(g.rep);
    std::vector<PropertyResult> out;
    out.push_back({"clifford_relations", rep, 1, clifford_residual(g), 1e-14});
    if (g.rep == Representation::majorana) {
        double re = 0.0;
        for (const auto& m : g.gamma) re = std::max(re, m.real().cwiseAbs().maxCoeff());
        out.push_back({"gammas_purely_imaginary", rep, 1, re, 1e-15});
    }

    double jj = 0.0, null_res = 0.0, par_res = 0.0, cc_inv = 0.0;
    std::size_t dim_mismatch = 0, scans = 0;
    for (std::size_t i = 0; i < o.trials; ++i) {
        const Spinor psi = random_majorana(rng, g);
        const FourVector j = dirac_current(psi, g);
        jj = std::max(jj, std::abs(minkowski_dot(j, j)) / (j[0] * j[0]));
        const Spinor chi = random_spinor(rng);
        cc_inv = std::max(cc_inv, (charge_conjugate(charge_conjugate(chi, g), g) - chi).norm() / chi.norm());
        const NullspaceResult ns = slash_nullspace(psi, g, 1e-8);
        const double jn = euclid_norm(j);
        for (const FourVector& a : ns.basis) {
            const double an = euclid_norm(a);
            null_res = std::max(null_res, std::abs(minkowski_dot(a, a)) / (an * an));
            par_res = std::max(par_res, proportionality(j, a).second / (an * jn));
        }
        if (ns.basis.size() != 1) ++dim_mismatch;
        if (scans < o.spot_checks) {
            if (null_ray_scan(psi, g) != ns.basis.size()) ++dim_mismatch;
            ++scans;
        }
    }
    out.push_back({"charge_conjugation_involution", rep, o.trials, cc_inv, 1e-14});
    out.push_back({"null_current", rep, o.trials, jj, o.null_current});
    out.push_back({"nullspace_null", rep, o.trials, null_res, o.nullspace});
    out.push_back({"nullspace_parallel_to_current", rep, o.trials, par_res, o.nullspace});
    out.push_back({"nullspace_dimension_mismatches", rep, o.trials, static_cast<double>(dim_mismatch), 0.0});

    double id_res = 0.0, mut_min = std::numeric_limits<double>::infinity();
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (std::size_t i = 0; i < o.probes; ++i) {
        SpinorField psi;
        VectorField a;
        for (int k = 0; k < 4; ++k) {
            psi[k] = random_polynomial(rng, 3, true);
            a[k] = random_polynomial(rng, 3, false);
        }
        const std::array<double, 4> p{unif(rng), unif(rng), unif(rng), unif(rng)};
        id_res = std::max(id_res, slash_anticommutator_identity(psi, a, g, p).scaled());
        mut_min = std::min(mut_min, slash_anticommutator_identity(psi, a, g, p, -1.0).scaled());
    }
    out.push_back({"operator_identity", rep, o.probes, id_res, o.identity});
    out.push_back({"operator_identity_mutation", rep, o.probes, mut_min, o.mutation, true});

    double rt = 0.0;
    std::size_t rejected = 0;
    std::uniform_real_distribution<double> phase(0.0, std::numbers::pi);
    for (std::size_t i = 0; i < o.trials; ++i) {
        const Spinor phi0 = random_majorana(rng, g);
        const Spinor psi = std::polar(1.0, phase(rng)) * phi0;
        const PhaseFactorization f = phase_factorization(psi, g);
        rt = std::max(rt, (psi - std::polar(1.0, f.theta) * f.phi).norm() / psi.norm());
        try {
            phase_factorization(random_spinor(rng), g);
        } catch (const AxialCurrentNonzero&) {
            ++rejected;
        }
    }
    out.push_back({"phase_factorization_roundtrip", rep, o.trials, rt, o.phase});
    out.push_back({"nonzero_axial_rejected_fraction", rep, o.trials,
                   static_cast<double>(rejected) / static_cast<double>(o.trials), 1.0, true});
    return out;
}

}  // namespace nullgauge
