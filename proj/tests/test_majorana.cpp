#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nullgauge/majorana.hpp"
#include "nullgauge/majorana_suite.hpp"

using namespace nullgauge;

namespace {

std::vector<GammaSet> both_reps() { return {dirac_gammas(), majorana_gammas()}; }

// Independent nullspace check: |slash(A) psi| relative to |A||psi|.
double annihilation(const Spinor& psi, const GammaSet& g, const FourVector& a) {
    return (g.slash(a) * psi).norm() / (euclid_norm(a) * psi.norm());
}

SpinorField random_spinor_field(std::mt19937_64& rng, int degree) {
    SpinorField s;
    for (auto& p : s) p = random_polynomial(rng, degree, true);
    return s;
}

VectorField random_vector_field(std::mt19937_64& rng, int degree) {
    VectorField a;
    for (auto& p : a) p = random_polynomial(rng, degree, false);
    return a;
}

std::array<double, 4> random_probe(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return {u(rng), u(rng), u(rng), u(rng)};
}

}  // namespace

TEST(Gammas, CliffordRelationsInBothRepresentations) {
    for (const auto& g : both_reps()) EXPECT_LE(clifford_residual(g), 1e-14);
}

TEST(Gammas, MajoranaRepresentationIsPurelyImaginary) {
    const GammaSet g = majorana_gammas();
    for (const auto& m : g.gamma) EXPECT_LE(m.real().cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LE((g.conjugation - Matrix4c::Identity()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Gammas, BasisChangeIsUnitary) {
    const Matrix4c u = dirac_to_majorana();
    EXPECT_LE((u * u.adjoint() - Matrix4c::Identity()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Gammas, Gamma5SquaresToOneAndAnticommutes) {
    for (const auto& g : both_reps()) {
        const Matrix4c g5 = g.gamma5();
        EXPECT_LE((g5 * g5 - Matrix4c::Identity()).cwiseAbs().maxCoeff(), 1e-14);
        for (const auto& m : g.gamma) EXPECT_LE((g5 * m + m * g5).cwiseAbs().maxCoeff(), 1e-14);
    }
}

TEST(ChargeConjugate, RealSpinorIsSelfConjugateInMajoranaRep) {
    const GammaSet g = majorana_gammas();
    std::mt19937_64 rng(3);
    const Spinor s = random_spinor(rng).real().cast<std::complex<double>>();
    EXPECT_LE((charge_conjugate(s, g) - s).norm(), 1e-15);
    EXPECT_TRUE(is_majorana(s, g));
}

TEST(ChargeConjugate, InvolutionOnRandomSpinors) {
    std::mt19937_64 rng(5);
    for (const auto& g : both_reps())
        for (int i = 0; i < 100; ++i) {
            const Spinor s = random_spinor(rng);
            EXPECT_LE((charge_conjugate(charge_conjugate(s, g), g) - s).norm(), 1e-14 * s.norm());
        }
}

TEST(ChargeConjugate, BasisChangeRoundTrip) {
    const GammaSet d = dirac_gammas();
    const GammaSet m = majorana_gammas();
    const Matrix4c u = dirac_to_majorana();
    std::mt19937_64 rng(7);
    for (int i = 0; i < 20; ++i) {
        const Spinor psi = random_majorana(rng, d);
        ASSERT_TRUE(is_majorana(psi, d));
        const Spinor chi = u * psi;
        // A Majorana spinor in the Majorana representation has real components.
        EXPECT_LE(chi.imag().norm(), 1e-14 * chi.norm());
        EXPECT_LE((charge_conjugate(chi, m) - chi).norm(), 1e-14 * chi.norm());
        const Spinor back = u.adjoint() * charge_conjugate(chi, m);
        EXPECT_LE((back - psi).norm(), 1e-14 * psi.norm());
    }
}

TEST(ChargeConjugate, GenericSpinorIsNotMajorana) {
    std::mt19937_64 rng(9);
    for (const auto& g : both_reps()) EXPECT_FALSE(is_majorana(random_spinor(rng), g));
}

TEST(Currents, ZeroSpinorGivesZeroCurrents) {
    for (const auto& g : both_reps()) {
        for (double v : dirac_current(Spinor::Zero(), g)) EXPECT_EQ(v, 0.0);
        for (double v : axial_current(Spinor::Zero(), g)) EXPECT_EQ(v, 0.0);
    }
}

TEST(Currents, MajoranaCurrentIsNull) {
    std::mt19937_64 rng(11);
    for (const auto& g : both_reps())
        for (int i = 0; i < 1000; ++i) {
            const Spinor psi = random_majorana(rng, g);
            const FourVector j = dirac_current(psi, g);
            EXPECT_GT(j[0], 0.0);
            EXPECT_NEAR(j[0], psi.squaredNorm(), 1e-12 * psi.squaredNorm());
            EXPECT_LE(std::abs(minkowski_dot(j, j)), 1e-12 * j[0] * j[0]);
        }
}

TEST(Currents, GenericCurrentIsTimelike) {
    std::mt19937_64 rng(13);
    for (const auto& g : both_reps())
        for (int i = 0; i < 100; ++i) {
            const FourVector j = dirac_current(random_spinor(rng), g);
            EXPECT_GT(minkowski_dot(j, j), 1e-6 * j[0] * j[0]);
        }
}

// For c-number spinors the Majorana condition forces the axial bilinear to vanish; a generic
// spinor carries a nonzero axial current, and a phase-rotated Majorana spinor keeps zero.
TEST(Currents, AxialCurrentVanishesOnMajoranaAndNotGenerically) {
    std::mt19937_64 rng(17);
    for (const auto& g : both_reps()) {
        double maj = 0.0, gen = 1e300;
        for (int i = 0; i < 200; ++i) {
            const Spinor psi = random_majorana(rng, g);
            maj = std::max(maj, euclid_norm(axial_current(psi, g)) / psi.squaredNorm());
            const Spinor chi = random_spinor(rng);
            gen = std::min(gen, euclid_norm(axial_current(chi, g)) / chi.squaredNorm());
        }
        EXPECT_LE(maj, 1e-14);
        EXPECT_GT(gen, 1e-4);
    }
}

TEST(Nullspace, ZeroSpinorRejected) {
    for (const auto& g : both_reps()) EXPECT_THROW(slash_nullspace(Spinor::Zero(), g), InvalidArgument);
}

TEST(Nullspace, MajoranaBasisIsNullAndParallelToCurrent) {
    std::mt19937_64 rng(19);
    std::normal_distribution<double> n(0.0, 1.0);
    for (const auto& g : both_reps())
        for (int i = 0; i < 200; ++i) {
            const Spinor psi = random_majorana(rng, g);
            const FourVector j = dirac_current(psi, g);
            const NullspaceResult ns = slash_nullspace(psi, g);
            ASSERT_EQ(ns.basis.size(), 1u);
            FourVector combo{};
            for (const auto& a : ns.basis) {
                EXPECT_LE(annihilation(psi, g, a), 1e-12);
                const double c = n(rng);
                for (int mu = 0; mu < 4; ++mu) combo[mu] += c * a[mu];
            }
            for (const FourVector& a : {ns.basis[0], combo}) {
                const double an = euclid_norm(a);
                EXPECT_LE(std::abs(minkowski_dot(a, a)), 1e-10 * an * an);
                const auto [lam, res] = proportionality(j, a);
                EXPECT_LE(res, 1e-10 * an * euclid_norm(j));
                EXPECT_NE(lam, 0.0);
            }
        }
}

TEST(Nullspace, CurrentItselfAnnihilatesMajoranaSpinor) {
    std::mt19937_64 rng(23);
    for (const auto& g : both_reps())
        for (int i = 0; i < 50; ++i) {
            const Spinor psi = random_majorana(rng, g);
            EXPECT_LE(annihilation(psi, g, dirac_current(psi, g)), 1e-14);
        }
}

TEST(Nullspace, DimensionMatchesBruteForceScan) {
    std::mt19937_64 rng(29);
    for (const auto& g : both_reps())
        for (int i = 0; i < 5; ++i) {
            const Spinor psi = random_majorana(rng, g);
            EXPECT_EQ(null_ray_scan(psi, g), slash_nullspace(psi, g).basis.size());
            const Spinor chi = random_spinor(rng);
            EXPECT_EQ(null_ray_scan(chi, g), 0u);
            EXPECT_TRUE(slash_nullspace(chi, g).basis.empty());
        }
}

TEST(Nullspace, CurrentVanishesOnlyAtZero) {
    std::mt19937_64 rng(31);
    for (const auto& g : both_reps())
        for (int i = 0; i < 1000; ++i) {
            const Spinor psi = random_majorana(rng, g);
            // j^0 = |psi|^2 for every spinor, so j = 0 forces psi = 0.
            EXPECT_GT(euclid_norm(dirac_current(psi, g)), 0.5 * psi.squaredNorm());
        }
}

TEST(Identity, ConstantFieldsGiveZero) {
    for (const auto& g : both_reps()) {
        SpinorField psi;
        VectorField a;
        for (int k = 0; k < 4; ++k) {
            psi[k] = Polynomial(std::complex<double>(k + 1.0, 0.5 * k));
            a[k] = Polynomial(std::complex<double>(0.3 * (k + 1), 0.0));
        }
        const IdentityResidual r = slash_anticommutator_identity(psi, a, g, {0.2, -0.1, 0.4, 0.7});
        EXPECT_EQ(r.residual, 0.0);
    }
}

TEST(Identity, CubicFieldsAtRandomProbes) {
    std::mt19937_64 rng(37);
    for (const auto& g : both_reps()) {
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const SpinorField psi = random_spinor_field(rng, 3);
            const VectorField a = random_vector_field(rng, 3);
            worst = std::max(worst, slash_anticommutator_identity(psi, a, g, random_probe(rng)).scaled());
        }
        EXPECT_LE(worst, 1e-10);
    }
}

TEST(Identity, LinearPotentialByHand) {
    // A = (0, x^0, 0, 0) with constant psi: the left side is gamma^mu gamma^1 (d_mu A_1) psi = -gamma^0 gamma^1 psi.
    for (const auto& g : both_reps()) {
        SpinorField psi;
        for (int k = 0; k < 4; ++k) psi[k] = Polynomial(std::complex<double>(1.0 + k, -0.5));
        VectorField a;
        a[1] = Polynomial::monomial({1, 0, 0, 0}, 1.0);
        const Spinor p = detail::eval(psi, {0, 0, 0, 0});
        const Spinor expect = -(g.gamma[0] * g.gamma[1] * p);
        const SpinorField lhs =
            detail::add(detail::dslash(detail::aslash(a, psi, g), g), detail::aslash(a, detail::dslash(psi, g), g));
        EXPECT_LE((detail::eval(lhs, {0.3, 0.1, 0.2, 0.5}) - expect).norm(), 1e-14);
        EXPECT_LE(slash_anticommutator_identity(psi, a, g, {0.3, 0.1, 0.2, 0.5}).residual, 1e-14);
    }
}

TEST(Identity, WrongSignIsDetected) {
    std::mt19937_64 rng(41);
    for (const auto& g : both_reps()) {
        double best = 1e300;
        for (int i = 0; i < 100; ++i) {
            const SpinorField psi = random_spinor_field(rng, 3);
            const VectorField a = random_vector_field(rng, 3);
            best = std::min(best, slash_anticommutator_identity(psi, a, g, random_probe(rng), -1.0).scaled());
        }
        EXPECT_GT(best, 1e-3);
    }
}

TEST(Phase, MajoranaSpinorHasZeroPhase) {
    std::mt19937_64 rng(43);
    for (const auto& g : both_reps())
        for (int i = 0; i < 50; ++i) {
            const Spinor psi = random_majorana(rng, g);
            const PhaseFactorization f = phase_factorization(psi, g);
            EXPECT_TRUE(f.theta <= 1e-12 || f.theta >= std::numbers::pi - 1e-12);
            EXPECT_LE(std::min((f.phi - psi).norm(), (f.phi + psi).norm()), 1e-12 * psi.norm());
        }
}

TEST(Phase, RecoversConstructedPhase) {
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> u(0.05, std::numbers::pi - 0.05);
    for (const auto& g : both_reps())
        for (int i = 0; i < 100; ++i) {
            const Spinor phi0 = random_majorana(rng, g);
            const double alpha = u(rng);
            const Spinor psi = std::polar(1.0, alpha) * phi0;
            const PhaseFactorization f = phase_factorization(psi, g);
            EXPECT_NEAR(f.theta, alpha, 1e-10);
            EXPECT_LE((f.phi - phi0).norm(), 1e-10 * phi0.norm());
            EXPECT_TRUE(is_majorana(f.phi, g, 1e-10));
            EXPECT_LE((std::polar(1.0, f.theta) * f.phi - psi).norm(), 1e-10 * psi.norm());
        }
}

TEST(Phase, MultiplyingShiftsThetaModPi) {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (const auto& g : both_reps())
        for (int i = 0; i < 100; ++i) {
            const Spinor psi = std::polar(1.0, u(rng)) * random_majorana(rng, g);
            const double alpha = u(rng);
            const PhaseFactorization a = phase_factorization(psi, g);
            const PhaseFactorization b = phase_factorization(std::polar(1.0, alpha) * psi, g);
            double shift = std::remainder(b.theta - a.theta - alpha, std::numbers::pi);
            EXPECT_NEAR(shift, 0.0, 1e-10);
            EXPECT_GE(b.theta, 0.0);
            EXPECT_LT(b.theta, std::numbers::pi);
            EXPECT_LE(std::min((a.phi - b.phi).norm(), (a.phi + b.phi).norm()), 1e-10 * psi.norm());
        }
}

TEST(Phase, GenericSpinorRejected) {
    std::mt19937_64 rng(59);
    for (const auto& g : both_reps())
        for (int i = 0; i < 20; ++i) EXPECT_THROW(phase_factorization(random_spinor(rng), g), AxialCurrentNonzero);
}

TEST(Phase, ZeroSpinorRejected) {
    EXPECT_THROW(phase_factorization(Spinor::Zero(), dirac_gammas()), InvalidArgument);
}

TEST(Suite, AllPropertiesPassInBothRepresentations) {
    MajoranaSuiteOptions o;
    o.trials = 200;
    o.spot_checks = 10;
    o.probes = 20;
    for (const auto& g : both_reps())
        for (const auto& r : run_majorana_suite(g, 2024, o)) EXPECT_TRUE(r.pass()) << r.property << " " << r.value;
}
