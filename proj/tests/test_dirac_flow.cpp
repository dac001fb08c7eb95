#include <gtest/gtest.h>

#include "nullgauge/dirac_flow.hpp"

using namespace nullgauge;

namespace {

double path_gap(const RelParticle& q, const FlowPoint& f) {
    return std::max({std::abs(q.x[0] - f.x[0]), std::abs(q.x[1] - f.x[1]), std::abs(q.p[0] - f.p[0]),
                     std::abs(q.p[1] - f.p[1])});
}

struct PushRun {
    double deviation = 0.0;
    double mass_shell_max = 0.0;
    double codirection_max = 0.0;
};

PushRun run(const AnalyticPotential& pot, double e, double m, double dtau, std::size_t steps) {
    const Vec2 x0{0.0, 0.7};
    const auto path = flow_line(pot, e, m, x0, dtau, steps);
    RelParticle q = particle_on_potential(pot, e, x0);
    PushRun r;
    for (std::size_t k = 1; k <= steps; ++k) {
        q = lorentz_push(q, pot, e, m, dtau);
        const Vec2 a = pot(q.x[0], q.x[1]);
        r.mass_shell_max = std::max(r.mass_shell_max, std::abs(mass_shell_residual(q, m)));
        r.codirection_max = std::max({r.codirection_max, std::abs(q.p[0] + e * a[0]), std::abs(q.p[1] + e * a[1])});
    }
    r.deviation = path_gap(q, path.back());
    return r;
}

AnalyticPotential without_closed_form(AnalyticPotential p) {
    p.grad = nullptr;
    return p;
}

}  // namespace

TEST(LorentzPush, FreeMotionInUniformPotential) {
    const AnalyticPotential pot = uniform_potential(-1.0, 0.3);
    RelParticle q{{0.0, 1.0}, {1.25, 0.75}, 0.0};
    const double m = 1.0;
    for (int k = 0; k < 100; ++k) q = lorentz_push(q, pot, 1.0, m, 0.01);
    EXPECT_DOUBLE_EQ(q.p[0], 1.25);
    EXPECT_DOUBLE_EQ(q.p[1], 0.75);
    EXPECT_NEAR(q.x[0], 1.25, 1e-13);
    EXPECT_NEAR(q.x[1], 1.75, 1e-13);
    EXPECT_NEAR(q.tau, 1.0, 1e-13);
}

// A = (0, E t) is a uniform electric field: hyperbolic motion p = m (cosh, -sinh)(e E tau / m) from rest.
TEST(LorentzPush, HyperbolicMotion) {
    const double e = 0.5, m = 2.0, field = 1.2;
    AnalyticPotential pot{[=](double t, double) { return Vec2{0.0, field * t}; },
                          [=](double, double) { return Grad2{Vec2{0.0, field}, Vec2{0.0, 0.0}}; }};
    RelParticle q{{0.0, 0.0}, {m, 0.0}, 0.0};
    const double dtau = 1e-3;
    for (int k = 0; k < 2000; ++k) q = lorentz_push(q, pot, e, m, dtau);
    const double w = e * field / m, tau = 2.0;
    EXPECT_NEAR(q.p[0], m * std::cosh(w * tau), 1e-11);
    EXPECT_NEAR(q.p[1], -m * std::sinh(w * tau), 1e-11);
    EXPECT_NEAR(q.x[0], std::sinh(w * tau) / w, 1e-11);
    EXPECT_NEAR(q.x[1], -(std::cosh(w * tau) - 1.0) / w, 1e-11);
}

TEST(LorentzPush, RejectsBadStep) {
    EXPECT_THROW(lorentz_push(RelParticle{}, uniform_potential(-1.0, 0.0), 1.0, 1.0, 0.0), InvalidArgument);
}

TEST(FlowLine, RestFrameOfUniformPotential) {
    const double e = 2.0, m = 3.0;
    const auto path = flow_line(uniform_potential(-m / e, 0.0), e, m, {0.0, 1.5}, 0.1, 20);
    ASSERT_EQ(path.size(), 21u);
    for (const auto& f : path) {
        EXPECT_NEAR(f.x[0], f.tau, 1e-13);
        EXPECT_EQ(f.x[1], 1.5);
        EXPECT_DOUBLE_EQ(f.p[0], m);
    }
}

TEST(RapidityPotential, SatisfiesConstraintWithDerivedConstant) {
    for (auto [e, m] : {std::pair{1.0, 1.0}, std::pair{2.0, 3.0}, std::pair{-0.5, 1.5}}) {
        const AnalyticPotential pot = rapidity_potential(e, m);
        for (double x : {-2.0, 0.1, 0.7, 3.3}) {
            const Vec2 a = pot(0.0, x);
            EXPECT_NEAR(a[0] * a[0] - a[1] * a[1], (m * m) / (e * e), 1e-14 * (m * m) / (e * e));
            EXPECT_GT(-e * a[0], 0.0);
        }
    }
}

TEST(RapidityPotential, FiniteDifferencesMatchClosedForm) {
    const AnalyticPotential pot = rapidity_potential(1.0, 1.0, 0.3, 1.0, 0.4);
    for (double x : {0.0, 0.9, 2.5}) {
        const Grad2 exact = pot.derivatives(0.3, x), fd = pot.fd_derivatives(0.3, x);
        for (int nu = 0; nu < 2; ++nu)
            for (int mu = 0; mu < 2; ++mu) EXPECT_NEAR(fd[nu][mu], exact[nu][mu], 1e-9);
        EXPECT_LT(pot.richardson_gap(0.3, x), 1e-8);
    }
}

TEST(Consistency, PushFollowsPotential) {
    const PushRun r = run(rapidity_potential(1.0, 1.0), 1.0, 1.0, 1e-3, 10000);
    EXPECT_LE(r.deviation, 1e-6);
    EXPECT_LE(r.mass_shell_max, 1e-8);
    EXPECT_LE(r.codirection_max, 1e-6);
}

TEST(Consistency, HoldsWithFiniteDifferenceField) {
    const PushRun r = run(without_closed_form(rapidity_potential(1.0, 1.0)), 1.0, 1.0, 1e-3, 10000);
    EXPECT_LE(r.deviation, 1e-6);
    EXPECT_LE(r.mass_shell_max, 1e-8);
}

TEST(Consistency, TimeDependentConstrainedPotential) {
    const PushRun r = run(rapidity_potential(1.0, 2.0, 0.4, 1.3, 0.6), 1.0, 2.0, 1e-3, 5000);
    EXPECT_LE(r.deviation, 1e-6);
    EXPECT_LE(r.mass_shell_max, 1e-8);
}

// Local agreement of one step is O(dtau^5), so halving dtau shrinks it by about 32.
TEST(Consistency, SingleStepAgreementIsHighOrder) {
    const AnalyticPotential pot = rapidity_potential(1.0, 1.0, 0.3, 2.0, 0.0);
    double gap[2];
    for (int level = 0; level < 2; ++level) {
        const double dtau = 0.1 / (1 << level);
        const auto path = flow_line(pot, 1.0, 1.0, {0.0, 0.4}, dtau, 1);
        gap[level] = path_gap(lorentz_push(particle_on_potential(pot, 1.0, {0.0, 0.4}), pot, 1.0, 1.0, dtau), path.back());
    }
    EXPECT_GE(std::log2(gap[0] / gap[1]), 4.0);
}

TEST(Consistency, UnconstrainedControlDiverges) {
    const PushRun r = run(unconstrained_potential(1.0, 1.0), 1.0, 1.0, 1e-3, 10000);
    EXPECT_GE(r.deviation, 1e-2);
}

TEST(DiracResiduals, UniformPotential) {
    const std::vector<Vec2> samples{{0.0, 0.0}, {1.0, 2.0}, {-0.5, 4.0}};
    const DiracResiduals r = dirac_residuals(uniform_potential(-1.0, 0.0), 1.0, 1.0, samples);
    EXPECT_EQ(r.constraint_residual_max, 0.0);
    EXPECT_EQ(r.field_equation_residual_max, 0.0);
    EXPECT_EQ(r.differentiated_constraint_max, 0.0);
    for (double l : r.lambda) EXPECT_EQ(l, 0.0);
}

TEST(DiracResiduals, RapidityPotential) {
    std::vector<Vec2> samples;
    for (int i = 0; i < 20; ++i) samples.push_back({0.1 * i, 0.37 * i});
    const DiracResiduals r = dirac_residuals(rapidity_potential(1.0, 1.0, 0.3, 1.0, 0.5), 1.0, 1.0, samples);
    EXPECT_LT(r.constraint_residual_max, 1e-14);
    EXPECT_LT(r.differentiated_constraint_max, 1e-14);
    EXPECT_GT(r.field_equation_residual_max, 1e-4);
    const DiracResiduals fd =
        dirac_residuals(without_closed_form(rapidity_potential(1.0, 1.0, 0.3, 1.0, 0.5)), 1.0, 1.0, samples);
    EXPECT_LT(fd.differentiated_constraint_max, 1e-9);
    ASSERT_EQ(fd.lambda.size(), samples.size());
}

TEST(DiracResiduals, UnconstrainedPotentialViolatesConstraint) {
    const std::vector<Vec2> samples{{0.0, 0.5}, {0.0, 1.5}, {0.0, 2.5}};
    const DiracResiduals r = dirac_residuals(unconstrained_potential(1.0, 1.0), 1.0, 1.0, samples);
    EXPECT_GT(r.constraint_residual_max, 1e-2);
    EXPECT_GT(r.differentiated_constraint_max, 1e-2);
}
