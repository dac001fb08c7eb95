#include <gtest/gtest.h>

#include <numbers>

#include "nullgauge/bohm.hpp"
#include "nullgauge/initial_data.hpp"

using namespace nullgauge;

namespace {

const PhysicalConstants unit(1.0, 1.0);

GridSpec packet_grid(std::size_t n) {
    const double dx = 25.6 / static_cast<double>(n);
    return GridSpec(n, dx, 0.2 * dx);
}

UnitaryState uniform_slice(std::size_t n, double phi, double b0, double b1, double t = 0.0) {
    UnitaryState u = UnitaryState::zeros(n);
    std::fill(u.phi.begin(), u.phi.end(), phi);
    std::fill(u.b[0].begin(), u.b[0].end(), b0);
    std::fill(u.b[1].begin(), u.b[1].end(), b1);
    u.t = t;
    return u;
}

std::vector<UnitaryState> constant_slices(std::size_t n, double b0, double b1, double dt, int count) {
    std::vector<UnitaryState> s;
    for (int k = 0; k <= count; ++k) s.push_back(uniform_slice(n, 1.0, b0, b1, k * dt));
    return s;
}

Ensemble grid_ensemble(const GridSpec& g, std::size_t count) {
    Ensemble e;
    for (std::size_t i = 0; i < count; ++i) e.particles.push_back({g.length() * (i + 0.25) / count, 0.0, true});
    return e;
}

// L1 at the end of a packet run with the given grid and ensemble size.
double packet_l1(std::size_t n, std::size_t particles, std::size_t* stopped = nullptr) {
    const GridSpec g = packet_grid(n);
    UnitaryState u = to_unitary(neutral_packet(g, unit), g, unit).unitary;
    std::vector<UnitaryState> slices{u};
    const auto steps = static_cast<int>(std::llround(1.0 / g.dt()));
    for (int k = 0; k < steps; ++k) slices.push_back(u = unitary_step(u, g, unit));
    const Ensemble ens = sample_ensemble(abs_field(charge_density(slices.front(), unit)), g, particles, 12345);
    const AdvectResult r = advect_ensemble(ens, slices, g);
    if (stopped) *stopped = r.stops.size();
    return histogram_l1(r.final, abs_field(charge_density(slices.back(), unit)), g, 64);
}

}  // namespace

TEST(GuidanceVelocity, NoSpatialPotentialNoMotion) {
    const GridSpec g(16, 0.5, 0.1);
    const UnitaryState u = uniform_slice(g.n_x(), 1.0, 0.7, 0.0);
    for (double x : {0.0, 1.3, 7.9}) EXPECT_EQ(guidance_velocity(u, x, g), 0.0);
}

TEST(GuidanceVelocity, RatioOfConstants) {
    const GridSpec g(16, 0.5, 0.1);
    const UnitaryState u = uniform_slice(g.n_x(), 1.0, 2.0, 1.0);
    for (double x : {0.0, 1.3, 7.9, -3.0, 100.0}) EXPECT_DOUBLE_EQ(guidance_velocity(u, x, g), 0.5);
}

TEST(GuidanceVelocity, IndependentOfMatterAmplitude) {
    const GridSpec g = packet_grid(128);
    const UnitaryState u = to_unitary(neutral_packet(g, unit), g, unit).unitary;
    UnitaryState scaled = u;
    for (auto& p : scaled.phi) p *= 3.7;
    for (double x : {1.0, 5.5, 20.2}) EXPECT_EQ(guidance_velocity(u, x, g), guidance_velocity(scaled, x, g));
}

// Plane wave: v = k/E up to the lattice replacement k -> sin(k dx)/dx.
TEST(GuidanceVelocity, PlaneWaveGroupVelocity) {
    const double dx = 2.0 * std::numbers::pi / 64.0;
    const GridSpec g(64, dx, 0.2 * dx);
    const double k = 3.0, energy = std::sqrt(k * k + 1.0);
    ComplexKgmState s = ComplexKgmState::zeros(g.n_x());
    for (std::size_t j = 0; j < g.n_x(); ++j) {
        s.psi[j] = std::polar(1.0, k * g.x(j));
        s.psi_dot[j] = cplx(0.0, -energy) * s.psi[j];
    }
    ToUnitaryOptions open;
    open.require_periodic = false;
    const UnitaryState u = to_unitary(s, g, unit, open).unitary;
    for (double x : {0.3, 2.0, 4.4}) {
        EXPECT_NEAR(guidance_velocity(u, x, g), std::sin(k * dx) / dx / energy, 1e-13);
        EXPECT_NEAR(guidance_velocity(u, x, g), k / energy, k * k * k * dx * dx / 6.0 / energy + 1e-12);
    }
}

TEST(GuidanceVelocity, VanishingScalarPotential) {
    const GridSpec g(16, 0.5, 0.1);
    UnitaryState u = uniform_slice(g.n_x(), 1.0, 1.0, 1.0);
    u.b[0][3] = 0.0;
    EXPECT_THROW(guidance_velocity(u, g.x(3), g), VanishingB0AtPoint);
}

TEST(Interpolate, LinearBetweenSitesAndPeriodic) {
    const GridSpec g(8, 1.0, 0.1);
    const RealField f{0, 1, 2, 3, 4, 5, 6, 7};
    EXPECT_DOUBLE_EQ(interpolate(f, 0.5, g), 0.0);
    EXPECT_DOUBLE_EQ(interpolate(f, 2.75, g), 2.25);
    EXPECT_DOUBLE_EQ(interpolate(f, 7.5, g), 7.0);
    EXPECT_DOUBLE_EQ(interpolate(f, 8.0, g), 3.5);
    EXPECT_DOUBLE_EQ(interpolate(f, 0.0, g), 3.5);
    EXPECT_DOUBLE_EQ(interpolate(f, -0.5, g), 7.0);
}

TEST(ChargeDensity, Values) {
    const GridSpec g(16, 0.5, 0.1);
    EXPECT_EQ(max_abs(charge_density(uniform_slice(g.n_x(), 0.0, 1.0, 0.3), unit)), 0.0);
    const double e = 0.6, b0 = 1.4, phi0 = 0.8;
    for (double r : charge_density(uniform_slice(g.n_x(), phi0, b0, 0.2), PhysicalConstants(e, 1.0)))
        EXPECT_NEAR(r, -2.0 * e * e * b0 * phi0 * phi0, 1e-15);
}

TEST(ChargeDensity, TotalConservedAlongRun) {
    const GridSpec g = packet_grid(256);
    UnitaryState u = to_unitary(neutral_packet(g, unit), g, unit).unitary;
    const double q0 = sum(charge_density(u, unit)) * g.dx();
    const double scale = sum(abs_field(charge_density(u, unit))) * g.dx();
    for (int k = 0; k < 50; ++k) {
        u = unitary_step(u, g, unit);
        EXPECT_LE(std::abs(sum(charge_density(u, unit)) * g.dx() - q0), 1e-6 * scale);
    }
}

TEST(SampleEnsemble, DeterministicAndFaithful) {
    const GridSpec g(128, 0.1, 0.02);
    RealField w(g.n_x());
    for (std::size_t j = 0; j < g.n_x(); ++j) w[j] = 1.0 + std::sin(2.0 * std::numbers::pi * g.x(j) / g.length());
    const Ensemble a = sample_ensemble(w, g, 4000, 7), b = sample_ensemble(w, g, 4000, 7), c = sample_ensemble(w, g, 4000, 8);
    EXPECT_EQ(a.seed, 7u);
    bool same = true, differ = false;
    for (std::size_t i = 0; i < a.particles.size(); ++i) {
        same = same && a.particles[i].x == b.particles[i].x;
        differ = differ || a.particles[i].x != c.particles[i].x;
        EXPECT_GE(a.particles[i].x, 0.0);
        EXPECT_LT(a.particles[i].x, g.length());
    }
    EXPECT_TRUE(same);
    EXPECT_TRUE(differ);
    EXPECT_LT(histogram_l1(a, w, g, 32), 0.02);
    EXPECT_THROW(sample_ensemble(RealField(g.n_x(), 0.0), g, 10, 1), InvalidArgument);
    EXPECT_THROW(sample_ensemble(w, g, 0, 1), InvalidArgument);
}

TEST(AdvectEnsemble, StaticFieldLeavesParticles) {
    const GridSpec g(16, 0.5, 0.1);
    const Ensemble e = grid_ensemble(g, 10);
    const AdvectResult r = advect_ensemble(e, constant_slices(g.n_x(), 1.0, 0.0, 0.1, 20), g);
    for (std::size_t i = 0; i < e.particles.size(); ++i) EXPECT_EQ(r.final.particles[i].x, e.particles[i].x);
    EXPECT_TRUE(r.stops.empty());
}

TEST(AdvectEnsemble, UniformDriftWraps) {
    const GridSpec g(16, 0.25, 0.05);  // L = 4
    const Ensemble e = grid_ensemble(g, 10);
    const AdvectResult r = advect_ensemble(e, constant_slices(g.n_x(), 2.0, 1.0, 0.05, 40), g, true);
    ASSERT_EQ(r.paths.size(), 41u);
    for (std::size_t i = 0; i < e.particles.size(); ++i) {
        const double expect = std::fmod(e.particles[i].x + 1.0, g.length());
        EXPECT_NEAR(r.final.particles[i].x, expect, 1e-12);
        EXPECT_NEAR(r.final.particles[i].t, 2.0, 1e-12);
    }
    for (double v : r.max_abs_v) EXPECT_DOUBLE_EQ(v, 0.5);
}

TEST(AdvectEnsemble, SignChangeOfScalarPotentialStopsParticles) {
    const GridSpec g(16, 0.25, 0.05);
    std::vector<UnitaryState> slices = constant_slices(g.n_x(), 1.0, 0.3, 0.05, 4);
    for (std::size_t k = 3; k < slices.size(); ++k)
        for (auto& b : slices[k].b[0]) b = -1.0;
    const AdvectResult r = advect_ensemble(grid_ensemble(g, 5), slices, g);
    EXPECT_EQ(r.stops.size(), 5u);
    for (const auto& s : r.stops) EXPECT_NEAR(s.t, 0.1, 1e-12);
    EXPECT_EQ(r.final.active_count(), 0u);
    EXPECT_EQ(r.active.back(), 0u);
}

TEST(AdvectEnsemble, Equivariance) {
    std::size_t stopped = 0;
    const double coarse = packet_l1(256, 2500);
    const double fine = packet_l1(512, 10000, &stopped);
    EXPECT_LE(coarse, 0.05);
    EXPECT_LE(fine, 0.05);
    EXPECT_LT(fine, coarse);
    EXPECT_LT(stopped, 1000u);
}
