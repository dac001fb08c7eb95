#include <gtest/gtest.h>

#include <numbers>

#include "nullgauge/grid.hpp"

using namespace nullgauge;

namespace {

GridSpec periodic_2pi(std::size_t n) {
    const double dx = 2.0 * std::numbers::pi / static_cast<double>(n);
    return GridSpec(n, dx, 0.25 * dx);
}

}  // namespace

TEST(GridSpec, SitesAreCellCentres) {
    const GridSpec g(16, 0.5, 0.1);
    EXPECT_DOUBLE_EQ(g.length(), 8.0);
    EXPECT_DOUBLE_EQ(g.x(0), 0.25);
    EXPECT_DOUBLE_EQ(g.x(15), 7.75);
}

TEST(GridSpec, RejectsBadParameters) {
    EXPECT_THROW(GridSpec(4, 0.1, 0.01), InvalidArgument);
    EXPECT_THROW(GridSpec(16, -0.1, 0.01), InvalidArgument);
    EXPECT_THROW(GridSpec(16, 0.1, 0.0), InvalidArgument);
    EXPECT_NO_THROW(GridSpec(16, 0.1, 0.05));
}

TEST(GridSpec, CflGuardExplainsItself) {
    try {
        GridSpec(64, 0.1, 0.09);
        FAIL() << "dt/dx = 0.9 accepted";
    } catch (const InvalidArgument& e) {
        EXPECT_NE(std::string(e.what()).find("CFL"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("0.9"), std::string::npos);
    }
}

TEST(PhysicalConstants, Validation) {
    EXPECT_NO_THROW(PhysicalConstants(0.0, 1.0));
    EXPECT_THROW(PhysicalConstants(0.0, 1.0).require_coupling("x"), InvalidArgument);
    EXPECT_THROW(PhysicalConstants(1.0, 0.0), InvalidArgument);
    EXPECT_DOUBLE_EQ(PhysicalConstants(2.0, 3.0).k_squared(), 2.25);
}

// Fourier modes are eigenvectors of both stencils; the discrete symbols are exact oracles.
TEST(Stencils, FourierSymbols) {
    const GridSpec g = periodic_2pi(64);
    for (int k : {1, 3, 7, 31}) {
        RealField s(g.n_x()), c(g.n_x());
        for (std::size_t j = 0; j < g.n_x(); ++j) {
            s[j] = std::sin(k * g.x(j));
            c[j] = std::cos(k * g.x(j));
        }
        const double d_symbol = std::sin(k * g.dx()) / g.dx();
        const double l_symbol = -std::pow(2.0 * std::sin(0.5 * k * g.dx()) / g.dx(), 2);
        const RealField d = spatial_derivative(s, g), l = laplacian_1d(s, g);
        for (std::size_t j = 0; j < g.n_x(); ++j) {
            EXPECT_NEAR(d[j], d_symbol * c[j], 1e-12 * k);
            EXPECT_NEAR(l[j], l_symbol * s[j], 1e-11 * k * k);
        }
    }
}

TEST(Stencils, ComplexMatchesComponentwise) {
    const GridSpec g = periodic_2pi(32);
    ComplexField z(g.n_x());
    RealField re(g.n_x()), im(g.n_x());
    for (std::size_t j = 0; j < g.n_x(); ++j) {
        re[j] = std::exp(std::sin(g.x(j)));
        im[j] = std::cos(2.0 * g.x(j));
        z[j] = cplx(re[j], im[j]);
    }
    const ComplexField dz = spatial_derivative(z, g), lz = laplacian_1d(z, g);
    const RealField dr = spatial_derivative(re, g), di = spatial_derivative(im, g);
    const RealField lr = laplacian_1d(re, g), li = laplacian_1d(im, g);
    for (std::size_t j = 0; j < g.n_x(); ++j) {
        EXPECT_EQ(dz[j].real(), dr[j]);
        EXPECT_EQ(dz[j].imag(), di[j]);
        EXPECT_EQ(lz[j].real(), lr[j]);
        EXPECT_EQ(lz[j].imag(), li[j]);
    }
}

TEST(Stencils, SecondOrderUnderRefinement) {
    double ed[3], el[3];
    for (int level = 0; level < 3; ++level) {
        const GridSpec g = periodic_2pi(32u << level);
        RealField f(g.n_x());
        for (std::size_t j = 0; j < g.n_x(); ++j) f[j] = std::exp(std::sin(g.x(j)));
        const RealField d = spatial_derivative(f, g), l = laplacian_1d(f, g);
        ed[level] = el[level] = 0.0;
        for (std::size_t j = 0; j < g.n_x(); ++j) {
            const double x = g.x(j), fx = std::exp(std::sin(x));
            ed[level] = std::max(ed[level], std::abs(d[j] - std::cos(x) * fx));
            el[level] = std::max(el[level], std::abs(l[j] - (std::cos(x) * std::cos(x) - std::sin(x)) * fx));
        }
    }
    for (int level = 0; level < 2; ++level) {
        EXPECT_GE(std::log2(ed[level] / ed[level + 1]), 1.9);
        EXPECT_GE(std::log2(el[level] / el[level + 1]), 1.9);
    }
}

TEST(Stencils, PeriodicWrapAndSizeCheck) {
    const GridSpec g(8, 1.0, 0.1);
    RealField f{1, 0, 0, 0, 0, 0, 0, 0};
    const RealField d = spatial_derivative(f, g);
    EXPECT_DOUBLE_EQ(d[1], -0.5);
    EXPECT_DOUBLE_EQ(d[7], 0.5);
    const RealField l = laplacian_1d(f, g);
    EXPECT_DOUBLE_EQ(l[0], -2.0);
    EXPECT_DOUBLE_EQ(l[7], 1.0);
    EXPECT_THROW(spatial_derivative(RealField(7), g), InvalidArgument);
}

TEST(Norms, Basics) {
    const RealField a{3.0, -4.0}, b{1.0, 1.0};
    EXPECT_DOUBLE_EQ(l2_norm(a, 0.5), std::sqrt(12.5));
    EXPECT_DOUBLE_EQ(max_abs(a), 4.0);
    EXPECT_DOUBLE_EQ(max_abs_diff(a, b), 5.0);
    EXPECT_TRUE(all_finite(a));
    EXPECT_FALSE(all_finite(RealField{1.0, std::nan("")}));
}
