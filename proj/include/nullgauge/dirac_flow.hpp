#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "nullgauge/error.hpp"

namespace nullgauge {

using Vec2 = std::array<double, 2>;
// grad[nu][mu] = d_nu A^mu with nu = 0 (t) or 1 (x).
using Grad2 = std::array<Vec2, 2>;

// Contravariant potential A^mu(t, x), optionally with closed-form first derivatives. Without them,
// derivatives are taken by central differences with Richardson extrapolation.
struct AnalyticPotential {
    std::function<Vec2(double, double)> a;
    std::function<Grad2(double, double)> grad;
    double h_fd = 1e-5;
    std::string name;

    Vec2 operator()(double t, double x) const { return a(t, x); }

    Grad2 derivatives(double t, double x) const {
        if (grad) return grad(t, x);
        return fd_derivatives(t, x);
    }

    Grad2 fd_derivatives(double t, double x) const {
        Grad2 out{};
        for (int nu = 0; nu < 2; ++nu) {
            auto at = [&](double s) { return nu == 0 ? a(t + s, x) : a(t, x + s); };
            for (int mu = 0; mu < 2; ++mu) {
                const double d1 = (at(h_fd)[mu] - at(-h_fd)[mu]) / (2.0 * h_fd);
                const double d2 = (at(0.5 * h_fd)[mu] - at(-0.5 * h_fd)[mu]) / h_fd;
                out[nu][mu] = (4.0 * d2 - d1) / 3.0;
            }
        }
        return out;
    }

    // Largest gap between the h and h/2 central differences; an estimate of the derivative error.
    double richardson_gap(double t, double x) const {
        double gap = 0.0;
        for (int nu = 0; nu < 2; ++nu) {
            auto at = [&](double s) { return nu == 0 ? a(t + s, x) : a(t, x + s); };
            for (int mu = 0; mu < 2; ++mu) {
                const double d1 = (at(h_fd)[mu] - at(-h_fd)[mu]) / (2.0 * h_fd);
                const double d2 = (at(0.5 * h_fd)[mu] - at(-0.5 * h_fd)[mu]) / h_fd;
                gap = std::max(gap, std::abs(d1 - d2));
            }
        }
        return gap;
    }
};

inline AnalyticPotential uniform_potential(double a0, double a1) {
    return {[a0, a1](double, double) { return Vec2{a0, a1}; },
            [](double, double) { return Grad2{}; }, 1e-5, "uniform"};
}

// A = -(m/e)(cosh u, sinh u), u = amp sin(k x - w t). A.A = m^2/e^2 identically and -e A^0 > 0.
inline AnalyticPotential rapidity_potential(double e, double m, double amp = 0.3, double k = 1.0, double w = 0.0) {
    if (e == 0.0) throw InvalidArgument("rapidity_potential: needs a nonzero coupling e");
    const double s = -m / e;
    auto a = [=](double t, double x) {
        const double u = amp * std::sin(k * x - w * t);
        return Vec2{s * std::cosh(u), s * std::sinh(u)};
    };
    auto grad = [=](double t, double x) {
        const double ph = k * x - w * t;
        const double u = amp * std::sin(ph);
        const double du_dx = amp * k * std::cos(ph), du_dt = -amp * w * std::cos(ph);
        const Vec2 da_du{s * std::sinh(u), s * std::cosh(u)};
        return Grad2{Vec2{da_du[0] * du_dt, da_du[1] * du_dt}, Vec2{da_du[0] * du_dx, da_du[1] * du_dx}};
    };
    return {a, grad, 1e-5, "rapidity"};
}

// Rapidity profile with a position-dependent magnitude: A.A = (m/e)^2 (1 + eps sin x)^2 is not constant.
inline AnalyticPotential unconstrained_potential(double e, double m, double amp = 0.3, double eps = 0.3) {
    if (e == 0.0) throw InvalidArgument("unconstrained_potential: needs a nonzero coupling e");
    const double s = -m / e;
    auto a = [=](double, double x) {
        const double u = amp * std::sin(x);
        const double mag = s * (1.0 + eps * std::sin(x));
        return Vec2{mag * std::cosh(u), mag * std::sinh(u)};
    };
    return {a, nullptr, 1e-5, "unconstrained"};
}

struct RelParticle {
    Vec2 x{};  // (t, x)
    Vec2 p{};  // (p^0, p^1)
    double tau = 0.0;
};

// F^{01} = d^0 A^1 - d^1 A^0 = d_t A^1 + d_x A^0.
inline double field_strength(const Grad2& d) { return d[0][1] + d[1][0]; }

inline double mass_shell_residual(const RelParticle& q, double m) {
    return q.p[0] * q.p[0] - q.p[1] * q.p[1] - m * m;
}

inline void require_finite(const RelParticle& q, const char* what) {
    for (double v : {q.x[0], q.x[1], q.p[0], q.p[1], q.tau})
        if (!std::isfinite(v)) throw NonFinite(std::string(what) + ": non-finite particle state", q.tau);
}

// One RK4 step of dp^mu/dtau = (e/m) F^{mu nu} p_nu, dx^mu/dtau = p^mu / m.
inline RelParticle lorentz_push(const RelParticle& q, const AnalyticPotential& pot, double e, double m, double dtau) {
    if (!(dtau > 0.0)) throw InvalidArgument("lorentz_push: dtau must be positive");
    using Y = std::array<double, 4>;
    auto rate = [&](const Y& y) {
        const double f = field_strength(pot.derivatives(y[0], y[1]));
        // p_0 = p^0, p_1 = -p^1.
        return Y{y[2] / m, y[3] / m, -(e / m) * f * y[3], -(e / m) * f * y[2]};
    };
    auto add = [](const Y& y, double h, const Y& k) { return Y{y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2], y[3] + h * k[3]}; };
    const Y y{q.x[0], q.x[1], q.p[0], q.p[1]};
    const Y k1 = rate(y), k2 = rate(add(y, 0.5 * dtau, k1)), k3 = rate(add(y, 0.5 * dtau, k2)), k4 = rate(add(y, dtau, k3));
    RelParticle out;
    for (int i = 0; i < 4; ++i) {
        const double v = y[i] + dtau / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if (i < 2) out.x[i] = v;
        else out.p[i - 2] = v;
    }
    out.tau = q.tau + dtau;
    require_finite(out, "lorentz_push");
    return out;
}

inline RelParticle particle_on_potential(const AnalyticPotential& pot, double e, Vec2 x0) {
    if (e == 0.0) throw InvalidArgument("particle_on_potential: needs a nonzero coupling e");
    const Vec2 a = pot(x0[0], x0[1]);
    return {x0, Vec2{-e * a[0], -e * a[1]}, 0.0};
}

struct FlowPoint {
    double tau = 0.0;
    Vec2 x{};
    Vec2 p{};  // -e A along the path
};

// Integral curve of dx^mu/dtau = -e A^mu(x) / m.
inline std::vector<FlowPoint> flow_line(const AnalyticPotential& pot, double e, double m, Vec2 x0, double dtau,
                                        std::size_t n_steps) {
    if (!(dtau > 0.0)) throw InvalidArgument("flow_line: dtau must be positive");
    auto vel = [&](const Vec2& x) {
        const Vec2 a = pot(x[0], x[1]);
        return Vec2{-e * a[0] / m, -e * a[1] / m};
    };
    auto add = [](const Vec2& x, double h, const Vec2& k) { return Vec2{x[0] + h * k[0], x[1] + h * k[1]}; };
    std::vector<FlowPoint> path;
    path.reserve(n_steps + 1);
    Vec2 x = x0;
    for (std::size_t s = 0; s <= n_steps; ++s) {
        const Vec2 a = pot(x[0], x[1]);
        path.push_back({static_cast<double>(s) * dtau, x, Vec2{-e * a[0], -e * a[1]}});
        if (s == n_steps) break;
        const Vec2 k1 = vel(x), k2 = vel(add(x, 0.5 * dtau, k1)), k3 = vel(add(x, 0.5 * dtau, k2)), k4 = vel(add(x, dtau, k3));
        for (int i = 0; i < 2; ++i) x[i] += dtau / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if (!std::isfinite(x[0]) || !std::isfinite(x[1]))
            throw NonFinite("flow_line: non-finite position", static_cast<double>(s + 1) * dtau);
    }
    return path;
}

struct DiracResiduals {
    double constraint_residual_max = 0.0;        // |A.A - m^2/e^2|
    double field_equation_residual_max = 0.0;    // spatial component after eliminating lambda
    double differentiated_constraint_max = 0.0;  // |A_nu d^mu A^nu|
    std::vector<double> lambda;                  // multiplier at each sample
};

// Residuals of the constrained field equation box A_mu - d_mu (d.A) = lambda A_mu with lambda taken
// from the time component, and of the constraint and its gradient. Second derivatives by
// fourth-order central differences of the evaluator.
inline DiracResiduals dirac_residuals(const AnalyticPotential& pot, double e, double m, const std::vector<Vec2>& samples,
                                      double h2 = 1e-3) {
    DiracResiduals r;
    const double k2 = (m * m) / (e * e);
    auto second = [&](double t, double x, int a, int b, int mu) {
        auto f = [&](double st, double sx) { return pot(t + st, x + sx)[mu]; };
        if (a == b) {
            const double dt_ = a == 0 ? h2 : 0.0, dx_ = a == 1 ? h2 : 0.0;
            return (-f(2 * dt_, 2 * dx_) + 16.0 * f(dt_, dx_) - 30.0 * f(0, 0) + 16.0 * f(-dt_, -dx_) -
                    f(-2 * dt_, -2 * dx_)) /
                   (12.0 * h2 * h2);
        }
        return (f(h2, h2) - f(h2, -h2) - f(-h2, h2) + f(-h2, -h2)) / (4.0 * h2 * h2);
    };
    for (const Vec2& s : samples) {
        const double t = s[0], x = s[1];
        const Vec2 a = pot(t, x);
        const Grad2 d = pot.derivatives(t, x);
        r.constraint_residual_max = std::max(r.constraint_residual_max, std::abs(a[0] * a[0] - a[1] * a[1] - k2));
        // A_nu d^mu A^nu with d^0 = d_t, d^1 = -d_x.
        const double c0 = a[0] * d[0][0] - a[1] * d[0][1];
        const double c1 = -(a[0] * d[1][0] - a[1] * d[1][1]);
        r.differentiated_constraint_max = std::max({r.differentiated_constraint_max, std::abs(c0), std::abs(c1)});

        const double a0_xx = second(t, x, 1, 1, 0), a1_tx = second(t, x, 0, 1, 1);
        const double a1_tt = second(t, x, 0, 0, 1), a0_tx = second(t, x, 0, 1, 0);
        // Time component: -A^0_xx - A^1_tx = lambda A^0.
        const double lam = (-a0_xx - a1_tx) / a[0];
        r.lambda.push_back(lam);
        // Spatial component (covariant, A_1 = -A^1): -A^1_tt - A^0_tx + lambda A^1 = 0.
        const double res1 = -a1_tt - a0_tx + lam * a[1];
        r.field_equation_residual_max = std::max(r.field_equation_residual_max, std::abs(res1));
    }
    return r;
}

}  // namespace nullgauge
