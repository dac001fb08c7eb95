#pragma once

#include <array>
#include <string>

#include "nullgauge/grid.hpp"

namespace nullgauge {

// Component 0 is the time component (A^0), component 1 the spatial one (A^1), both contravariant.
// With metric (+,-) the covariant components are A_0 = A^0, A_1 = -A^1.
using Potential = std::array<RealField, 2>;

inline Potential zero_potential(std::size_t n) { return {RealField(n, 0.0), RealField(n, 0.0)}; }

struct ComplexKgmState {
    ComplexField psi;
    ComplexField psi_dot;
    Potential a;
    Potential a_dot;
    double t = 0.0;

    static ComplexKgmState zeros(std::size_t n) {
        return {ComplexField(n, 0.0), ComplexField(n, 0.0), zero_potential(n), zero_potential(n), 0.0};
    }

    template <class S, class R, class F>
    static void zip(S& s, R& r, F&& f) {
        f(s.psi, r.psi);
        f(s.psi_dot, r.psi_dot);
        for (int mu = 0; mu < 2; ++mu) {
            f(s.a[mu], r.a[mu]);
            f(s.a_dot[mu], r.a_dot[mu]);
        }
    }
};

struct UnitaryState {
    RealField phi;
    RealField phi_dot;
    Potential b;
    Potential b_dot;
    double t = 0.0;

    static UnitaryState zeros(std::size_t n) {
        return {RealField(n, 0.0), RealField(n, 0.0), zero_potential(n), zero_potential(n), 0.0};
    }

    template <class S, class R, class F>
    static void zip(S& s, R& r, F&& f) {
        f(s.phi, r.phi);
        f(s.phi_dot, r.phi_dot);
        for (int mu = 0; mu < 2; ++mu) {
            f(s.b[mu], r.b[mu]);
            f(s.b_dot[mu], r.b_dot[mu]);
        }
    }
};

struct EmOnlyState {
    Potential b;
    Potential b_dot;
    double t = 0.0;

    static EmOnlyState zeros(std::size_t n) { return {zero_potential(n), zero_potential(n), 0.0}; }

    template <class S, class R, class F>
    static void zip(S& s, R& r, F&& f) {
        for (int mu = 0; mu < 2; ++mu) {
            f(s.b[mu], r.b[mu]);
            f(s.b_dot[mu], r.b_dot[mu]);
        }
    }
};

inline EmOnlyState project_to_em(const UnitaryState& u) { return {u.b, u.b_dot, u.t}; }

template <class S>
bool state_finite(const S& s) {
    bool ok = std::isfinite(s.t);
    S::zip(s, s, [&](const auto& a, const auto&) { ok = ok && all_finite(a); });
    return ok;
}

template <class S>
void check_state(const S& s, const GridSpec& g, const char* what) {
    S::zip(s, s, [&](const auto& a, const auto&) { check_length(a, g, what); });
}

template <class S>
void require_finite(const S& s, const char* what) {
    if (!state_finite(s))
        throw NonFinite(std::string(what) + ": non-finite value in state at t = " + std::to_string(s.t), s.t);
}

}  // namespace nullgauge
