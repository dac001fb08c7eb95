#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <type_traits>
#include <vector>

#include "nullgauge/error.hpp"

namespace nullgauge {

using cplx = std::complex<double>;
using RealField = std::vector<double>;
using ComplexField = std::vector<cplx>;

enum class Boundary { periodic };

// Uniform periodic lattice. Sites sit at cell centres x_j = (j + 1/2) dx, so x = 0 and x = L/2
// fall midway between sites.
class GridSpec {
public:
    GridSpec(std::size_t n_x, double dx, double dt, Boundary boundary = Boundary::periodic)
        : n_x_(n_x), dx_(dx), dt_(dt), boundary_(boundary) {
        if (n_x < 8) throw InvalidArgument("grid: n_x must be at least 8, got " + std::to_string(n_x));
        if (!(dx > 0.0) || !std::isfinite(dx)) throw InvalidArgument("grid: dx must be positive");
        if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("grid: dt must be positive");
        if (dt / dx > 0.5)
            throw InvalidArgument("grid: CFL guard violated, dt/dx = " + std::to_string(dt / dx) +
                                  " exceeds 0.5; reduce dt or increase dx");
    }

    std::size_t n_x() const { return n_x_; }
    double dx() const { return dx_; }
    double dt() const { return dt_; }
    Boundary boundary() const { return boundary_; }
    double length() const { return static_cast<double>(n_x_) * dx_; }
    double x(std::size_t j) const { return (static_cast<double>(j) + 0.5) * dx_; }

    GridSpec with_dt(double dt) const { return GridSpec(n_x_, dx_, dt, boundary_); }

private:
    std::size_t n_x_;
    double dx_;
    double dt_;
    Boundary boundary_;
};

struct PhysicalConstants {
    double e;
    double m;

    PhysicalConstants(double e_, double m_) : e(e_), m(m_) {
        if (!std::isfinite(e)) throw InvalidArgument("constants: e must be finite");
        if (!(m > 0.0) || !std::isfinite(m)) throw InvalidArgument("constants: m must be positive");
    }
    // For operations that divide by the coupling.
    void require_coupling(const char* what) const {
        if (e == 0.0) throw InvalidArgument(std::string(what) + ": needs a nonzero coupling e");
    }
    // Constant of the A.A = k^2 constraint.
    double k_squared() const { return (m * m) / (e * e); }
};

inline std::vector<double> site_positions(const GridSpec& g) {
    std::vector<double> x(g.n_x());
    for (std::size_t j = 0; j < g.n_x(); ++j) x[j] = g.x(j);
    return x;
}

template <class F>
void check_length(const std::vector<F>& f, const GridSpec& g, const char* what) {
    if (f.size() != g.n_x())
        throw InvalidArgument(std::string(what) + ": field length " + std::to_string(f.size()) +
                              " does not match n_x = " + std::to_string(g.n_x()));
}

// Central difference with periodic wraparound.
template <class T>
std::vector<T> spatial_derivative(const std::vector<T>& f, const GridSpec& g) {
    check_length(f, g, "spatial_derivative");
    const std::size_t n = f.size();
    const double s = 1.0 / (2.0 * g.dx());
    std::vector<T> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t jp = (j + 1 == n) ? 0 : j + 1;
        const std::size_t jm = (j == 0) ? n - 1 : j - 1;
        out[j] = (f[jp] - f[jm]) * s;
    }
    return out;
}

// Three-point Laplacian.
template <class T>
std::vector<T> laplacian_1d(const std::vector<T>& f, const GridSpec& g) {
    check_length(f, g, "laplacian_1d");
    const std::size_t n = f.size();
    const double s = 1.0 / (g.dx() * g.dx());
    std::vector<T> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t jp = (j + 1 == n) ? 0 : j + 1;
        const std::size_t jm = (j == 0) ? n - 1 : j - 1;
        out[j] = (f[jp] - 2.0 * f[j] + f[jm]) * s;
    }
    return out;
}

template <class T>
bool all_finite(const std::vector<T>& f) {
    for (const auto& v : f) {
        if constexpr (std::is_same_v<T, cplx>) {
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        } else {
            if (!std::isfinite(v)) return false;
        }
    }
    return true;
}

inline double sum(const RealField& f) {
    double s = 0.0;
    for (double v : f) s += v;
    return s;
}

inline double max_abs(const RealField& f) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    return m;
}

inline double min_abs(const RealField& f) {
    double m = f.empty() ? 0.0 : std::abs(f[0]);
    for (double v : f) m = std::min(m, std::abs(v));
    return m;
}

inline double max_abs(const ComplexField& f) {
    double m = 0.0;
    for (const auto& v : f) m = std::max(m, std::abs(v));
    return m;
}

// Discrete L2 norm, sqrt(sum |f|^2 dx).
inline double l2_norm(const RealField& f, double dx) {
    double s = 0.0;
    for (double v : f) s += v * v;
    return std::sqrt(s * dx);
}

inline double max_abs_diff(const RealField& a, const RealField& b) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
    return m;
}

inline RealField abs_field(const RealField& f) {
    RealField out(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) out[j] = std::abs(f[j]);
    return out;
}

inline RealField abs_field(const ComplexField& f) {
    RealField out(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) out[j] = std::abs(f[j]);
    return out;
}

}  // namespace nullgauge
