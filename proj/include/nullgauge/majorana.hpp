#pragma once

#include <Eigen/Dense>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nullgauge/error.hpp"
#include "nullgauge/polynomial.hpp"

namespace nullgauge {

using Matrix4c = Eigen::Matrix4cd;
using Spinor = Eigen::Vector4cd;
using FourVector = std::array<double, 4>;

enum class Representation { dirac, majorana };

inline constexpr double minkowski(int mu) { return mu == 0 ? 1.0 : -1.0; }

inline double minkowski_dot(const FourVector& a, const FourVector& b) {
    return a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3];
}

inline double euclid_norm(const FourVector& a) {
    return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3]);
}

// Gamma matrices gamma^mu for metric (+,-,-,-) and the charge conjugation Psi_c = C conj(Psi).
struct GammaSet {
    std::array<Matrix4c, 4> gamma;
    Matrix4c conjugation;
    Representation rep;

    Matrix4c gamma5() const {
        return std::complex<double>(0.0, 1.0) * gamma[0] * gamma[1] * gamma[2] * gamma[3];
    }
    // gamma^mu A_mu for contravariant A.
    Matrix4c slash(const FourVector& a) const {
        Matrix4c s = Matrix4c::Zero();
        for (int mu = 0; mu < 4; ++mu) s += minkowski(mu) * a[mu] * gamma[mu];
        return s;
    }
};

namespace detail {

inline Eigen::Matrix2cd pauli(int k) {
    using c = std::complex<double>;
    Eigen::Matrix2cd s;
    if (k == 1) s << 0, 1, 1, 0;
    else if (k == 2) s << 0, c(0, -1), c(0, 1), 0;
    else s << 1, 0, 0, -1;
    return s;
}

inline Matrix4c block(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b, const Eigen::Matrix2cd& c,
                      const Eigen::Matrix2cd& d) {
    Matrix4c m;
    m << a, b, c, d;
    return m;
}

}  // namespace detail

inline GammaSet dirac_gammas() {
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity(), z = Eigen::Matrix2cd::Zero();
    GammaSet g;
    g.rep = Representation::dirac;
    g.gamma[0] = detail::block(id, z, z, -id);
    for (int k = 1; k <= 3; ++k) g.gamma[k] = detail::block(z, detail::pauli(k), -detail::pauli(k), z);
    g.conjugation = std::complex<double>(0.0, 1.0) * g.gamma[2];
    return g;
}

// Unitary basis change from the Dirac to the Majorana representation. The overall phase e^{i pi/4}
// makes the transformed conjugation matrix the identity, so the Majorana condition is reality.
inline Matrix4c dirac_to_majorana() {
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    const Eigen::Matrix2cd s2 = detail::pauli(2);
    return std::polar(1.0, std::numbers::pi / 4.0) / std::sqrt(2.0) * detail::block(id, s2, s2, -id);
}

inline GammaSet majorana_gammas() {
    const GammaSet d = dirac_gammas();
    const Matrix4c u = dirac_to_majorana();
    GammaSet g;
    g.rep = Representation::majorana;
    for (int mu = 0; mu < 4; ++mu) g.gamma[mu] = u * d.gamma[mu] * u.adjoint();
    g.conjugation = u * d.conjugation * u.transpose();
    return g;
}

// max |{gamma^mu, gamma^nu} - 2 g^{mu nu}|.
inline double clifford_residual(const GammaSet& g) {
    double r = 0.0;
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu) {
            Matrix4c ac = g.gamma[mu] * g.gamma[nu] + g.gamma[nu] * g.gamma[mu];
            if (mu == nu) ac -= 2.0 * minkowski(mu) * Matrix4c::Identity();
            r = std::max(r, ac.cwiseAbs().maxCoeff());
        }
    return r;
}

inline Spinor charge_conjugate(const Spinor& psi, const GammaSet& g) { return g.conjugation * psi.conjugate(); }

inline bool is_majorana(const Spinor& psi, const GammaSet& g, double tol = 1e-12) {
    return (charge_conjugate(psi, g) - psi).norm() <= tol * std::max(1.0, psi.norm());
}

// Projection onto the Majorana subspace; requires C conj(C) = 1, which holds for both shipped sets.
inline Spinor majorana_part(const Spinor& chi, const GammaSet& g) { return 0.5 * (chi + charge_conjugate(chi, g)); }

inline Spinor random_spinor(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Spinor s;
    for (int i = 0; i < 4; ++i) s(i) = std::complex<double>(n(rng), n(rng));
    return s;
}

inline Spinor random_majorana(std::mt19937_64& rng, const GammaSet& g) {
    for (;;) {
        const Spinor s = majorana_part(random_spinor(rng), g);
        if (s.norm() > 1e-6) return s;
    }
}

namespace detail {

inline FourVector bilinear(const Spinor& psi, const GammaSet& g, const Matrix4c* left, const char* what) {
    const Eigen::RowVector4cd bar = psi.adjoint() * g.gamma[0];
    FourVector out{};
    const double scale = std::max(psi.squaredNorm(), 1e-300);
    for (int mu = 0; mu < 4; ++mu) {
        const Matrix4c m = left ? Matrix4c(*left * g.gamma[mu]) : g.gamma[mu];
        const std::complex<double> v = (bar * m * psi)(0, 0);
        if (std::abs(v.imag()) > 1e-10 * scale)
            throw InvalidArgument(std::string(what) + ": bilinear is not real (imaginary part " +
                                  std::to_string(v.imag()) + ")");
        out[mu] = v.real();
    }
    return out;
}

}  // namespace detail

// Contravariant psibar gamma^mu psi (unit charge).
inline FourVector dirac_current(const Spinor& psi, const GammaSet& g) {
    return detail::bilinear(psi, g, nullptr, "dirac_current");
}

// Contravariant psibar gamma^5 gamma^mu psi.
inline FourVector axial_current(const Spinor& psi, const GammaSet& g) {
    const Matrix4c g5 = g.gamma5();
    return detail::bilinear(psi, g, &g5, "axial_current");
}

struct NullspaceResult {
    std::vector<FourVector> basis;
    std::array<double, 4> singular_values{};
};

// Real basis of {A : slash(A) psi = 0}. The map A -> slash(A) psi is real-linear from R^4 to C^4;
// its 8x4 real matrix is decomposed by SVD and directions with singular value below
// rank_tol * max singular value span the nullspace.
inline NullspaceResult slash_nullspace(const Spinor& psi, const GammaSet& g, double rank_tol = 1e-8,
                                       double ambiguity_band = 1e2) {
    if (!(psi.norm() > 0.0)) throw InvalidArgument("slash_nullspace: spinor must be nonzero");
    Eigen::Matrix<double, 8, 4> m;
    for (int mu = 0; mu < 4; ++mu) {
        const Spinor col = minkowski(mu) * (g.gamma[mu] * psi);
        m.block<4, 1>(0, mu) = col.real();
        m.block<4, 1>(4, mu) = col.imag();
    }
    Eigen::JacobiSVD<Eigen::Matrix<double, 8, 4>> svd(m, Eigen::ComputeFullV);
    NullspaceResult res;
    const auto sv = svd.singularValues();
    const double smax = sv(0);
    const double thr = rank_tol * smax;
    for (int i = 0; i < 4; ++i) {
        res.singular_values[i] = sv(i);
        if (sv(i) > thr / ambiguity_band && sv(i) < thr * ambiguity_band)
            throw DegenerateSpinor("slash_nullspace: singular value " + std::to_string(sv(i)) +
                                   " lies in the ambiguous band around the rank threshold");
        if (sv(i) <= thr) {
            const Eigen::Vector4d v = svd.matrixV().col(i);
            res.basis.push_back({v(0), v(1), v(2), v(3)});
        }
    }
    return res;
}

// Least-squares lambda with j ~ lambda A, and the residual |j - lambda A|.
inline std::pair<double, double> proportionality(const FourVector& j, const FourVector& a) {
    double ja = 0.0, aa = 0.0;
    for (int mu = 0; mu < 4; ++mu) {
        ja += j[mu] * a[mu];
        aa += a[mu] * a[mu];
    }
    const double lam = ja / aa;
    FourVector r{};
    for (int mu = 0; mu < 4; ++mu) r[mu] = j[mu] - lam * a[mu];
    return {lam, euclid_norm(r)};
}

// Independent count of null rays A = (1, n), |n| = 1, annihilating psi: a Fibonacci grid on the
// sphere is scanned for low values of |slash(A) psi|, the best seeds are refined by a shrinking
// pattern search in the tangent plane, and converged minima are clustered.
inline std::size_t null_ray_scan(const Spinor& psi, const GammaSet& g, std::size_t grid_points = 4000,
                                 double accept = 1e-7) {
    const double norm = psi.norm();
    auto f = [&](const Eigen::Vector3d& n) {
        return (g.slash({1.0, n(0), n(1), n(2)}) * psi).norm() / (std::sqrt(2.0) * norm);
    };
    std::vector<std::pair<double, Eigen::Vector3d>> pts;
    pts.reserve(grid_points);
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < grid_points; ++i) {
        const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(grid_points);
        const double r = std::sqrt(1.0 - z * z);
        const double ph = golden * static_cast<double>(i);
        const Eigen::Vector3d n(r * std::cos(ph), r * std::sin(ph), z);
        pts.emplace_back(f(n), n);
    }
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

    std::vector<Eigen::Vector3d> seeds;
    for (const auto& [val, n] : pts) {
        bool far = true;
        for (const auto& s : seeds) far = far && std::acos(std::clamp(s.dot(n), -1.0, 1.0)) > 0.3;
        if (far) seeds.push_back(n);
        if (seeds.size() == 6) break;
    }

    std::vector<Eigen::Vector3d> found;
    for (Eigen::Vector3d n : seeds) {
        double best = f(n);
        double step = 0.05;
        while (step > 1e-13) {
            Eigen::Vector3d a = n.unitOrthogonal();
            Eigen::Vector3d b = n.cross(a);
            bool moved = false;
            for (int i = -1; i <= 1; ++i)
                for (int j = -1; j <= 1; ++j) {
                    if (i == 0 && j == 0) continue;
                    const Eigen::Vector3d c = (n + step * (i * a + j * b)).normalized();
                    const double v = f(c);
                    if (v < best) {
                        best = v;
                        n = c;
                        moved = true;
                    }
                }
            if (!moved) step *= 0.5;
        }
        if (best <= accept) {
            bool dup = false;
            for (const auto& m : found) dup = dup || (m - n).norm() < 1e-4;
            if (!dup) found.push_back(n);
        }
    }
    return found.size();
}

struct PhaseFactorization {
    double theta = 0.0;
    Spinor phi;
};

// Psi = e^{i theta} Phi with Phi Majorana and theta in [0, pi). From Psi_c = e^{-2 i theta} Psi,
// e^{2 i theta} = <Psi_c, Psi> / |Psi|^2.
inline PhaseFactorization phase_factorization(const Spinor& psi, const GammaSet& g, double axial_tol = 1e-10) {
    const double n2 = psi.squaredNorm();
    if (!(n2 > 0.0)) throw InvalidArgument("phase_factorization: spinor must be nonzero");
    const FourVector ax = axial_current(psi, g);
    const double axn = euclid_norm(ax);
    if (axn > axial_tol * n2)
        throw AxialCurrentNonzero("phase_factorization: axial current " + std::to_string(axn) +
                                  " exceeds tolerance relative to |psi|^2");
    const std::complex<double> lam = charge_conjugate(psi, g).dot(psi) / n2;  // dot conjugates the first
    if (std::abs(lam) < 0.5)
        throw DegeneratePhase("phase_factorization: Majorana and anti-Majorana parts are comparable, |lambda| = " +
                              std::to_string(std::abs(lam)));
    double theta = 0.5 * std::arg(lam);
    if (theta < 0.0) theta += std::numbers::pi;
    if (theta >= std::numbers::pi) theta -= std::numbers::pi;
    PhaseFactorization out{theta, std::polar(1.0, -theta) * psi};
    if ((charge_conjugate(out.phi, g) - out.phi).norm() > 1e-8 * std::sqrt(n2))
        throw DegeneratePhase("phase_factorization: factor is not Majorana within tolerance");
    return out;
}

// ---- operator identity for the slashed derivative and potential ---------------------------------

using SpinorField = std::array<Polynomial, 4>;
using VectorField = std::array<Polynomial, 4>;  // contravariant components

struct IdentityResidual {
    double residual = 0.0;  // |lhs - rhs|
    double scale = 0.0;     // |2 A.d Psi| + |A_{nu,mu} g^mu g^nu Psi|
    double scaled() const { return residual / std::max(scale, 1e-300); }
};

namespace detail {

// Applies a constant matrix to a spinor of polynomials.
inline SpinorField apply_matrix(const Matrix4c& m, const SpinorField& s) {
    SpinorField out;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            if (m(a, b) != std::complex<double>(0.0)) out[a] += m(a, b) * s[b];
    return out;
}

inline SpinorField add(const SpinorField& a, const SpinorField& b) {
    SpinorField out;
    for (int i = 0; i < 4; ++i) out[i] = a[i] + b[i];
    return out;
}

// gamma^mu d_mu applied to a polynomial spinor.
inline SpinorField dslash(const SpinorField& s, const GammaSet& g) {
    SpinorField out;
    for (int mu = 0; mu < 4; ++mu) {
        SpinorField d;
        for (int a = 0; a < 4; ++a) d[a] = s[a].derivative(mu);
        out = add(out, apply_matrix(g.gamma[mu], d));
    }
    return out;
}

// gamma^mu A_mu applied to a polynomial spinor.
inline SpinorField aslash(const VectorField& a, const SpinorField& s, const GammaSet& g) {
    SpinorField out;
    for (int mu = 0; mu < 4; ++mu) {
        const Polynomial a_low = a[mu] * std::complex<double>(minkowski(mu));
        SpinorField prod;
        for (int k = 0; k < 4; ++k) prod[k] = a_low * s[k];
        out = add(out, apply_matrix(g.gamma[mu], prod));
    }
    return out;
}

inline Spinor eval(const SpinorField& s, const std::array<double, 4>& p) {
    Spinor v;
    for (int a = 0; a < 4; ++a) v(a) = s[a](p);
    return v;
}

}  // namespace detail

// Left side (dslash aslash + aslash dslash) Psi is formed by exact polynomial products and
// derivatives; the right side 2 A^mu d_mu Psi + sign * A_{nu,mu} gamma^mu gamma^nu Psi is evaluated
// pointwise from derivatives. sign = -1 is the mutation control.
inline IdentityResidual slash_anticommutator_identity(const SpinorField& psi, const VectorField& a, const GammaSet& g,
                                  const std::array<double, 4>& probe, double sign = 1.0) {
    const SpinorField lhs_field =
        detail::add(detail::dslash(detail::aslash(a, psi, g), g), detail::aslash(a, detail::dslash(psi, g), g));
    const Spinor lhs = detail::eval(lhs_field, probe);

    Spinor first = Spinor::Zero(), second = Spinor::Zero();
    for (int mu = 0; mu < 4; ++mu) {
        Spinor d;
        for (int k = 0; k < 4; ++k) d(k) = psi[k].derivative(mu)(probe);
        first += 2.0 * a[mu](probe) * d;
    }
    const Spinor p = detail::eval(psi, probe);
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu) {
            const std::complex<double> a_nu_mu = minkowski(nu) * a[nu].derivative(mu)(probe);
            second += a_nu_mu * (g.gamma[mu] * g.gamma[nu] * p);
        }
    const Spinor rhs = first + sign * second;
    return {(lhs - rhs).norm(), first.norm() + second.norm()};
}

inline Polynomial random_polynomial(std::mt19937_64& rng, int degree, bool complex_coeffs) {
    std::normal_distribution<double> n(0.0, 1.0);
    Polynomial p;
    for (int a = 0; a <= degree; ++a)
        for (int b = 0; a + b <= degree; ++b)
            for (int c = 0; a + b + c <= degree; ++c)
                for (int d = 0; a + b + c + d <= degree; ++d) {
                    const double re = n(rng);
                    const double im = complex_coeffs ? n(rng) : 0.0;
                    p += Polynomial::monomial({a, b, c, d}, std::complex<double>(re, im));
                }
    return p;
}

}  // namespace nullgauge
