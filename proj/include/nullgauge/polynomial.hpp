#pragma once

#include <array>
#include <complex>
#include <map>

namespace nullgauge {

// Polynomial in the four coordinates (t, x, y, z) with complex coefficients, exact under
// multiplication and differentiation.
class Polynomial {
public:
    using Exponents = std::array<int, 4>;
    using cplx = std::complex<double>;

    Polynomial() = default;
    explicit Polynomial(cplx constant) {
        if (constant != cplx(0.0)) terms_[{0, 0, 0, 0}] = constant;
    }

    static Polynomial monomial(Exponents e, cplx coeff) {
        Polynomial p;
        if (coeff != cplx(0.0)) p.terms_[e] = coeff;
        return p;
    }

    const std::map<Exponents, cplx>& terms() const { return terms_; }

    int degree() const {
        int d = 0;
        for (const auto& [e, c] : terms_) d = std::max(d, e[0] + e[1] + e[2] + e[3]);
        return d;
    }

    Polynomial& operator+=(const Polynomial& o) {
        for (const auto& [e, c] : o.terms_) terms_[e] += c;
        return *this;
    }
    Polynomial& operator*=(cplx s) {
        for (auto& [e, c] : terms_) c *= s;
        return *this;
    }
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator*(Polynomial a, cplx s) { return a *= s; }
    friend Polynomial operator*(cplx s, Polynomial a) { return a *= s; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        Polynomial out;
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                Exponents e{ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]};
                out.terms_[e] += ca * cb;
            }
        return out;
    }

    Polynomial derivative(int var) const {
        Polynomial out;
        for (const auto& [e, c] : terms_) {
            if (e[var] == 0) continue;
            Exponents d = e;
            d[var] -= 1;
            out.terms_[d] += c * static_cast<double>(e[var]);
        }
        return out;
    }

    cplx operator()(const std::array<double, 4>& p) const {
        cplx s = 0.0;
        for (const auto& [e, c] : terms_) {
            double m = 1.0;
            for (int v = 0; v < 4; ++v)
                for (int k = 0; k < e[v]; ++k) m *= p[v];
            s += c * m;
        }
        return s;
    }

private:
    std::map<Exponents, cplx> terms_;
};

}  // namespace nullgauge
