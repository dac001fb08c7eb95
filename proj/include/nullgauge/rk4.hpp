#pragma once

#include "nullgauge/state.hpp"

namespace nullgauge {

// acc += c * k, fieldwise.
template <class S>
void accumulate(S& acc, double c, const S& k) {
    S::zip(acc, k, [c](auto& o, const auto& r) {
        for (std::size_t j = 0; j < o.size(); ++j) o[j] += c * r[j];
    });
}

// y + h * k. The rate k has the same layout as the state.
template <class S>
S axpy(const S& y, double h, const S& k) {
    S out = y;
    accumulate(out, h, k);
    out.t = y.t + h;
    return out;
}

// Classical fourth-order Runge-Kutta step for an autonomous first-order system.
template <class S, class Rate>
S rk4_step(const S& y, double h, Rate&& rate) {
    S sum = rate(y);
    const S k2 = rate(axpy(y, 0.5 * h, sum));
    const S k3 = rate(axpy(y, 0.5 * h, k2));
    const S k4 = rate(axpy(y, h, k3));
    accumulate(sum, 2.0, k2);
    accumulate(sum, 2.0, k3);
    accumulate(sum, 1.0, k4);
    S out = y;
    accumulate(out, h / 6.0, sum);
    out.t = y.t + h;
    return out;
}

}  // namespace nullgauge
