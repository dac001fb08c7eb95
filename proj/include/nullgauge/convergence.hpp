#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "nullgauge/csv.hpp"

namespace nullgauge {

// Observed order from errors at spacings h and h/2.
inline double observed_order(double coarse, double fine) {
    if (!(coarse > 0.0) || !(fine > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return std::log2(coarse / fine);
}

// Observed order from three solution values at h, h/2, h/4.
inline double richardson_order(double f1, double f2, double f3) {
    return observed_order(std::abs(f1 - f2), std::abs(f2 - f3));
}

enum class OrderMode { error, richardson };

struct QuantityOrder {
    std::string quantity;
    double t = 0.0;         // time of the aligned row used
    double order_12 = 0.0;  // h -> h/2 (error mode)
    double order_23 = 0.0;  // h/2 -> h/4 (error mode); in richardson mode both carry the single estimate
    double min_order() const { return std::fmin(order_12, order_23); }
};

struct ConvergenceReport {
    std::vector<QuantityOrder> orders;
    std::size_t aligned_rows = 0;
};

// Per-quantity observed orders at the last time common to all three series. The first column is the
// time axis; every time in the coarse series must appear in the finer ones.
inline ConvergenceReport convergence_report(const Table& a, const Table& b, const Table& c,
                                            OrderMode mode = OrderMode::error) {
    if (a.header != b.header || a.header != c.header)
        throw InvalidArgument("convergence_report: misaligned inputs, column headers differ");
    if (a.header.size() < 2) throw InvalidArgument("convergence_report: need a time column and a quantity");
    if (a.rows.empty()) throw InvalidArgument("convergence_report: empty series");

    auto find_time = [](const Table& t, double when) -> std::size_t {
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            const double v = t.number(r, 0);
            if (std::abs(v - when) <= 1e-9 * std::max(1.0, std::abs(when))) return r;
        }
        throw InvalidArgument("convergence_report: misaligned inputs, time " + format_number(when) +
                              " missing from a finer series");
    };
    std::vector<std::array<std::size_t, 3>> aligned;
    for (std::size_t r = 0; r < a.rows.size(); ++r) {
        const double t = a.number(r, 0);
        aligned.push_back({r, find_time(b, t), find_time(c, t)});
    }
    ConvergenceReport rep;
    rep.aligned_rows = aligned.size();
    const auto& last = aligned.back();
    for (std::size_t q = 1; q < a.header.size(); ++q) {
        QuantityOrder o;
        o.quantity = a.header[q];
        o.t = a.number(last[0], 0);
        const double e1 = a.number(last[0], q), e2 = b.number(last[1], q), e3 = c.number(last[2], q);
        if (mode == OrderMode::error) {
            o.order_12 = observed_order(std::abs(e1), std::abs(e2));
            o.order_23 = observed_order(std::abs(e2), std::abs(e3));
        } else {
            o.order_12 = o.order_23 = richardson_order(e1, e2, e3);
        }
        rep.orders.push_back(o);
    }
    return rep;
}

}  // namespace nullgauge
