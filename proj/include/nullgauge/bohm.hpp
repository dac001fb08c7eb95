#pragma once

#include <random>

#include "nullgauge/parallel.hpp"
#include "nullgauge/unitary.hpp"

namespace nullgauge {

struct TracerParticle {
    double x = 0.0;
    double t = 0.0;
    bool active = true;
};

struct Ensemble {
    std::vector<TracerParticle> particles;
    std::uint64_t seed = 0;

    std::size_t active_count() const {
        std::size_t n = 0;
        for (const auto& p : particles) n += p.active;
        return n;
    }
};

inline double wrap_periodic(double x, double length) {
    double y = std::fmod(x, length);
    if (y < 0.0) y += length;
    if (y >= length) y -= length;
    return y;
}

// Linear interpolation between cell-centred sites, periodic.
inline double interpolate(const RealField& f, double x, const GridSpec& g) {
    const double s = wrap_periodic(x, g.length()) / g.dx() - 0.5;
    const double fl = std::floor(s);
    const double w = s - fl;
    const std::size_t n = g.n_x();
    const long i0 = static_cast<long>(fl);
    const std::size_t a = static_cast<std::size_t>((i0 % static_cast<long>(n) + static_cast<long>(n)) % static_cast<long>(n));
    const std::size_t b = (a + 1) % n;
    return (1.0 - w) * f[a] + w * f[b];
}

// v = j^1 / j^0 = B^1 / B^0.
inline double guidance_velocity(const UnitaryState& u, double x, const GridSpec& g) {
    const double b0 = interpolate(u.b[0], x, g);
    if (b0 == 0.0 || !std::isfinite(b0))
        throw VanishingB0AtPoint("guidance_velocity: B^0 vanishes at x = " + std::to_string(x), x, u.t);
    return interpolate(u.b[1], x, g) / b0;
}

// Positions drawn from the normalized density by inverse CDF of its piecewise-constant cell
// representation. Quantiles are stratified, (i + U_i)/N with U_i from a seeded generator.
inline Ensemble sample_ensemble(const RealField& weight, const GridSpec& g, std::size_t count, std::uint64_t seed) {
    check_length(weight, g, "sample_ensemble");
    if (count == 0) throw InvalidArgument("sample_ensemble: empty ensemble requested");
    const std::size_t n = g.n_x();
    std::vector<double> cdf(n + 1, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        if (weight[j] < 0.0) throw InvalidArgument("sample_ensemble: negative weight");
        cdf[j + 1] = cdf[j] + weight[j];
    }
    const double total = cdf[n];
    if (!(total > 0.0)) throw InvalidArgument("sample_ensemble: weight has zero mass");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Ensemble ens;
    ens.seed = seed;
    ens.particles.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double target = (static_cast<double>(i) + unif(rng)) / static_cast<double>(count) * total;
        std::size_t j = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), target) - cdf.begin());
        j = std::clamp<std::size_t>(j, 1, n) - 1;
        const double frac = weight[j] > 0.0 ? (target - cdf[j]) / weight[j] : 0.5;
        ens.particles[i].x = (static_cast<double>(j) + std::clamp(frac, 0.0, 1.0)) * g.dx();
    }
    return ens;
}

struct StopEvent {
    std::size_t particle = 0;
    double t = 0.0;
    double x = 0.0;
};

struct AdvectResult {
    Ensemble final;
    std::vector<StopEvent> stops;
    std::vector<double> times;       // slice times
    std::vector<double> max_abs_v;   // per slice, over active particles
    std::vector<std::size_t> active; // per slice
    std::vector<std::vector<double>> paths;  // positions per slice when requested
};

// RK4 in time along stored slices (uniform spacing), fields interpolated linearly in space and time.
// A particle whose RK stages see B^0 change sign is stopped at its last position and logged.
inline AdvectResult advect_ensemble(const Ensemble& ens, const std::vector<UnitaryState>& slices, const GridSpec& g,
                                    bool record_paths = false) {
    if (ens.particles.empty()) throw InvalidArgument("advect_ensemble: empty ensemble");
    if (slices.size() < 2) throw InvalidArgument("advect_ensemble: need at least two slices");
    const std::size_t np = ens.particles.size();
    AdvectResult res;
    res.final = ens;
    auto& parts = res.final.particles;
    const double length = g.length();

    auto sample = [&](std::size_t k, double w, double x, double& b0, double& b1) {
        const double a0 = interpolate(slices[k].b[0], x, g), c0 = interpolate(slices[k + 1].b[0], x, g);
        const double a1 = interpolate(slices[k].b[1], x, g), c1 = interpolate(slices[k + 1].b[1], x, g);
        b0 = (1.0 - w) * a0 + w * c0;
        b1 = (1.0 - w) * a1 + w * c1;
    };
    auto record = [&](std::size_t k) {
        double vmax = 0.0;
        for (const auto& p : parts) {
            if (!p.active) continue;
            const double v = std::abs(guidance_velocity(slices[k], p.x, g));
            vmax = std::max(vmax, v);
        }
        res.times.push_back(slices[k].t);
        res.max_abs_v.push_back(vmax);
        res.active.push_back(res.final.active_count());
        if (record_paths) {
            std::vector<double> xs(np);
            for (std::size_t i = 0; i < np; ++i) xs[i] = parts[i].x;
            res.paths.push_back(std::move(xs));
        }
    };
    for (auto& p : parts) p.t = slices.front().t;
    record(0);

    std::vector<char> stopped(np, 0);
    for (std::size_t k = 0; k + 1 < slices.size(); ++k) {
        const double h = slices[k + 1].t - slices[k].t;
        std::fill(stopped.begin(), stopped.end(), 0);
        parallel_for(np, [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                TracerParticle& p = parts[i];
                if (!p.active) continue;
                double b0s, b1s;
                sample(k, 0.0, p.x, b0s, b1s);
                bool ok = b0s != 0.0;
                auto vel = [&](double w, double x) {
                    double b0, b1;
                    sample(k, w, x, b0, b1);
                    if (!(b0 * b0s > 0.0)) ok = false;
                    return ok ? b1 / b0 : 0.0;
                };
                const double k1 = vel(0.0, p.x);
                const double k2 = vel(0.5, p.x + 0.5 * h * k1);
                const double k3 = vel(0.5, p.x + 0.5 * h * k2);
                const double k4 = vel(1.0, p.x + h * k3);
                if (!ok) {
                    p.active = false;
                    stopped[i] = 1;
                    continue;
                }
                p.x = wrap_periodic(p.x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4), length);
                double b0e, b1e;
                sample(k, 1.0, p.x, b0e, b1e);
                if (!(b0e * b0s > 0.0)) {
                    p.active = false;
                    stopped[i] = 1;
                    continue;
                }
                p.t = slices[k + 1].t;
            }
        });
        for (std::size_t i = 0; i < np; ++i)
            if (stopped[i]) res.stops.push_back({i, parts[i].t, parts[i].x});
        record(k + 1);
    }
    return res;
}

// Histogram of active particles and of the weight field over `bins` equal bins of [0, L), each
// normalized to unit mass; returns the L1 distance between them.
inline double histogram_l1(const Ensemble& ens, const RealField& weight, const GridSpec& g, std::size_t bins) {
    check_length(weight, g, "histogram_l1");
    if (bins == 0) throw InvalidArgument("histogram_l1: bins must be positive");
    const double length = g.length();
    std::vector<double> hp(bins, 0.0), hw(bins, 0.0);
    std::size_t active = 0;
    for (const auto& p : ens.particles) {
        if (!p.active) continue;
        auto b = static_cast<std::size_t>(wrap_periodic(p.x, length) / length * static_cast<double>(bins));
        hp[std::min(b, bins - 1)] += 1.0;
        ++active;
    }
    if (active == 0) throw InvalidArgument("histogram_l1: no active particles");
    // Cell j covers [j dx, (j+1) dx); split its mass across bin edges by overlap.
    const double bw = length / static_cast<double>(bins);
    double total = 0.0;
    for (std::size_t j = 0; j < g.n_x(); ++j) {
        const double lo = static_cast<double>(j) * g.dx(), hi = lo + g.dx();
        const double dens = weight[j] / g.dx();
        std::size_t b = static_cast<std::size_t>(lo / bw);
        double x = lo;
        while (x < hi && b < bins) {
            const double edge = std::min(hi, static_cast<double>(b + 1) * bw);
            hw[b] += dens * (edge - x);
            x = edge;
            ++b;
        }
        total += weight[j];
    }
    double l1 = 0.0;
    for (std::size_t b = 0; b < bins; ++b) l1 += std::abs(hp[b] / static_cast<double>(active) - hw[b] / total);
    return l1;
}

}  // namespace nullgauge
