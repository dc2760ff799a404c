// SPDX-License-Identifier: Apache-2.0
#include "serdsp/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "serdsp/rng.hpp"

namespace serdsp {

namespace {

double map_step(double e, double b) {
    double next = -e * e + b;
    if (next < -kMapSaturate) next = -kMapSaturate;
    if (next > kMapSaturate) next = kMapSaturate;
    return next;
}

// Dedup tolerance for terminal-value sets.
constexpr double kDedupTol = 1e-6;
constexpr int kTailLen = 64;

void accumulate_terminal(std::vector<double>& values, double b, double e0, int n_iter) {
    double e = e0;
    int burn = n_iter - kTailLen;
    for (int k = 0; k < burn; ++k) e = map_step(e, b);
    for (int k = std::max(burn, 0); k < n_iter; ++k) {
        e = map_step(e, b);
        values.push_back(e);
    }
}

std::vector<std::pair<double, long>> dedup(std::vector<double>& values) {
    std::sort(values.begin(), values.end());
    std::vector<std::pair<double, long>> out;
    size_t i = 0;
    while (i < values.size()) {
        size_t j = i;
        double acc = 0.0;
        while (j < values.size() && values[j] - values[i] <= kDedupTol) acc += values[j++];
        out.emplace_back(acc / static_cast<double>(j - i), static_cast<long>(j - i));
        i = j;
    }
    return out;
}

}  // namespace

const char* to_string(ConvergenceKind k) {
    switch (k) {
        case ConvergenceKind::DivergesToMinusInfinity: return "diverges_to_minus_infinity";
        case ConvergenceKind::ConvergesToZeroError: return "converges_to_zero_error";
        case ConvergenceKind::ConvergesToOffset: return "converges_to_offset";
        case ConvergenceKind::PeriodicOscillation: return "periodic_oscillation";
        case ConvergenceKind::ChaoticOrHigherPeriod: return "chaotic_or_higher_period";
        case ConvergenceKind::UnboundedOrBounded: return "unbounded_or_bounded";
    }
    return "?";
}

RealVec iterate_map(double b, double e0, int n) {
    if (n < 0) throw std::invalid_argument("iterate_map: n must be >= 0");
    RealVec traj;
    traj.reserve(static_cast<size_t>(n) + 1);
    traj.push_back(e0);
    double e = e0;
    for (int k = 0; k < n; ++k) {
        e = map_step(e, b);
        traj.push_back(e);
    }
    return traj;
}

FixedPoints fixed_points(double b) {
    if (b < -0.25) throw std::invalid_argument("fixed_points: b < -1/4 has no real roots");
    double root = 0.5 * std::sqrt(1.0 + 4.0 * b);
    return FixedPoints{-0.5 - root, -0.5 + root};
}

ConvergenceClass classify(double s, double delta0, double period2_boundary) {
    const double e0 = 2.0 * delta0 + s;
    const double b = s * s + s;
    const double abs_alpha = 0.5 + std::abs(s + 0.5);

    if (std::abs(e0) > abs_alpha) return {ConvergenceKind::DivergesToMinusInfinity, 0.0};

    if (std::abs(e0) == abs_alpha) {
        // e0 = +/-alpha lands on the repelling fixed point and stays there:
        // delta -> (alpha - s)/2, which is 0 for s <= -1/2.
        if (s <= -0.5) return {ConvergenceKind::ConvergesToZeroError, 0.0};
        return {ConvergenceKind::ConvergesToOffset, -(s + 0.5)};
    }

    if (b <= 0.75) {
        // e converges to beta: delta -> (beta - s)/2.
        if (std::abs(s) <= 0.5) return {ConvergenceKind::ConvergesToZeroError, 0.0};
        return {ConvergenceKind::ConvergesToOffset, -(s + 0.5)};
    }
    if (b <= 2.0) {
        if (b <= period2_boundary) return {ConvergenceKind::PeriodicOscillation, 0.0};
        return {ConvergenceKind::ChaoticOrHigherPeriod, 0.0};
    }
    return {ConvergenceKind::UnboundedOrBounded, 0.0};
}

std::vector<BifurcationRow> bifurcation(double b_min, double b_max, int n_b, int samples_per_b,
                                        int n_iter, uint64_t seed) {
    if (b_min < -0.25) throw std::invalid_argument("bifurcation: b_min must be >= -1/4");
    if (n_iter < 100) throw std::invalid_argument("bifurcation: n_iter must be >= 100");
    if (n_b < 1 || samples_per_b < 1) throw std::invalid_argument("bifurcation: empty grid");

    std::vector<BifurcationRow> rows;
    Rng rng(seed);
    for (int gi = 0; gi < n_b; ++gi) {
        double b = n_b == 1 ? b_min : b_min + (b_max - b_min) * gi / (n_b - 1);
        FixedPoints fp = fixed_points(b);
        double lim = -fp.alpha;
        std::vector<double> tail;
        tail.reserve(static_cast<size_t>(samples_per_b) * kTailLen);
        for (int si = 0; si < samples_per_b; ++si) {
            double e0 = rng.uniform(fp.alpha, lim);
            accumulate_terminal(tail, b, e0, n_iter);
        }
        for (const auto& [value, count] : dedup(tail))
            rows.push_back(BifurcationRow{b, value, count});
    }
    return rows;
}

std::vector<BifurcationRow> bifurcation_delta(double s_min, double s_max, int n_s,
                                              int samples_per_s, int n_iter, uint64_t seed) {
    if (n_iter < 100) throw std::invalid_argument("bifurcation_delta: n_iter must be >= 100");
    if (n_s < 1 || samples_per_s < 1) throw std::invalid_argument("bifurcation_delta: empty grid");

    std::vector<BifurcationRow> rows;
    Rng rng(seed);
    for (int gi = 0; gi < n_s; ++gi) {
        double s = n_s == 1 ? s_min : s_min + (s_max - s_min) * gi / (n_s - 1);
        double b = s * s + s;
        FixedPoints fp = fixed_points(b);
        std::vector<double> tail;
        tail.reserve(static_cast<size_t>(samples_per_s) * kTailLen);
        for (int si = 0; si < samples_per_s; ++si) {
            double e0 = rng.uniform(fp.alpha, -fp.alpha);
            accumulate_terminal(tail, b, e0, n_iter);
        }
        // Back to error coordinates: delta = (e - s)/2.
        for (double& v : tail) v = 0.5 * (v - s);
        for (const auto& [value, count] : dedup(tail))
            rows.push_back(BifurcationRow{s, value, count});
    }
    return rows;
}

}  // namespace serdsp
