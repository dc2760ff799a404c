// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include "serdsp/signal.hpp"

namespace serdsp {

/// Iterate saturation bound for the quadratic map e(n+1) = -e(n)^2 + b;
/// diverging trajectories are pinned at -kMapSaturate instead of overflowing.
constexpr double kMapSaturate = 1e100;

/// The map parameter reachable from a real s = Ibar + Qbar is b = s^2 + s,
/// never below -1/4.
struct MapInstance {
    double b = 0.0;
    double e0 = 0.0;
};

enum class ConvergenceKind {
    DivergesToMinusInfinity,
    ConvergesToZeroError,
    ConvergesToOffset,
    PeriodicOscillation,
    ChaoticOrHigherPeriod,
    UnboundedOrBounded,
};

const char* to_string(ConvergenceKind k);

struct ConvergenceClass {
    ConvergenceKind kind = ConvergenceKind::ConvergesToZeroError;
    double offset = 0.0;  // valid for ConvergesToOffset
};

/// Trajectory [e0, e1, ..., en] of e(k+1) = -e(k)^2 + b.
RealVec iterate_map(double b, double e0, int n);

struct FixedPoints {
    double alpha;  // repelling root, alpha <= beta
    double beta;
};

/// Roots of x = -x^2 + b; requires b >= -1/4.
FixedPoints fixed_points(double b);

/// Terminal behavior of the cancellation-error recurrence for a sample with
/// s = Ibar + Qbar and initial error delta0, via e0 = 2*delta0 + s and
/// b = s^2 + s. The period-2/higher boundary (default 1.3) is an observed
/// value, not derived.
ConvergenceClass classify(double s, double delta0, double period2_boundary = 1.3);

struct BifurcationRow {
    double b = 0.0;
    double terminal_value = 0.0;
    long multiplicity = 0;
};

/// For each b on the grid, iterates samples_per_b random e0 drawn from the
/// confinement interval [alpha, -alpha] and records the deduplicated set of
/// values visited over the final 64 iterations.
std::vector<BifurcationRow> bifurcation(double b_min, double b_max, int n_b, int samples_per_b,
                                        int n_iter, uint64_t seed);

/// Same diagram in error coordinates: rows are (s, terminal delta) with
/// delta = (e - s)/2, for s on a grid.
std::vector<BifurcationRow> bifurcation_delta(double s_min, double s_max, int n_s,
                                              int samples_per_s, int n_iter, uint64_t seed);

}  // namespace serdsp
