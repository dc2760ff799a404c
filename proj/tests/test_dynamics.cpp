// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "serdsp/dynamics.hpp"
#include "serdsp/rng.hpp"

using namespace serdsp;

namespace {

// Independent oracle: classify by brute-force iteration. Oscillation kinds
// are reported by terminal-set cardinality; the period-2/higher split is an
// observational boundary and is not distinguished here.
ConvergenceClass simulate_class(double s, double delta0, int n_iter = 1000) {
    double b = s * s + s;
    double e0 = 2.0 * delta0 + s;
    auto traj = iterate_map(b, e0, n_iter);
    double tail_min = 1e300, tail_max = -1e300;
    std::set<long> quantized;
    for (size_t k = traj.size() - 64; k < traj.size(); ++k) {
        tail_min = std::min(tail_min, traj[k]);
        tail_max = std::max(tail_max, traj[k]);
        quantized.insert(std::lround(traj[k] * 1e9));
    }
    if (tail_min <= -0.5 * kMapSaturate) return {ConvergenceKind::DivergesToMinusInfinity, 0.0};
    if (tail_max - tail_min < 1e-6) {
        double delta_inf = 0.5 * (traj.back() - s);
        if (std::abs(delta_inf) < 1e-6) return {ConvergenceKind::ConvergesToZeroError, 0.0};
        return {ConvergenceKind::ConvergesToOffset, delta_inf};
    }
    if (quantized.size() == 2) return {ConvergenceKind::PeriodicOscillation, 0.0};
    return {ConvergenceKind::ChaoticOrHigherPeriod, 0.0};
}

}  // namespace

TEST_CASE("map trajectories by hand") {
    auto t = iterate_map(0.0, 0.5, 4);
    CHECK(t[0] == 0.5);
    CHECK(t[1] == doctest::Approx(-0.25));
    CHECK(t[2] == doctest::Approx(-0.0625));
    CHECK(std::abs(iterate_map(0.0, 0.5, 100).back()) < 1e-12);

    // beta is a fixed point
    auto fp = fixed_points(0.7);
    auto c = iterate_map(0.7, fp.beta, 10);
    for (double v : c) CHECK(v == doctest::Approx(fp.beta).epsilon(1e-12));

    // e0 = 2 at b = 0 runs away monotonically
    auto d = iterate_map(0.0, 2.0, 6);
    CHECK(d[1] == doctest::Approx(-4.0));
    CHECK(d[2] == doctest::Approx(-16.0));
    for (size_t k = 2; k < d.size(); ++k) CHECK(d[k] < d[k - 1]);

    // saturation keeps everything finite
    auto e = iterate_map(0.0, 1e80, 8);
    for (double v : e) CHECK(std::isfinite(v));
    CHECK(e.back() == -kMapSaturate);
}

TEST_CASE("fixed points") {
    auto f0 = fixed_points(0.0);
    CHECK(f0.alpha == doctest::Approx(-1.0));
    CHECK(f0.beta == doctest::Approx(0.0));
    auto f2 = fixed_points(2.0);
    CHECK(f2.alpha == doctest::Approx(-2.0));
    CHECK(f2.beta == doctest::Approx(1.0));
    auto fq = fixed_points(-0.25);
    CHECK(fq.alpha == doctest::Approx(-0.5));
    CHECK(fq.beta == doctest::Approx(-0.5));
    CHECK_THROWS_AS(fixed_points(-0.3), std::invalid_argument);
}

TEST_CASE("classifier spot checks") {
    auto c1 = classify(0.0, 0.1);
    CHECK(c1.kind == ConvergenceKind::ConvergesToZeroError);

    auto c2 = classify(-1.0, 0.1);
    CHECK(c2.kind == ConvergenceKind::ConvergesToOffset);
    CHECK(c2.offset == doctest::Approx(0.5));

    auto c3 = classify(0.0, 1.0);
    CHECK(c3.kind == ConvergenceKind::DivergesToMinusInfinity);

    // oracle agreement on the three spots
    CHECK(simulate_class(0.0, 0.1).kind == c1.kind);
    auto s2 = simulate_class(-1.0, 0.1);
    CHECK(s2.kind == c2.kind);
    CHECK(s2.offset == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(simulate_class(0.0, 1.0).kind == c3.kind);
}

TEST_CASE("boundary e0 = +-alpha lands on the repelling fixed point") {
    // s <= -1/2: alpha equals s, so the terminal error is zero
    auto cb = classify(-0.8, 0.0);  // e0 = s = alpha
    CHECK(cb.kind == ConvergenceKind::ConvergesToZeroError);
    // s > -1/2 on the boundary converges to the documented offset
    double s = 0.2;
    double abs_alpha = 0.5 + std::abs(s + 0.5);  // 1.2
    double delta0 = (abs_alpha - s) / 2.0;       // e0 = +|alpha|
    auto cb2 = classify(s, delta0);
    CHECK(cb2.kind == ConvergenceKind::ConvergesToOffset);
    CHECK(cb2.offset == doctest::Approx(-(s + 0.5)));
}

TEST_CASE("trajectories never settle at alpha and diverge monotonically once outside") {
    auto fp = fixed_points(0.5);
    for (double eps : {1e-3, -1e-3, 1e-5}) {
        auto t = iterate_map(0.5, fp.alpha + eps, 200);
        bool left = false;
        for (double v : t)
            if (std::abs(v - fp.alpha) > 0.1) left = true;
        CHECK(left);
    }
    // once |e| > |alpha| the sequence decreases monotonically (after one step)
    auto t = iterate_map(0.5, -std::abs(fp.alpha) - 0.05, 40);
    for (size_t k = 2; k < t.size(); ++k) {
        if (t[k - 1] <= -kMapSaturate) break;
        CHECK(t[k] <= t[k - 1]);
    }
}

TEST_CASE("classifier matches 1000-step simulation away from boundaries") {
    Rng rng(4242);
    const int trials = 10000;
    const double margin = 1e-3;
    int agree = 0, total = 0;
    for (int t = 0; t < trials; ++t) {
        double s = rng.uniform(-2.5, 1.5);
        double delta0 = rng.uniform(-1.5, 1.5);
        double b = s * s + s;
        double e0 = 2.0 * delta0 + s;
        double abs_alpha = 0.5 + std::abs(s + 0.5);
        // stay away from every classification boundary
        if (std::abs(std::abs(e0) - abs_alpha) < margin) continue;
        if (std::abs(b - 0.75) < margin || std::abs(b - 1.3) < margin || std::abs(b - 2.0) < margin)
            continue;
        if (std::abs(s + 0.5) < margin || std::abs(s - 0.5) < margin) continue;
        ++total;

        auto want = classify(s, delta0);
        if (want.kind == ConvergenceKind::UnboundedOrBounded) {
            ++agree;  // no guarantee claimed
            continue;
        }
        auto got = simulate_class(s, delta0);
        bool ok = false;
        switch (want.kind) {
            case ConvergenceKind::DivergesToMinusInfinity:
            case ConvergenceKind::ConvergesToZeroError:
                ok = got.kind == want.kind;
                break;
            case ConvergenceKind::ConvergesToOffset:
                ok = got.kind == want.kind && std::abs(got.offset - want.offset) < 1e-5;
                break;
            case ConvergenceKind::PeriodicOscillation:
            case ConvergenceKind::ChaoticOrHigherPeriod:
                // oscillatory classes are verified by bounded multi-valued
                // terminal sets; the 2-vs-many boundary at b = 1.3 is the
                // reported observation, not a dynamical threshold
                ok = got.kind == ConvergenceKind::PeriodicOscillation ||
                     got.kind == ConvergenceKind::ChaoticOrHigherPeriod;
                break;
            default:
                ok = true;
        }
        if (ok) ++agree;
    }
    REQUIRE(total > 8000);
    CHECK(static_cast<double>(agree) / total >= 0.99);
}

TEST_CASE("bifurcation accumulation structure at the three reference parameters") {
    auto count_at = [](double b) {
        auto rows = bifurcation(b, b, 1, 200, 1000, 7);
        return rows.size();
    };
    CHECK(count_at(0.5) == 1);
    CHECK(count_at(1.0) == 2);
    CHECK(count_at(1.8) >= 4);

    auto rows = bifurcation(0.5, 0.5, 1, 100, 1000, 7);
    double beta = fixed_points(0.5).beta;
    CHECK(rows[0].terminal_value == doctest::Approx(beta).epsilon(1e-9));
    CHECK(rows[0].multiplicity == 100 * 64);
}

TEST_CASE("delta-coordinate bifurcation matches the change of variables") {
    // at s = -1 (b = 0) every confined trajectory ends at beta = 0, so the
    // terminal error is -(s + 1/2) = 0.5
    auto rows = bifurcation_delta(-1.0, -1.0, 1, 50, 1000, 3);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].terminal_value == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("classifier agrees with the cancellation recurrence through the variable change") {
    // iterate the error recurrence directly and compare against the map
    Rng rng(99);
    for (int t = 0; t < 200; ++t) {
        double s = rng.uniform(-1.2, 0.7);
        double delta0 = rng.uniform(-0.4, 0.4);
        double d = delta0;
        double e = 2.0 * delta0 + s;
        double b = s * s + s;
        for (int k = 0; k < 30; ++k) {
            d = -2.0 * d * (d + s);
            e = -e * e + b;
            if (!std::isfinite(d) || std::abs(d) > 1e40) break;
            // e(n) = 2 delta(n) + s, exactly
            CHECK(std::abs(e - (2.0 * d + s)) < 1e-9 * std::max(1.0, std::abs(e)));
        }
    }
}
