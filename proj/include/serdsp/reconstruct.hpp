// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

#include "serdsp/frontend.hpp"

namespace serdsp {

enum class Method { DFR, CIC, GD, RAW };

const char* to_string(Method m);
Method method_from_string(const std::string& s);

enum class ClipTarget { SSBI_ESTIMATE, IQ_BRANCHES };

/// Clipping threshold in dB relative to a reference average power measured
/// once from the initial guess (mean SSBI-estimate power for CIC, per-branch
/// mean power for GD).
struct ClipSpec {
    double level_db = 0.0;
    ClipTarget target = ClipTarget::SSBI_ESTIMATE;
};

struct ReconstructionResult {
    RealVec i_hat, q_hat;
    int iterations = 0;
    long real_mults_per_sample = 0;  // instrumented count, see kernels
    long clip_events = 0;
    Method method = Method::RAW;
};

/// Real multiplications per (I,Q) sample. Counting convention (shared with
/// the instrumented kernels): sqrt costs 4, multiplications by powers of two
/// are shifts and free, fixed front-end normalizations are absorbed into the
/// ADC gain, the output denormalization is counted.
long mult_count(Method m, int n_iter);

/// Closed-form field reconstruction (the "+" branch, |delta| under the
/// root). Exact whenever I + Q + A >= 0 in the balanced case.
ReconstructionResult dfr(const PhotocurrentPair& pair, double a1, double a2);

struct CicOptions {
    std::optional<ClipSpec> clip;
    // Hybrid imbalance: branch 2 amplitude when it differs from `a`. Each
    // branch is normalized by its own amplitude so the normalized system
    // keeps its form.
    std::optional<double> a2;
    // Test hook: explicit initial-guess offsets instead of the per-trace
    // empirical means of U1/U2.
    std::optional<double> u1_mean, u2_mean;
};

/// Iterative SSBI cancellation on normalized branches U = (R - a^2)/(4a^2).
/// n_iter = 0 returns the initial guess. Iterate magnitudes saturate at
/// 1e100 so diverging samples stay finite (they surface as huge outputs).
/// Trace-level means and clip references are computed up front, before the
/// per-sample loop, so results do not depend on how callers partition the
/// samples across threads.
ReconstructionResult cic(const PhotocurrentPair& pair, double a, int n_iter,
                         const CicOptions& opts = {});

struct GdOptions {
    std::optional<ClipSpec> clip;  // target IQ_BRANCHES
    std::optional<double> a2;
    std::optional<double> u1_mean, u2_mean;
};

/// Gradient descent on G = X^2 + Y^2 with the exact analytic gradient
/// (a factor 2 absorbed into mu), starting from the CIC initial guess.
ReconstructionResult gd(const PhotocurrentPair& pair, double a, int n_iter, double mu,
                        const GdOptions& opts = {});

/// Per-sample normalized error 2*sqrt((i_n-i_true)^2 + (q_n-q_true)^2).
RealVec gd_error_norm(const RealVec& i_n, const RealVec& q_n, const RealVec& i_true,
                      const RealVec& q_true);

/// Conventional SER baseline: i_hat = (r1 - a1^2)/(2 a1) minus its mean; no
/// SSBI mitigation.
ReconstructionResult raw_passthrough(const PhotocurrentPair& pair, double a1, double a2);

}  // namespace serdsp
