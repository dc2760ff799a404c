// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>

#include "serdsp/waveform.hpp"

namespace serdsp {

enum class InversionBlock { DFR_BLOCK, IC1_BLOCK };

const char* to_string(InversionBlock b);
InversionBlock inversion_from_string(const std::string& s);

/// Four adaptive FIR filters around a nonlinear inversion of the square-law
/// detection: r -> H11/H21 -> inversion -> H12/H22 -> power match against
/// the known training waveform.
struct CalibrationState {
    RealVec h11, h12, h21, h22;  // common length L
    double mu1 = 1e-3;
    double mu2 = 1e-3;
    double a = 0.0;  // LO amplitude; <= 0 means estimate from the traces
    InversionBlock inversion = InversionBlock::DFR_BLOCK;
    RealVec cost_trace;  // per-sample e(n)^2

    size_t length() const { return h11.size(); }
};

/// Identity initialization: center tap 1, the rest 0.
CalibrationState make_identity_state(size_t L, double mu1, double mu2, double a,
                                     InversionBlock inversion);

/// One-iteration cancellation inverse: i2 = i1 - (i1^2+q1^2), same for q2.
std::pair<RealVec, RealVec> invert_ic1(const RealVec& i1, const RealVec& q1);

/// Closed-form inverse: maps (i1, q1) back to photocurrents r = 2a*x + a^2
/// and applies the balanced reconstruction with the |delta| guard.
std::pair<RealVec, RealVec> invert_dfr_block(const RealVec& i1, const RealVec& q1, double a);

/// d(i2,q2)/d(i1,q1) of either inversion block at one sample.
struct BlockJacobian {
    double di2_di1, di2_dq1, dq2_di1, dq2_dq1;
};
BlockJacobian inversion_jacobian(InversionBlock block, double i1, double q1, double a);

/// Runs the adaptive circuit over the traces, one LMS update per sample.
/// Training must be the ideal shaped waveform at the photocurrent sample
/// rate; alignment is recovered by cross-correlating |s|^2 with r1. The
/// returned state carries the adapted taps and appended cost trace.
/// Throws on non-finite cost, reporting the sample index.
CalibrationState calibrate(const RealVec& r1, const RealVec& r2, const Waveform& training,
                           CalibrationState state);

struct ResponseEstimate {
    RealVec freq_hz;
    ComplexVec rx1, rx2;  // from h11, h21
    ComplexVec tx1, tx2;  // from h12, h22
};

/// Response estimates as reciprocals of the converged filters' frequency
/// responses, with the common (L-1)/2 delay removed and unit gain at DC.
ResponseEstimate extract_responses(const CalibrationState& state, const RealVec& grid_hz,
                                   double sample_rate_hz);

/// Smoothed cost in dB relative to the mean square of the reference power
/// waveform: 10*log10(<e^2>_window / mean(|s|^4)).
RealVec windowed_cost_db(const RealVec& cost_trace, const Waveform& training, size_t window = 1024);

/// Per-tap gradient of the instantaneous cost e(n)^2 at sample n with the
/// state's taps held fixed (no adaptation); test hook used to audit the LMS
/// update directions against finite differences.
struct TapGradients {
    RealVec h11, h12, h21, h22;
};
TapGradients cost_gradients_at(const CalibrationState& state, const RealVec& rb1,
                               const RealVec& rb2, const RealVec& ref_power, size_t n);

/// d(n) and e(n) at sample n with frozen taps; same chain the gradients
/// differentiate.
std::pair<double, double> chain_output_at(const CalibrationState& state, const RealVec& rb1,
                                          const RealVec& rb2, const RealVec& ref_power, size_t n);

/// (r - a^2) / (2a), the circuit's input normalization.
RealVec normalize_photocurrent(const RealVec& r, double a);

}  // namespace serdsp
