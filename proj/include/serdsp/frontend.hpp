// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "serdsp/waveform.hpp"

namespace serdsp {

/// Single-ended receiver model: LO amplitudes per branch, O/E impulse
/// responses of the two PD/TIA/ADC chains, and an optional electrical
/// bandwidth limit expressed as a bandwidth ratio.
struct FrontEndConfig {
    double a1 = 1.0;
    double a2 = 1.0;
    RealVec j1{1.0};  // single unit tap = ideal chain
    RealVec j2{1.0};
    std::optional<double> bwr;  // empty = unlimited
};

struct PhotocurrentPair {
    RealVec r1, r2;
    double sample_rate = 0.0;
    double symbol_rate = 0.0;
    FrontEndConfig config_used;
};

/// Square-law detection of both branches. With I, Q the real/imag parts of
/// the field: r1 = a1^2 + I^2 + Q^2 + 2*a1*I and r2 = a2^2 + I^2 + Q^2 +
/// 2*a2*Q (branches already rescaled so the quadratic term has equal gain),
/// each circularly convolved with its O/E response, then BWR-limited when
/// configured.
PhotocurrentPair detect(const Waveform& field, const FrontEndConfig& cfg);

/// Ideal brick-wall low-pass with one-sided cutoff (bwr/2)*symbol_rate on
/// both traces.
PhotocurrentPair apply_bwr(const PhotocurrentPair& pair, double bwr, double symbol_rate);

/// 10*log10(Abar^2 / E{I^2+Q^2}) with Abar^2 = (a1^2+a2^2)/2.
double lospr_of(const Waveform& field, const FrontEndConfig& cfg);

/// Rescales a1, a2 (preserving their ratio) so lospr_of(field, cfg) hits
/// target_db. The field is untouched.
FrontEndConfig set_lospr(const Waveform& field, double target_db, FrontEndConfig cfg);

/// LO amplitude estimate from one photocurrent trace, for calibration
/// scenarios where A is not given. Uses E{R} = A^2 + p and, for Gaussian
/// fields, var(R) = p^2 + 2*A^2*p, which solve to A^2 = sqrt(mean^2 - var).
double estimate_lo_amplitude(const RealVec& r);

/// Linear-phase FIR taps of a Gaussian low-pass of the given order
/// (|H(f)| = exp(-(ln2/2) (f/f3db)^(2*order))), unit DC gain.
RealVec gaussian_lowpass_taps(int order, double f3db_hz, double sample_rate_hz, int n_taps);

}  // namespace serdsp
