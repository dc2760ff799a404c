// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>

#include "serdsp/waveform.hpp"

namespace serdsp {

struct ChannelConfig {
    double length_km = 0.0;
    double dispersion_ps_nm_km = 17.0;  // SSMF, C-band
    double wavelength_nm = 1550.0;
    std::optional<double> osnr_db;  // empty = noiseless
    double osnr_ref_bw_hz = 12.5e9; // 0.1 nm convention
};

/// All-pass chromatic dispersion: X(f) *= exp(+j*pi*D*L*lambda^2*f^2/c),
/// applied as one transform over the whole trace. Negating length_km gives
/// the exact inverse.
Waveform apply_cd(const Waveform& w, const ChannelConfig& cfg);

/// Adds circular complex white Gaussian noise with power set so that
/// signal power / (noise power falling in ref_bw) = 10^(osnr_db/10).
Waveform add_ase(const Waveform& w, double osnr_db, double ref_bw_hz, uint64_t seed);

}  // namespace serdsp
