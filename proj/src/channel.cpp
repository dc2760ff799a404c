// SPDX-License-Identifier: Apache-2.0
#include "serdsp/channel.hpp"

#include <cmath>

#include "serdsp/fft.hpp"
#include "serdsp/rng.hpp"

namespace serdsp {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kLightSpeed = 2.99792458e8;  // m/s
}  // namespace

Waveform apply_cd(const Waveform& w, const ChannelConfig& cfg) {
    if (w.samples.empty()) throw std::invalid_argument("apply_cd: empty waveform");
    if (cfg.wavelength_nm <= 0.0) throw std::invalid_argument("apply_cd: wavelength must be > 0");
    if (cfg.length_km == 0.0) return w;

    const double d_si = cfg.dispersion_ps_nm_km * 1e-6;  // s/m^2
    const double l_si = cfg.length_km * 1e3;
    const double lam = cfg.wavelength_nm * 1e-9;
    const double coeff = kPi * d_si * l_si * lam * lam / kLightSpeed;

    const size_t n = w.samples.size();
    ComplexVec spec = fft::forward(w.samples);
    for (size_t m = 0; m < n; ++m) {
        double f = fft::bin_freq(m, n, w.sample_rate);
        double phase = coeff * f * f;
        spec[m] *= Complex{std::cos(phase), std::sin(phase)};
    }
    fft::inverse_inplace(spec);

    Waveform out = w;
    out.samples = std::move(spec);
    return out;
}

Waveform add_ase(const Waveform& w, double osnr_db, double ref_bw_hz, uint64_t seed) {
    if (!std::isfinite(osnr_db)) throw std::invalid_argument("add_ase: osnr_db must be finite");
    if (ref_bw_hz <= 0.0) throw std::invalid_argument("add_ase: ref_bw must be > 0");
    const double psig = mean_power(w.samples);
    if (psig <= 0.0) throw std::invalid_argument("add_ase: waveform power must be > 0");

    // White over the full sampled band: per-sample variance = N0 * fs with
    // N0 = psig / (osnr * ref_bw).
    const double var = psig * w.sample_rate / (undb10(osnr_db) * ref_bw_hz);
    const double sigma = std::sqrt(var / 2.0);

    Rng rng(seed);
    Waveform out = w;
    for (auto& v : out.samples) v += Complex{sigma * rng.gaussian(), sigma * rng.gaussian()};
    return out;
}

}  // namespace serdsp
