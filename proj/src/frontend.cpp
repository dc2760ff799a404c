// SPDX-License-Identifier: Apache-2.0
#include "serdsp/frontend.hpp"

#include <cmath>

#include "serdsp/fft.hpp"

namespace serdsp {

namespace {

bool is_ideal(const RealVec& j) { return j.size() == 1 && j[0] == 1.0; }

RealVec brickwall(const RealVec& x, double cutoff_hz, double fs) {
    ComplexVec xc(x.size());
    for (size_t i = 0; i < x.size(); ++i) xc[i] = Complex{x[i], 0.0};
    fft::forward_inplace(xc);
    const size_t n = xc.size();
    for (size_t m = 0; m < n; ++m) {
        if (std::abs(fft::bin_freq(m, n, fs)) > cutoff_hz) xc[m] = Complex{0.0, 0.0};
    }
    fft::inverse_inplace(xc);
    RealVec y(n);
    for (size_t i = 0; i < n; ++i) y[i] = xc[i].real();
    return y;
}

}  // namespace

PhotocurrentPair detect(const Waveform& field, const FrontEndConfig& cfg) {
    if (field.samples.empty()) throw std::invalid_argument("detect: empty field");
    if (cfg.a1 <= 0.0 || cfg.a2 <= 0.0) throw std::invalid_argument("detect: LO amplitudes must be > 0");

    const size_t n = field.samples.size();
    PhotocurrentPair out;
    out.r1.resize(n);
    out.r2.resize(n);
    out.sample_rate = field.sample_rate;
    out.symbol_rate = field.symbol_rate;
    out.config_used = cfg;

    const double a1sq = cfg.a1 * cfg.a1;
    const double a2sq = cfg.a2 * cfg.a2;
    for (size_t k = 0; k < n; ++k) {
        double i = field.samples[k].real();
        double q = field.samples[k].imag();
        double ssbi = i * i + q * q;
        out.r1[k] = a1sq + ssbi + 2.0 * cfg.a1 * i;
        out.r2[k] = a2sq + ssbi + 2.0 * cfg.a2 * q;
    }

    if (!is_ideal(cfg.j1)) out.r1 = fft::circular_filter(out.r1, cfg.j1, (cfg.j1.size() - 1) / 2);
    if (!is_ideal(cfg.j2)) out.r2 = fft::circular_filter(out.r2, cfg.j2, (cfg.j2.size() - 1) / 2);

    if (cfg.bwr) return apply_bwr(out, *cfg.bwr, field.symbol_rate);
    return out;
}

PhotocurrentPair apply_bwr(const PhotocurrentPair& pair, double bwr, double symbol_rate) {
    if (bwr <= 0.0) throw std::invalid_argument("apply_bwr: bwr must be > 0");
    const double cutoff = 0.5 * bwr * symbol_rate;
    if (pair.sample_rate < bwr * symbol_rate)
        throw std::invalid_argument("apply_bwr: sample rate too low for requested cutoff");
    PhotocurrentPair out = pair;
    out.r1 = brickwall(pair.r1, cutoff, pair.sample_rate);
    out.r2 = brickwall(pair.r2, cutoff, pair.sample_rate);
    return out;
}

double lospr_of(const Waveform& field, const FrontEndConfig& cfg) {
    double p = mean_power(field.samples);
    if (p <= 0.0) throw std::invalid_argument("lospr_of: zero-power field");
    double abar_sq = 0.5 * (cfg.a1 * cfg.a1 + cfg.a2 * cfg.a2);
    return db10(abar_sq / p);
}

FrontEndConfig set_lospr(const Waveform& field, double target_db, FrontEndConfig cfg) {
    if (!std::isfinite(target_db)) throw std::invalid_argument("set_lospr: target must be finite");
    double p = mean_power(field.samples);
    double abar_sq = 0.5 * (cfg.a1 * cfg.a1 + cfg.a2 * cfg.a2);
    double g = std::sqrt(undb10(target_db) * p / abar_sq);
    cfg.a1 *= g;
    cfg.a2 *= g;
    return cfg;
}

double estimate_lo_amplitude(const RealVec& r) {
    double m = mean(r);
    double v = variance(r);
    double asq = m * m - v;
    if (asq <= 0.0) throw std::invalid_argument("estimate_lo_amplitude: trace inconsistent with model");
    return std::pow(asq, 0.25);
}

RealVec gaussian_lowpass_taps(int order, double f3db_hz, double sample_rate_hz, int n_taps) {
    if (order < 1 || n_taps < 3 || n_taps % 2 == 0)
        throw std::invalid_argument("gaussian_lowpass_taps: order >= 1 and odd n_taps >= 3 required");
    if (f3db_hz <= 0.0 || f3db_hz >= sample_rate_hz / 2.0)
        throw std::invalid_argument("gaussian_lowpass_taps: f3db must lie inside (0, fs/2)");

    // Frequency-sample the response on a fine grid, inverse-transform, and
    // keep the n_taps around zero delay.
    const size_t grid = 4096;
    ComplexVec h(grid);
    const double ln2_half = 0.5 * std::log(2.0);
    for (size_t m = 0; m < grid; ++m) {
        double f = fft::bin_freq(m, grid, sample_rate_hz);
        h[m] = Complex{std::exp(-ln2_half * std::pow(std::abs(f) / f3db_hz, 2.0 * order)), 0.0};
    }
    fft::inverse_inplace(h);
    RealVec taps(n_taps);
    const int half = (n_taps - 1) / 2;
    for (int k = -half; k <= half; ++k) taps[k + half] = h[(k + grid) % grid].real();
    double dc = 0.0;
    for (double t : taps) dc += t;
    for (double& t : taps) t /= dc;
    return taps;
}

}  // namespace serdsp
