// SPDX-License-Identifier: Apache-2.0
#include "serdsp/waveform.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "serdsp/fft.hpp"
#include "serdsp/rng.hpp"

namespace serdsp {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

uint32_t gray_encode(uint32_t v) { return v ^ (v >> 1); }

// Square grids: ascending I then ascending Q, unit mean power, per-axis Gray
// labels. Cross 32QAM: 6x6 grid of odd levels minus the four corners.
struct ConstellationTable {
    ComplexVec points;
    std::vector<uint32_t> labels;
};

ConstellationTable build_square(int levels_per_axis) {
    ConstellationTable t;
    const int half_bits = levels_per_axis == 2 ? 1 : (levels_per_axis == 4 ? 2 : 3);
    for (int i = 0; i < levels_per_axis; ++i) {
        for (int q = 0; q < levels_per_axis; ++q) {
            double li = 2.0 * i - levels_per_axis + 1;
            double lq = 2.0 * q - levels_per_axis + 1;
            t.points.emplace_back(li, lq);
            t.labels.push_back((gray_encode(static_cast<uint32_t>(i)) << half_bits) |
                               gray_encode(static_cast<uint32_t>(q)));
        }
    }
    return t;
}

ConstellationTable build_cross32() {
    ConstellationTable t;
    for (int i = -5; i <= 5; i += 2) {
        for (int q = -5; q <= 5; q += 2) {
            if (std::abs(i) == 5 && std::abs(q) == 5) continue;
            t.points.emplace_back(static_cast<double>(i), static_cast<double>(q));
        }
    }
    for (uint32_t k = 0; k < t.points.size(); ++k) t.labels.push_back(k);
    return t;
}

ConstellationTable build(QamFormat f) {
    ConstellationTable t;
    switch (f) {
        case QamFormat::QAM4: t = build_square(2); break;
        case QamFormat::QAM16: t = build_square(4); break;
        case QamFormat::QAM32: t = build_cross32(); break;
        case QamFormat::QAM64: t = build_square(8); break;
    }
    double p = mean_power(t.points);
    double inv = 1.0 / std::sqrt(p);
    for (auto& v : t.points) v *= inv;
    return t;
}

const ConstellationTable& table(QamFormat f) {
    static const ConstellationTable q4 = build(QamFormat::QAM4);
    static const ConstellationTable q16 = build(QamFormat::QAM16);
    static const ConstellationTable q32 = build(QamFormat::QAM32);
    static const ConstellationTable q64 = build(QamFormat::QAM64);
    switch (f) {
        case QamFormat::QAM4: return q4;
        case QamFormat::QAM16: return q16;
        case QamFormat::QAM32: return q32;
        case QamFormat::QAM64: return q64;
    }
    throw std::invalid_argument("unsupported constellation format");
}

}  // namespace

const char* to_string(QamFormat f) {
    switch (f) {
        case QamFormat::QAM4: return "qam4";
        case QamFormat::QAM16: return "qam16";
        case QamFormat::QAM32: return "qam32";
        case QamFormat::QAM64: return "qam64";
    }
    return "?";
}

QamFormat qam_format_from_string(const std::string& s) {
    if (s == "qam4" || s == "4qam" || s == "qpsk") return QamFormat::QAM4;
    if (s == "qam16" || s == "16qam") return QamFormat::QAM16;
    if (s == "qam32" || s == "32qam") return QamFormat::QAM32;
    if (s == "qam64" || s == "64qam") return QamFormat::QAM64;
    throw std::invalid_argument("unsupported constellation format: " + s);
}

int bits_per_symbol(QamFormat f) {
    switch (f) {
        case QamFormat::QAM4: return 2;
        case QamFormat::QAM16: return 4;
        case QamFormat::QAM32: return 5;
        case QamFormat::QAM64: return 6;
    }
    return 0;
}

const ComplexVec& constellation(QamFormat f) { return table(f).points; }

uint32_t gray_label(QamFormat f, size_t k) { return table(f).labels.at(k); }

SymbolSequence gen_qam_symbols(QamFormat format, size_t n, uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_qam_symbols: n must be >= 1");
    const auto& pts = constellation(format);
    const unsigned bits = static_cast<unsigned>(bits_per_symbol(format));
    SymbolSequence out;
    out.format = format;
    out.seed = seed;
    out.symbols.reserve(n);
    Rng rng(seed);
    if ((1u << bits) == pts.size()) {
        for (size_t i = 0; i < n; ++i) out.symbols.push_back(pts[rng.index_pow2(bits)]);
    } else {
        throw std::logic_error("constellation size is not a power of two");
    }
    return out;
}

RealVec rrc_taps(int sps, double rolloff, int span) {
    if (sps < 2) throw std::invalid_argument("rrc_taps: sps must be >= 2");
    if (span < 8) throw std::invalid_argument("rrc_taps: span must be >= 8");
    if (rolloff < 0.0 || rolloff > 1.0) throw std::invalid_argument("rrc_taps: rolloff out of [0,1]");

    const int len = span * sps + 1;
    const int center = (len - 1) / 2;
    RealVec h(len);
    for (int k = 0; k < len; ++k) {
        double t = static_cast<double>(k - center) / sps;  // symbol periods
        double v;
        if (std::abs(t) < 1e-12) {
            v = 1.0 - rolloff + 4.0 * rolloff / kPi;
        } else if (rolloff > 0.0 && std::abs(std::abs(4.0 * rolloff * t) - 1.0) < 1e-9) {
            double x = kPi / (4.0 * rolloff);
            v = (rolloff / std::sqrt(2.0)) *
                ((1.0 + 2.0 / kPi) * std::sin(x) + (1.0 - 2.0 / kPi) * std::cos(x));
        } else {
            double denom = kPi * t * (1.0 - std::pow(4.0 * rolloff * t, 2));
            v = (std::sin(kPi * t * (1.0 - rolloff)) +
                 4.0 * rolloff * t * std::cos(kPi * t * (1.0 + rolloff))) /
                denom;
        }
        h[k] = v;
    }
    double energy = 0.0;
    for (double v : h) energy += v * v;
    double inv = 1.0 / std::sqrt(energy);
    for (double& v : h) v *= inv;
    return h;
}

Waveform rrc_shape(const SymbolSequence& symbols, int sps, double rolloff, int span,
                   double symbol_rate) {
    RealVec h = rrc_taps(sps, rolloff, span);
    const double gain = std::sqrt(static_cast<double>(sps));
    for (double& v : h) v *= gain;

    const size_t n = symbols.symbols.size() * static_cast<size_t>(sps);
    ComplexVec up(n, Complex{0.0, 0.0});
    for (size_t k = 0; k < symbols.symbols.size(); ++k) up[k * sps] = symbols.symbols[k];

    Waveform w;
    w.samples = fft::circular_filter(up, h, (h.size() - 1) / 2);
    w.symbol_rate = symbol_rate;
    w.sample_rate = symbol_rate * sps;
    return w;
}

double papr_db(const Waveform& w) {
    if (w.samples.empty()) throw std::invalid_argument("papr_db: empty waveform");
    double peak = 0.0;
    double acc = 0.0;
    for (const auto& v : w.samples) {
        double p = std::norm(v);
        peak = std::max(peak, p);
        acc += p;
    }
    double avg = acc / static_cast<double>(w.samples.size());
    if (avg <= 0.0) throw std::invalid_argument("papr_db: zero-power waveform");
    return db10(peak / avg);
}

}  // namespace serdsp
