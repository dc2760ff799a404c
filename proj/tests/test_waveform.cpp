// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>

#include "serdsp/fft.hpp"
#include "serdsp/waveform.hpp"

using namespace serdsp;

TEST_CASE("constellations are exactly unit power and the right size") {
    for (auto f : {QamFormat::QAM4, QamFormat::QAM16, QamFormat::QAM32, QamFormat::QAM64}) {
        const auto& pts = constellation(f);
        CHECK(pts.size() == (1u << bits_per_symbol(f)));
        CHECK(mean_power(pts) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("qam4 point set is the normalized QPSK square") {
    auto seq = gen_qam_symbols(QamFormat::QAM4, 64, 42);
    const double c = 1.0 / std::sqrt(2.0);
    for (auto s : seq.symbols) {
        CHECK(std::abs(std::abs(s.real()) - c) < 1e-15);
        CHECK(std::abs(std::abs(s.imag()) - c) < 1e-15);
    }
}

TEST_CASE("symbol draws: power, membership, determinism") {
    auto seq = gen_qam_symbols(QamFormat::QAM16, 100000, 1);
    CHECK(mean_power(seq.symbols) == doctest::Approx(1.0).epsilon(0.01));

    const auto& pts = constellation(QamFormat::QAM16);
    for (size_t k = 0; k < 200; ++k) {
        bool member = false;
        for (auto p : pts)
            if (std::abs(p - seq.symbols[k]) < 1e-12) member = true;
        CHECK(member);
    }

    auto a = gen_qam_symbols(QamFormat::QAM64, 10, 7);
    auto b = gen_qam_symbols(QamFormat::QAM64, 10, 7);
    for (size_t k = 0; k < 10; ++k) CHECK(a.symbols[k] == b.symbols[k]);

    CHECK_THROWS_AS(gen_qam_symbols(QamFormat::QAM4, 0, 1), std::invalid_argument);
}

TEST_CASE("rrc taps are even-symmetric, unit energy, and an impulse reproduces them") {
    auto h = rrc_taps(2, 0.35, 16);
    CHECK(h.size() == 33);
    double e = 0;
    for (double v : h) e += v * v;
    CHECK(e == doctest::Approx(1.0).epsilon(1e-12));
    for (size_t k = 0; k < h.size(); ++k)
        CHECK(h[k] == doctest::Approx(h[h.size() - 1 - k]).epsilon(1e-12));

    // one unit symbol in the middle of a quiet frame
    SymbolSequence seq;
    seq.format = QamFormat::QAM4;
    seq.symbols.assign(64, Complex{0.0, 0.0});
    seq.symbols[32] = Complex{1.0, 0.0};
    auto w = rrc_shape(seq, 2, 0.35, 16);
    const double g = std::sqrt(2.0);
    for (size_t k = 0; k < h.size(); ++k) {
        size_t idx = 64 + k - (h.size() - 1) / 2;
        CHECK(w.samples[idx].real() == doctest::Approx(g * h[k]).epsilon(1e-10));
    }
}

TEST_CASE("rrc rejects bad rolloff and accepts the 1% and 5% settings") {
    auto s = gen_qam_symbols(QamFormat::QAM4, 256, 3);
    CHECK_THROWS_AS(rrc_shape(s, 2, -0.1, 16), std::invalid_argument);
    CHECK_THROWS_AS(rrc_shape(s, 2, 1.5, 16), std::invalid_argument);
    CHECK_NOTHROW(rrc_shape(s, 2, 0.01, 16));
    CHECK_NOTHROW(rrc_shape(s, 2, 0.05, 16));
}

TEST_CASE("shaped waveform power equals symbol power and shaping is linear") {
    auto s = gen_qam_symbols(QamFormat::QAM64, 4096, 5);
    auto w = rrc_shape(s, 2, 0.1, 64);
    CHECK(mean_power(w.samples) == doctest::Approx(mean_power(s.symbols)).epsilon(0.01));
    CHECK(w.sample_rate == doctest::Approx(2.0 * w.symbol_rate));

    const Complex a{0.7, -1.3};
    SymbolSequence scaled = s;
    for (auto& v : scaled.symbols) v *= a;
    auto wa = rrc_shape(scaled, 2, 0.1, 64);
    for (size_t k = 0; k < 64; ++k) CHECK(std::abs(wa.samples[k] - a * w.samples[k]) < 1e-12);
}

TEST_CASE("1% rolloff confines the spectrum to +-0.505 of the baud rate") {
    // Out-of-band energy fraction of the shaped waveform, 40 dB down.
    auto s = gen_qam_symbols(QamFormat::QAM16, 1 << 13, 9);
    auto w = rrc_shape(s, 2, 0.01, 128);
    auto ps = fft::power_spectrum(w.samples);
    double in = 0, out = 0;
    for (size_t m = 0; m < ps.size(); ++m) {
        if (std::abs(fft::bin_freq(m, ps.size(), w.sample_rate)) <= 0.505 * w.symbol_rate)
            in += ps[m];
        else
            out += ps[m];
    }
    CHECK(out / (in + out) < 1e-4);
}

TEST_CASE("matched filtering recovers symbols below -40 dB EVM") {
    auto run = [](double rolloff, int span) {
        auto s = gen_qam_symbols(QamFormat::QAM64, 1 << 12, 11);
        auto w = rrc_shape(s, 2, rolloff, span);
        auto mf = rrc_taps(2, rolloff, span);
        auto y = fft::circular_filter(w.samples, mf, (mf.size() - 1) / 2);
        Complex num{0, 0};
        double den = 0;
        for (size_t k = 0; k < s.symbols.size(); ++k) {
            num += std::conj(y[2 * k]) * s.symbols[k];
            den += std::norm(y[2 * k]);
        }
        Complex g = num / den;
        double sig = 0, err = 0;
        for (size_t k = 0; k < s.symbols.size(); ++k) {
            sig += std::norm(s.symbols[k]);
            err += std::norm(s.symbols[k] - g * y[2 * k]);
        }
        return db10(err / sig);
    };
    // The -40 dB floor needs the span matched to the rolloff: the slow tails
    // at 1% rolloff want a longer filter.
    CHECK(run(0.01, 256) < -40.0);
    CHECK(run(0.05, 128) < -40.0);
    CHECK(run(0.1, 64) < -40.0);
}

TEST_CASE("papr basics") {
    Waveform w;
    w.sample_rate = 2;
    w.symbol_rate = 1;
    w.samples.assign(64, Complex{0.6, -0.8});
    CHECK(papr_db(w) == doctest::Approx(0.0).epsilon(1e-12));

    w.samples.assign(100, Complex{0.0, 0.0});
    w.samples[3] = Complex{1.0, 0.0};
    CHECK(papr_db(w) == doctest::Approx(20.0).epsilon(1e-9));

    w.samples.assign(16, Complex{0.0, 0.0});
    CHECK_THROWS_AS(papr_db(w), std::invalid_argument);
}

TEST_CASE("64qam rrc(1%) waveform papr sits in the 8..12 dB band") {
    auto s = gen_qam_symbols(QamFormat::QAM64, 100000, 7);
    auto w = rrc_shape(s, 2, 0.01, 256);
    double p = papr_db(w);
    CHECK(p > 8.0);
    CHECK(p < 12.0);
}
