// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include "serdsp/signal.hpp"

namespace serdsp {

enum class QamFormat { QAM4, QAM16, QAM32, QAM64 };

const char* to_string(QamFormat f);
QamFormat qam_format_from_string(const std::string& s);
int bits_per_symbol(QamFormat f);

/// Constellation point set, normalized to exact unit mean power.
/// Point order is fixed: ascending I, then ascending Q; the k-th point
/// carries the bit label gray_label(f, k).
const ComplexVec& constellation(QamFormat f);

/// Bit label of constellation point index k. Square formats use per-axis
/// Gray labels; QAM32 (cross) uses the point index itself, documented as a
/// convention since no per-axis Gray code exists for the cross shape.
uint32_t gray_label(QamFormat f, size_t k);

struct SymbolSequence {
    ComplexVec symbols;
    QamFormat format = QamFormat::QAM4;
    uint64_t seed = 0;
};

struct Waveform {
    ComplexVec samples;
    double sample_rate = 0.0;  // Hz
    double symbol_rate = 0.0;  // baud
    double samples_per_symbol() const { return sample_rate / symbol_rate; }
};

/// n i.i.d. uniform symbols from the normalized constellation.
SymbolSequence gen_qam_symbols(QamFormat format, size_t n, uint64_t seed);

/// Root-raised-cosine FIR of odd length span*sps+1, unit energy.
RealVec rrc_taps(int sps, double rolloff, int span);

/// Upsample by sps and pulse-shape. The sqrt(sps) gain keeps the output
/// average power equal to the symbol power (up to filter truncation).
Waveform rrc_shape(const SymbolSequence& symbols, int sps, double rolloff, int span,
                   double symbol_rate = 100e9);

/// 10*log10(peak instantaneous power / mean power).
double papr_db(const Waveform& w);

}  // namespace serdsp
