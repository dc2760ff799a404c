// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include "serdsp/channel.hpp"
#include "serdsp/reconstruct.hpp"
#include "serdsp/waveform.hpp"

namespace serdsp {

struct MetricReport {
    double effective_snr_db = 0.0;
    double ber = 0.0;
    double ser = 0.0;
    double dser_empirical = 0.0;  // Pr{I+Q+A<0} on the detected field, if known
    double lospr_db = 0.0;
    Method method = Method::RAW;
    std::string sweep_name;
    double sweep_value = 0.0;
    uint64_t seed = 0;
    // Resolved run context, carried so CSV rows are self-describing.
    std::string format_name;
    double bwr = 0.0;        // NaN = unlimited
    long iterations = 0;
    double clip_db = 0.0;    // NaN = no clipping
    double osnr_db = 0.0;    // NaN = noiseless
};

struct RxChainParams {
    double sample_rate = 0.0;
    double symbol_rate = 0.0;
    ChannelConfig channel;  // compensated exactly (length negated)
    double rolloff = 0.01;
    int span = 128;
};

/// Data-aided receiver chain: inverse CD, matched RRC filter, symbol-rate
/// decimation at the known timing phase, one complex least-squares gain fit
/// against the transmitted symbols, then SNR/BER/SER.
MetricReport rx_chain(const RealVec& i_hat, const RealVec& q_hat, const RxChainParams& params,
                      const SymbolSequence& tx_symbols);

/// Nearest constellation point (hard decision).
size_t decide_index(QamFormat f, Complex y);

/// Gaussian tail probability.
double q_func(double x);

/// Q(sqrt(LOSPR)): fraction of Gaussian-field samples with I+Q+A < 0.
double theoretical_dser(double lospr_db);

/// 2 Q(sqrt(LOSPR)): terminal-error rate of the iterative canceller.
double theoretical_eser(double lospr_db);

/// Closed-form detector MSE for Gaussian fields,
/// 2(1+r) Q(sqrt(r)) - 2 sqrt(r/(2 pi)) exp(-r/2) with r the linear LOSPR.
double theoretical_dfr_mse(double lospr_db);

/// -10 log10(MSE).
double theoretical_dfr_snr(double lospr_db);

/// LOSPR + 10 log10(8/3) (flat spectrum, 75% of SSBI power in-band).
double in_band_sir_db(double lospr_db);

/// LOSPR + 10 log10(2).
double raw_sir_db(double lospr_db);

/// Measured Pr{I+Q+A < 0} over a field trace.
double empirical_dser(const Waveform& field, double a);

}  // namespace serdsp
