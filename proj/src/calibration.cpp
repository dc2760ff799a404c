// SPDX-License-Identifier: Apache-2.0
#include "serdsp/calibration.hpp"

#include <algorithm>
#include <cmath>

#include "serdsp/fft.hpp"
#include "serdsp/frontend.hpp"

namespace serdsp {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// The DFR-block derivative carries a 1/sqrt(|delta|) factor that blows up on
// the rare samples with I+Q+A ~ 0. The block output uses the exact root; the
// derivative denominator is floored at a small fraction of the LO-only value
// 2a^2 so one singular sample cannot destroy the adapted taps.
constexpr double kDerivFloorFrac = 1e-3;

struct InvDeriv {
    double gii, giq, gqi, gqq;  // d(i2,q2)/d(i1,q1)
};

struct InvOut {
    double i2, q2;
    InvDeriv d;
};

InvOut eval_ic1(double i1, double q1) {
    double s = i1 * i1 + q1 * q1;
    return InvOut{i1 - s, q1 - s, {1.0 - 2.0 * i1, -2.0 * q1, -2.0 * i1, 1.0 - 2.0 * q1}};
}

InvOut eval_dfr(double i1, double q1, double a) {
    const double asq = a * a;
    const double r1 = 2.0 * a * i1 + asq;
    const double r2 = 2.0 * a * q1 + asq;
    const double u = r1 + r2 - 2.0 * asq;
    const double delta = 4.0 * r1 * r2 - u * u;
    const double root = std::sqrt(std::abs(delta));
    const double quarter_a = 1.0 / (4.0 * a);
    InvOut out;
    out.i2 = -0.5 * a + (r1 - r2) * quarter_a + root * quarter_a;
    out.q2 = -0.5 * a - (r1 - r2) * quarter_a + root * quarter_a;
    const double sgn = delta >= 0.0 ? 1.0 : -1.0;
    const double den = 4.0 * std::max(root, kDerivFloorFrac * 2.0 * asq);
    const double dd1 = (4.0 * r2 - 2.0 * u) * sgn / den;
    const double dd2 = (4.0 * r1 - 2.0 * u) * sgn / den;
    out.d = InvDeriv{0.5 + dd1, -0.5 + dd2, -0.5 + dd1, 0.5 + dd2};
    return out;
}

InvOut eval_inversion(InversionBlock block, double i1, double q1, double a) {
    return block == InversionBlock::IC1_BLOCK ? eval_ic1(i1, q1) : eval_dfr(i1, q1, a);
}

double dot_history(const RealVec& taps, const RealVec& x, size_t n) {
    double acc = 0.0;
    for (size_t k = 0; k < taps.size(); ++k) acc += taps[k] * x[n - k];
    return acc;
}

void check_state(const CalibrationState& st) {
    const size_t L = st.h11.size();
    if (L < 1 || st.h12.size() != L || st.h21.size() != L || st.h22.size() != L)
        throw std::invalid_argument("calibration: the four filters must share a length L >= 1");
}

// Reference power |s|^2 circularly aligned to r1 and delayed by the chain's
// nominal group delay of L-1 samples (two centered filters).
RealVec aligned_reference(const RealVec& r1, const Waveform& training, size_t L) {
    const size_t n = r1.size();
    if (training.samples.size() != n)
        throw std::invalid_argument("calibration: training and photocurrent lengths differ");
    RealVec p(n);
    for (size_t k = 0; k < n; ++k) p[k] = std::norm(training.samples[k]);

    // Coarse alignment: circular cross-correlation of the mean-removed
    // traces, searching +/- 1024 samples.
    double pm = mean(p), rm = mean(r1);
    ComplexVec pa(n), ra(n);
    for (size_t k = 0; k < n; ++k) {
        pa[k] = Complex{p[k] - pm, 0.0};
        ra[k] = Complex{r1[k] - rm, 0.0};
    }
    fft::forward_inplace(pa);
    fft::forward_inplace(ra);
    for (size_t k = 0; k < n; ++k) ra[k] *= std::conj(pa[k]);
    fft::inverse_inplace(ra);
    long best_lag = 0;
    double best = -1.0;
    const long max_lag = std::min<long>(1024, static_cast<long>(n) / 2);
    for (long lag = -max_lag; lag <= max_lag; ++lag) {
        double c = ra[(lag + static_cast<long>(n)) % n].real();
        if (c > best) {
            best = c;
            best_lag = lag;
        }
    }

    const long shift = best_lag + static_cast<long>(L) - 1;
    RealVec out(n);
    for (size_t k = 0; k < n; ++k) {
        long idx = (static_cast<long>(k) - shift) % static_cast<long>(n);
        if (idx < 0) idx += static_cast<long>(n);
        out[k] = p[static_cast<size_t>(idx)];
    }
    return out;
}

}  // namespace

const char* to_string(InversionBlock b) {
    return b == InversionBlock::DFR_BLOCK ? "dfr" : "ic1";
}

InversionBlock inversion_from_string(const std::string& s) {
    if (s == "dfr") return InversionBlock::DFR_BLOCK;
    if (s == "ic1") return InversionBlock::IC1_BLOCK;
    throw std::invalid_argument("unknown inversion block: " + s);
}

CalibrationState make_identity_state(size_t L, double mu1, double mu2, double a,
                                     InversionBlock inversion) {
    if (L < 1 || L % 2 == 0) throw std::invalid_argument("make_identity_state: L must be odd and >= 1");
    CalibrationState st;
    st.h11.assign(L, 0.0);
    st.h12.assign(L, 0.0);
    st.h21.assign(L, 0.0);
    st.h22.assign(L, 0.0);
    st.h11[(L - 1) / 2] = 1.0;
    st.h12[(L - 1) / 2] = 1.0;
    st.h21[(L - 1) / 2] = 1.0;
    st.h22[(L - 1) / 2] = 1.0;
    st.mu1 = mu1;
    st.mu2 = mu2;
    st.a = a;
    st.inversion = inversion;
    return st;
}

std::pair<RealVec, RealVec> invert_ic1(const RealVec& i1, const RealVec& q1) {
    if (i1.size() != q1.size()) throw std::invalid_argument("invert_ic1: length mismatch");
    RealVec i2(i1.size()), q2(q1.size());
    for (size_t k = 0; k < i1.size(); ++k) {
        auto o = eval_ic1(i1[k], q1[k]);
        i2[k] = o.i2;
        q2[k] = o.q2;
    }
    return {std::move(i2), std::move(q2)};
}

std::pair<RealVec, RealVec> invert_dfr_block(const RealVec& i1, const RealVec& q1, double a) {
    if (a <= 0.0) throw std::invalid_argument("invert_dfr_block: amplitude must be > 0");
    if (i1.size() != q1.size()) throw std::invalid_argument("invert_dfr_block: length mismatch");
    RealVec i2(i1.size()), q2(q1.size());
    for (size_t k = 0; k < i1.size(); ++k) {
        auto o = eval_dfr(i1[k], q1[k], a);
        i2[k] = o.i2;
        q2[k] = o.q2;
    }
    return {std::move(i2), std::move(q2)};
}

BlockJacobian inversion_jacobian(InversionBlock block, double i1, double q1, double a) {
    auto o = eval_inversion(block, i1, q1, a);
    return BlockJacobian{o.d.gii, o.d.giq, o.d.gqi, o.d.gqq};
}

RealVec normalize_photocurrent(const RealVec& r, double a) {
    if (a <= 0.0) throw std::invalid_argument("normalize_photocurrent: amplitude must be > 0");
    RealVec out(r.size());
    const double asq = a * a;
    const double inv = 1.0 / (2.0 * a);
    for (size_t k = 0; k < r.size(); ++k) out[k] = (r[k] - asq) * inv;
    return out;
}

CalibrationState calibrate(const RealVec& r1, const RealVec& r2, const Waveform& training,
                           CalibrationState st) {
    check_state(st);
    if (r1.size() != r2.size()) throw std::invalid_argument("calibrate: photocurrent length mismatch");
    const size_t L = st.length();
    const size_t n = r1.size();
    if (n < 4 * L) throw std::invalid_argument("calibrate: trace too short for filter length");

    double a = st.a;
    if (a <= 0.0) a = 0.5 * (estimate_lo_amplitude(r1) + estimate_lo_amplitude(r2));
    st.a = a;

    const RealVec rb1 = normalize_photocurrent(r1, a);
    const RealVec rb2 = normalize_photocurrent(r2, a);
    const RealVec ref = aligned_reference(r1, training, L);

    // Per-sample history of the inversion outputs and their derivatives,
    // recorded as each sample was processed.
    RealVec i2h(n, 0.0), q2h(n, 0.0);
    std::vector<InvDeriv> dh(n, InvDeriv{0, 0, 0, 0});

    RealVec phi1(L), phi2(L), nh12(L), nh22(L);
    st.cost_trace.reserve(st.cost_trace.size() + n);

    // Step-size back-off bookkeeping over consecutive 4096-sample windows.
    const size_t kWin = 4096;
    double win_acc = 0.0, prev_win = -1.0;
    size_t win_cnt = 0;

    const size_t start = 2 * L;
    for (size_t m = 0; m < start && m < n; ++m) {
        // Warm-up region: fill inversion history without adapting.
        double i1 = m >= L ? dot_history(st.h11, rb1, m) : 0.0;
        double q1 = m >= L ? dot_history(st.h21, rb2, m) : 0.0;
        auto inv = eval_inversion(st.inversion, i1, q1, a);
        i2h[m] = inv.i2;
        q2h[m] = inv.q2;
        dh[m] = inv.d;
    }

    for (size_t m = start; m < n; ++m) {
        double i1 = dot_history(st.h11, rb1, m);
        double q1 = dot_history(st.h21, rb2, m);
        auto inv = eval_inversion(st.inversion, i1, q1, a);
        i2h[m] = inv.i2;
        q2h[m] = inv.q2;
        dh[m] = inv.d;

        double i3 = dot_history(st.h12, i2h, m);
        double q3 = dot_history(st.h22, q2h, m);
        double d = i3 * i3 + q3 * q3;
        double e = ref[m] - d;
        if (!std::isfinite(e))
            throw std::runtime_error("calibrate: cost diverged at sample " + std::to_string(m));
        st.cost_trace.push_back(e * e);

        // All updates from the pre-update taps.
        for (size_t k = 0; k < L; ++k) {
            nh12[k] = st.h12[k] + st.mu2 * e * i3 * i2h[m - k];
            nh22[k] = st.h22[k] + st.mu2 * e * q3 * q2h[m - k];
            const InvDeriv& g = dh[m - k];
            phi1[k] = i3 * st.h12[k] * g.gii + q3 * st.h22[k] * g.gqi;
            phi2[k] = i3 * st.h12[k] * g.giq + q3 * st.h22[k] * g.gqq;
        }
        for (size_t j = 0; j < L; ++j) {
            double acc1 = 0.0, acc2 = 0.0;
            for (size_t k = 0; k < L; ++k) {
                acc1 += phi1[k] * rb1[m - k - j];
                acc2 += phi2[k] * rb2[m - k - j];
            }
            st.h11[j] += st.mu1 * e * acc1;
            st.h21[j] += st.mu1 * e * acc2;
        }
        st.h12 = nh12;
        st.h22 = nh22;

        win_acc += e * e;
        if (++win_cnt == kWin) {
            double w = win_acc / static_cast<double>(kWin);
            // Back off on a real cost increase; steady-state jitter of a few
            // percent between windows is not one.
            if (prev_win >= 0.0 && w > 1.10 * prev_win) {
                st.mu1 *= 0.5;
                st.mu2 *= 0.5;
            }
            prev_win = w;
            win_acc = 0.0;
            win_cnt = 0;
        }
    }
    return st;
}

ResponseEstimate extract_responses(const CalibrationState& st, const RealVec& grid_hz,
                                   double sample_rate_hz) {
    check_state(st);
    const size_t L = st.length();
    const double c = static_cast<double>(L - 1) / 2.0;

    auto estimate = [&](const RealVec& taps) {
        ComplexVec h0(grid_hz.size());
        double peak = 0.0;
        for (size_t i = 0; i < grid_hz.size(); ++i) {
            double w = 2.0 * kPi * grid_hz[i] / sample_rate_hz;
            Complex acc{0.0, 0.0};
            for (size_t k = 0; k < L; ++k) {
                double ph = -w * (static_cast<double>(k) - c);  // delay removed
                acc += taps[k] * Complex{std::cos(ph), std::sin(ph)};
            }
            h0[i] = acc;
            peak = std::max(peak, std::abs(acc));
        }
        Complex dc{0.0, 0.0};
        for (size_t k = 0; k < L; ++k) dc += taps[k];
        if (peak <= 0.0 || std::abs(dc) < 1e-9 * peak)
            throw std::runtime_error("extract_responses: filter has no DC response to normalize by");
        ComplexVec est(grid_hz.size());
        for (size_t i = 0; i < grid_hz.size(); ++i) {
            if (std::abs(h0[i]) < 1e-9 * peak)
                throw std::runtime_error("extract_responses: filter response vanishes on the grid");
            est[i] = dc / h0[i];
        }
        return est;
    };

    ResponseEstimate out;
    out.freq_hz = grid_hz;
    out.rx1 = estimate(st.h11);
    out.rx2 = estimate(st.h21);
    out.tx1 = estimate(st.h12);
    out.tx2 = estimate(st.h22);
    return out;
}

RealVec windowed_cost_db(const RealVec& cost_trace, const Waveform& training, size_t window) {
    if (window < 1 || cost_trace.size() < window)
        throw std::invalid_argument("windowed_cost_db: trace shorter than window");
    double ref = 0.0;
    for (const auto& v : training.samples) ref += std::norm(v) * std::norm(v);
    ref /= static_cast<double>(training.samples.size());

    RealVec out;
    out.reserve(cost_trace.size() / window);
    double acc = 0.0;
    size_t cnt = 0;
    for (double v : cost_trace) {
        acc += v;
        if (++cnt == window) {
            out.push_back(db10(acc / static_cast<double>(window) / ref));
            acc = 0.0;
            cnt = 0;
        }
    }
    return out;
}

std::pair<double, double> chain_output_at(const CalibrationState& st, const RealVec& rb1,
                                          const RealVec& rb2, const RealVec& ref_power,
                                          size_t n) {
    check_state(st);
    const size_t L = st.length();
    if (n < 2 * L || n >= rb1.size())
        throw std::invalid_argument("chain_output_at: sample index out of range");
    RealVec i2(L), q2(L);
    for (size_t k = 0; k < L; ++k) {
        size_t m = n - k;
        double i1 = dot_history(st.h11, rb1, m);
        double q1 = dot_history(st.h21, rb2, m);
        auto inv = eval_inversion(st.inversion, i1, q1, st.a);
        i2[k] = inv.i2;
        q2[k] = inv.q2;
    }
    double i3 = 0.0, q3 = 0.0;
    for (size_t k = 0; k < L; ++k) {
        i3 += st.h12[k] * i2[k];
        q3 += st.h22[k] * q2[k];
    }
    double d = i3 * i3 + q3 * q3;
    return {d, ref_power[n] - d};
}

TapGradients cost_gradients_at(const CalibrationState& st, const RealVec& rb1,
                               const RealVec& rb2, const RealVec& ref_power, size_t n) {
    check_state(st);
    const size_t L = st.length();
    if (n < 2 * L || n >= rb1.size())
        throw std::invalid_argument("cost_gradients_at: sample index out of range");

    RealVec i2(L), q2(L);
    std::vector<InvDeriv> g(L);
    for (size_t k = 0; k < L; ++k) {
        size_t m = n - k;
        double i1 = dot_history(st.h11, rb1, m);
        double q1 = dot_history(st.h21, rb2, m);
        auto inv = eval_inversion(st.inversion, i1, q1, st.a);
        i2[k] = inv.i2;
        q2[k] = inv.q2;
        g[k] = inv.d;
    }
    double i3 = 0.0, q3 = 0.0;
    for (size_t k = 0; k < L; ++k) {
        i3 += st.h12[k] * i2[k];
        q3 += st.h22[k] * q2[k];
    }
    double d = i3 * i3 + q3 * q3;
    double e = ref_power[n] - d;

    // d(e^2)/dtap = -2 e * dd/dtap.
    TapGradients out;
    out.h11.assign(L, 0.0);
    out.h12.assign(L, 0.0);
    out.h21.assign(L, 0.0);
    out.h22.assign(L, 0.0);
    for (size_t j = 0; j < L; ++j) {
        out.h12[j] = -2.0 * e * 2.0 * i3 * i2[j];
        out.h22[j] = -2.0 * e * 2.0 * q3 * q2[j];
        double acc1 = 0.0, acc2 = 0.0;
        for (size_t k = 0; k < L; ++k) {
            acc1 += (i3 * st.h12[k] * g[k].gii + q3 * st.h22[k] * g[k].gqi) * rb1[n - k - j];
            acc2 += (i3 * st.h12[k] * g[k].giq + q3 * st.h22[k] * g[k].gqq) * rb2[n - k - j];
        }
        out.h11[j] = -2.0 * e * 2.0 * acc1;
        out.h21[j] = -2.0 * e * 2.0 * acc2;
    }
    return out;
}

}  // namespace serdsp
