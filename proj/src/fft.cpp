// SPDX-License-Identifier: Apache-2.0
#include "serdsp/fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace serdsp::fft {

namespace {

// FFTW plan creation/destruction is not thread safe; execution is.
std::mutex g_plan_mutex;

void run_dft(ComplexVec& x, int sign) {
    if (x.empty()) throw std::invalid_argument("fft: empty input");
    auto* buf = reinterpret_cast<fftw_complex*>(x.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(g_plan_mutex);
        plan = fftw_plan_dft_1d(static_cast<int>(x.size()), buf, buf, sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(g_plan_mutex);
        fftw_destroy_plan(plan);
    }
}

}  // namespace

void forward_inplace(ComplexVec& x) { run_dft(x, FFTW_FORWARD); }

void inverse_inplace(ComplexVec& x) {
    run_dft(x, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(x.size());
    for (auto& v : x) v *= scale;
}

ComplexVec forward(const ComplexVec& x) {
    ComplexVec y = x;
    forward_inplace(y);
    return y;
}

ComplexVec inverse(const ComplexVec& x) {
    ComplexVec y = x;
    inverse_inplace(y);
    return y;
}

double bin_freq(size_t m, size_t n, double fs) {
    // Non-negative bins first; the Nyquist bin of an even-length DFT maps to -fs/2.
    double idx = (m <= (n - 1) / 2) ? static_cast<double>(m) : static_cast<double>(m) - static_cast<double>(n);
    return idx * fs / static_cast<double>(n);
}

ComplexVec circular_filter(const ComplexVec& x, const RealVec& taps, size_t center) {
    if (taps.empty()) throw std::invalid_argument("circular_filter: empty taps");
    if (taps.size() > x.size()) throw std::invalid_argument("circular_filter: taps longer than trace");
    const size_t n = x.size();
    ComplexVec h(n, Complex{0.0, 0.0});
    for (size_t k = 0; k < taps.size(); ++k) {
        size_t pos = (k + n - (center % n)) % n;
        h[pos] += taps[k];
    }
    forward_inplace(h);
    ComplexVec y = forward(x);
    for (size_t m = 0; m < n; ++m) y[m] *= h[m];
    inverse_inplace(y);
    return y;
}

RealVec circular_filter(const RealVec& x, const RealVec& taps, size_t center) {
    ComplexVec xc(x.size());
    for (size_t i = 0; i < x.size(); ++i) xc[i] = Complex{x[i], 0.0};
    ComplexVec yc = circular_filter(xc, taps, center);
    RealVec y(x.size());
    for (size_t i = 0; i < x.size(); ++i) y[i] = yc[i].real();
    return y;
}

RealVec power_spectrum(const ComplexVec& x) {
    ComplexVec y = forward(x);
    RealVec p(y.size());
    const double scale = 1.0 / static_cast<double>(y.size());
    for (size_t i = 0; i < y.size(); ++i) p[i] = std::norm(y[i]) * scale;
    return p;
}

RealVec power_spectrum(const RealVec& x) {
    ComplexVec xc(x.size());
    for (size_t i = 0; i < x.size(); ++i) xc[i] = Complex{x[i], 0.0};
    return power_spectrum(xc);
}

}  // namespace serdsp::fft
