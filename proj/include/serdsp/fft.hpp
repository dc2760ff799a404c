// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "serdsp/signal.hpp"

namespace serdsp::fft {

/// In-place DFT, unnormalized (FFTW convention).
void forward_inplace(ComplexVec& x);

/// In-place inverse DFT, normalized by 1/N so inverse(forward(x)) == x.
void inverse_inplace(ComplexVec& x);

ComplexVec forward(const ComplexVec& x);
ComplexVec inverse(const ComplexVec& x);

/// Frequency of bin m for an N-point DFT at sample rate fs, in natural DFT
/// order (non-negative bins first, then negative).
double bin_freq(size_t m, size_t n, double fs);

/// Circular convolution of x with a FIR whose tap `center` sits at zero
/// delay. Symmetric taps with center = (L-1)/2 give a zero-phase filter.
ComplexVec circular_filter(const ComplexVec& x, const RealVec& taps, size_t center);
RealVec circular_filter(const RealVec& x, const RealVec& taps, size_t center);

/// Power spectrum |X(f)|^2 / N (periodogram, natural bin order).
RealVec power_spectrum(const ComplexVec& x);
RealVec power_spectrum(const RealVec& x);

}  // namespace serdsp::fft
