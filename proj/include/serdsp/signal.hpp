// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace serdsp {

using Complex = std::complex<double>;
using ComplexVec = std::vector<Complex>;
using RealVec = std::vector<double>;

inline double mean(const RealVec& x) {
    if (x.empty()) throw std::invalid_argument("mean: empty vector");
    double acc = 0.0;
    for (double v : x) acc += v;
    return acc / static_cast<double>(x.size());
}

/// Mean of |x|^2 over the trace.
inline double mean_power(const ComplexVec& x) {
    if (x.empty()) throw std::invalid_argument("mean_power: empty vector");
    double acc = 0.0;
    for (const auto& v : x) acc += std::norm(v);
    return acc / static_cast<double>(x.size());
}

inline double mean_square(const RealVec& x) {
    if (x.empty()) throw std::invalid_argument("mean_square: empty vector");
    double acc = 0.0;
    for (double v : x) acc += v * v;
    return acc / static_cast<double>(x.size());
}

inline double variance(const RealVec& x) {
    double m = mean(x);
    double acc = 0.0;
    for (double v : x) acc += (v - m) * (v - m);
    return acc / static_cast<double>(x.size());
}

inline bool all_finite(const ComplexVec& x) {
    for (const auto& v : x)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

inline double db10(double lin) { return 10.0 * std::log10(lin); }
inline double undb10(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace serdsp
