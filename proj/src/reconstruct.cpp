// SPDX-License-Identifier: Apache-2.0
#include "serdsp/reconstruct.hpp"

#include <cmath>

namespace serdsp {

namespace {

// Saturation bound for diverging CIC/GD iterates; squaring it stays finite.
constexpr double kSaturate = 1e100;

double clamp_mag(double v) {
    if (v > kSaturate) return kSaturate;
    if (v < -kSaturate) return -kSaturate;
    return v;
}

struct NormalizedBranches {
    RealVec u1, u2;
    double u1_mean = 0.0, u2_mean = 0.0;
};

// U = (R - a^2) / (4 a^2) per branch, each with its own amplitude; fixed
// front-end normalization, not counted.
NormalizedBranches normalize_branches(const PhotocurrentPair& pair, double a1, double a2,
                                      std::optional<double> m1, std::optional<double> m2) {
    const double inv1 = 1.0 / (4.0 * a1 * a1);
    const double inv2 = 1.0 / (4.0 * a2 * a2);
    NormalizedBranches nb;
    nb.u1.resize(pair.r1.size());
    nb.u2.resize(pair.r2.size());
    for (size_t k = 0; k < pair.r1.size(); ++k) {
        nb.u1[k] = (pair.r1[k] - a1 * a1) * inv1;
        nb.u2[k] = (pair.r2[k] - a2 * a2) * inv2;
    }
    nb.u1_mean = m1 ? *m1 : mean(nb.u1);
    nb.u2_mean = m2 ? *m2 : mean(nb.u2);
    return nb;
}

}  // namespace

const char* to_string(Method m) {
    switch (m) {
        case Method::DFR: return "dfr";
        case Method::CIC: return "cic";
        case Method::GD: return "gd";
        case Method::RAW: return "raw";
    }
    return "?";
}

Method method_from_string(const std::string& s) {
    if (s == "dfr") return Method::DFR;
    if (s == "cic") return Method::CIC;
    if (s == "gd") return Method::GD;
    if (s == "raw") return Method::RAW;
    throw std::invalid_argument("unknown method: " + s);
}

long mult_count(Method m, int n_iter) {
    switch (m) {
        case Method::DFR: return 10;
        case Method::CIC: return 2L * n_iter + 2;
        case Method::GD: return 6L * n_iter + 2;
        case Method::RAW: return 0;
    }
    return 0;
}

ReconstructionResult dfr(const PhotocurrentPair& pair, double a1, double a2) {
    if (a1 <= 0.0 || a2 <= 0.0) throw std::invalid_argument("dfr: amplitudes must be > 0");
    const size_t n = pair.r1.size();
    ReconstructionResult res;
    res.method = Method::DFR;
    res.i_hat.resize(n);
    res.q_hat.resize(n);

    const double ax2 = a1 * a1 + a2 * a2;
    const double k1 = a1 / (2.0 * ax2);
    const double k2 = a2 / (2.0 * ax2);
    long mults = 0;
    for (size_t k = 0; k < n; ++k) {
        const double r1 = pair.r1[k];
        const double r2 = pair.r2[k];
        double prod = r1 * r2;                 // 1
        double s = r1 + r2 - ax2;
        double delta = 4.0 * prod - s * s;     // 1 (x4 is a shift)
        double root = std::sqrt(std::abs(delta));  // 4
        double t1 = k1 * (r1 - r2);            // 1
        double t2 = k2 * root;                 // 1
        double t3 = k2 * (r1 - r2);            // 1
        double t4 = k1 * root;                 // 1
        res.i_hat[k] = -0.5 * a1 + t1 + t2;
        res.q_hat[k] = -0.5 * a2 - t3 + t4;
        mults += 10;
    }
    res.real_mults_per_sample = n ? mults / static_cast<long>(n) : 0;
    return res;
}

ReconstructionResult cic(const PhotocurrentPair& pair, double a, int n_iter,
                         const CicOptions& opts) {
    if (a <= 0.0) throw std::invalid_argument("cic: amplitude must be > 0");
    if (n_iter < 0) throw std::invalid_argument("cic: n_iter must be >= 0");
    const double a2 = opts.a2.value_or(a);
    if (a2 <= 0.0) throw std::invalid_argument("cic: amplitude must be > 0");
    NormalizedBranches nb = normalize_branches(pair, a, a2, opts.u1_mean, opts.u2_mean);
    const size_t n = nb.u1.size();

    ReconstructionResult res;
    res.method = Method::CIC;
    res.iterations = n_iter;
    res.i_hat.resize(n);
    res.q_hat.resize(n);

    // Initial guess: zero-mean branches.
    RealVec ii(n), qq(n);
    for (size_t k = 0; k < n; ++k) {
        ii[k] = nb.u1[k] - nb.u1_mean;
        qq[k] = nb.u2[k] - nb.u2_mean;
    }

    // Clip threshold on the SSBI estimate, referenced to the initial guess.
    double clip_thr = 0.0;
    bool use_clip = opts.clip.has_value();
    if (use_clip) {
        if (opts.clip->target != ClipTarget::SSBI_ESTIMATE)
            throw std::invalid_argument("cic: clip target must be SSBI_ESTIMATE");
        double ref = 0.0;
        for (size_t k = 0; k < n; ++k) ref += ii[k] * ii[k] + qq[k] * qq[k];
        ref /= static_cast<double>(n);
        clip_thr = ref * undb10(opts.clip->level_db);
    }

    long mults = 0;
    long clips = 0;
    for (size_t k = 0; k < n; ++k) {
        double i = ii[k];
        double q = qq[k];
        long m = 0;
        for (int it = 0; it < n_iter; ++it) {
            double ssbi = i * i + q * q;  // 2
            m += 2;
            if (use_clip && ssbi > clip_thr) {
                ssbi = clip_thr;
                ++clips;
            }
            i = clamp_mag(nb.u1[k] - ssbi);
            q = clamp_mag(nb.u2[k] - ssbi);
        }
        res.i_hat[k] = 2.0 * a * i;   // 1
        res.q_hat[k] = 2.0 * a2 * q;  // 1
        m += 2;
        mults += m;
    }
    res.clip_events = clips;
    res.real_mults_per_sample = n ? mults / static_cast<long>(n) : 0;
    return res;
}

ReconstructionResult gd(const PhotocurrentPair& pair, double a, int n_iter, double mu,
                        const GdOptions& opts) {
    if (a <= 0.0) throw std::invalid_argument("gd: amplitude must be > 0");
    if (mu <= 0.0) throw std::invalid_argument("gd: mu must be > 0");
    if (n_iter < 0) throw std::invalid_argument("gd: n_iter must be >= 0");
    const double a2 = opts.a2.value_or(a);
    if (a2 <= 0.0) throw std::invalid_argument("gd: amplitude must be > 0");
    NormalizedBranches nb = normalize_branches(pair, a, a2, opts.u1_mean, opts.u2_mean);
    const size_t n = nb.u1.size();

    ReconstructionResult res;
    res.method = Method::GD;
    res.iterations = n_iter;
    res.i_hat.resize(n);
    res.q_hat.resize(n);

    RealVec ii(n), qq(n);
    for (size_t k = 0; k < n; ++k) {
        ii[k] = nb.u1[k] - nb.u1_mean;
        qq[k] = nb.u2[k] - nb.u2_mean;
    }

    double thr_i = 0.0, thr_q = 0.0;
    bool use_clip = opts.clip.has_value();
    if (use_clip) {
        if (opts.clip->target != ClipTarget::IQ_BRANCHES)
            throw std::invalid_argument("gd: clip target must be IQ_BRANCHES");
        thr_i = std::sqrt(mean_square(ii) * undb10(opts.clip->level_db));
        thr_q = std::sqrt(mean_square(qq) * undb10(opts.clip->level_db));
    }

    long mults = 0;
    long clips = 0;
    for (size_t k = 0; k < n; ++k) {
        const double u1 = nb.u1[k];
        const double u2 = nb.u2[k];
        double i = ii[k];
        double q = qq[k];
        long m = 0;
        for (int it = 0; it < n_iter; ++it) {
            // X(2I+1) + 2YI = 2I(X+Y) + X, likewise for Q; six counted
            // multiplications per iteration.
            double ssbi = i * i + q * q;  // 2
            double x = ssbi + i - u1;
            double y = ssbi + q - u2;
            double t = x + y;
            double gi = 2.0 * (i * t) + x;  // 1
            double gq = 2.0 * (q * t) + y;  // 1
            i = clamp_mag(i - mu * gi);     // 1
            q = clamp_mag(q - mu * gq);     // 1
            m += 6;
            if (use_clip) {
                if (i > thr_i) { i = thr_i; ++clips; }
                else if (i < -thr_i) { i = -thr_i; ++clips; }
                if (q > thr_q) { q = thr_q; ++clips; }
                else if (q < -thr_q) { q = -thr_q; ++clips; }
            }
        }
        res.i_hat[k] = 2.0 * a * i;   // 1
        res.q_hat[k] = 2.0 * a2 * q;  // 1
        m += 2;
        mults += m;
    }
    res.clip_events = clips;
    res.real_mults_per_sample = n ? mults / static_cast<long>(n) : 0;
    return res;
}

RealVec gd_error_norm(const RealVec& i_n, const RealVec& q_n, const RealVec& i_true,
                      const RealVec& q_true) {
    if (i_n.size() != q_n.size() || i_n.size() != i_true.size() || i_n.size() != q_true.size())
        throw std::invalid_argument("gd_error_norm: length mismatch");
    RealVec out(i_n.size());
    for (size_t k = 0; k < i_n.size(); ++k) {
        double di = i_n[k] - i_true[k];
        double dq = q_n[k] - q_true[k];
        out[k] = 2.0 * std::sqrt(di * di + dq * dq);
    }
    return out;
}

ReconstructionResult raw_passthrough(const PhotocurrentPair& pair, double a1, double a2) {
    if (a1 <= 0.0 || a2 <= 0.0) throw std::invalid_argument("raw_passthrough: amplitudes must be > 0");
    const size_t n = pair.r1.size();
    ReconstructionResult res;
    res.method = Method::RAW;
    res.i_hat.resize(n);
    res.q_hat.resize(n);
    const double g1 = 1.0 / (2.0 * a1);
    const double g2 = 1.0 / (2.0 * a2);
    for (size_t k = 0; k < n; ++k) {
        res.i_hat[k] = (pair.r1[k] - a1 * a1) * g1;
        res.q_hat[k] = (pair.r2[k] - a2 * a2) * g2;
    }
    double mi = mean(res.i_hat);
    double mq = mean(res.q_hat);
    for (size_t k = 0; k < n; ++k) {
        res.i_hat[k] -= mi;
        res.q_hat[k] -= mq;
    }
    res.real_mults_per_sample = 0;
    return res;
}

}  // namespace serdsp
