#include "jumpsplit/rng.hpp"

#include <cmath>
#include <cstring>

#include "jumpsplit/errors.hpp"

namespace jumpsplit {

namespace {

// Philox 4x32 round constants from the reference implementation.
constexpr std::uint32_t PHILOX_M0 = 0xD2511F53u;
constexpr std::uint32_t PHILOX_M1 = 0xCD9E8D57u;
constexpr std::uint32_t PHILOX_W0 = 0x9E3779B9u;
constexpr std::uint32_t PHILOX_W1 = 0xBB67AE85u;

inline void philox_round(std::uint32_t c[4], const std::uint32_t k[2]) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(PHILOX_M0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(PHILOX_M1) * c[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    const std::uint32_t out0 = hi1 ^ c[1] ^ k[0];
    const std::uint32_t out1 = lo1;
    const std::uint32_t out2 = hi0 ^ c[3] ^ k[1];
    const std::uint32_t out3 = lo0;
    c[0] = out0;
    c[1] = out1;
    c[2] = out2;
    c[3] = out3;
}

} // namespace

PhiloxBlock philox4x32_10(const std::uint32_t counter[4], const std::uint32_t key[2]) {
    std::uint32_t c[4] = {counter[0], counter[1], counter[2], counter[3]};
    std::uint32_t k[2] = {key[0], key[1]};
    philox_round(c, k); // round 1 with the unbumped key
    for (int r = 1; r < 10; ++r) {
        k[0] += PHILOX_W0;
        k[1] += PHILOX_W1;
        philox_round(c, k);
    }
    PhiloxBlock out;
    std::memcpy(out.v, c, sizeof out.v);
    return out;
}

RngStream::RngStream(std::uint64_t master_seed, Lane lane)
    : master_seed_(master_seed), lane_(lane) {
    key_[0] = static_cast<std::uint32_t>(master_seed);
    key_[1] = static_cast<std::uint32_t>(master_seed >> 32);
}

void RngStream::refill() {
    const std::uint32_t counter[4] = {block_, lane_.purpose, lane_.index, lane_.step};
    const PhiloxBlock b = philox4x32_10(counter, key_);
    std::memcpy(buf_, b.v, sizeof buf_);
    ++block_;
    buf_pos_ = 0;
}

std::uint64_t RngStream::next_u64() {
    if (buf_pos_ > 2) refill();
    const std::uint64_t lo = buf_[buf_pos_];
    const std::uint64_t hi = buf_[buf_pos_ + 1];
    buf_pos_ += 2;
    return lo | (hi << 32);
}

double RngStream::next_uniform() {
    // 53-bit mantissa, shifted into the open interval (0,1).
    const std::uint64_t bits = next_u64() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double RngStream::next_normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    // Basic Box-Muller: fixed consumption of two uniforms per pair keeps the
    // draw count (and therefore the stream state) easy to reason about.
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    cached_normal_ = r * std::sin(a);
    has_cached_normal_ = true;
    return r * std::cos(a);
}

void RngStream::fill_normal(double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = next_normal();
}

std::vector<double> RngStream::sample_normal(std::size_t n) {
    std::vector<double> v(n);
    fill_normal(v.data(), n);
    return v;
}

long long RngStream::sample_poisson(double rate) {
    if (!(rate >= 0.0) || !std::isfinite(rate))
        throw ParameterError("sample_poisson: rate must be finite and >= 0");
    if (rate == 0.0) return 0;
    if (rate <= 30.0) {
        // Knuth's product-of-uniforms method.
        const double l = std::exp(-rate);
        long long k = 0;
        double p = next_uniform();
        while (p > l) {
            ++k;
            p *= next_uniform();
        }
        return k;
    }
    // Hoermann's PTRS transformed-rejection sampler; exact for rate >= ~10.
    const double mu = rate;
    const double b = 0.931 + 2.53 * std::sqrt(mu);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mu = std::log(mu);
    for (;;) {
        const double u = next_uniform() - 0.5;
        const double v = next_uniform();
        const double us = 0.5 - std::fabs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + mu + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<long long>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        const double k = kf;
        const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
        const double rhs = k * log_mu - mu - std::lgamma(k + 1.0);
        if (lhs <= rhs) return static_cast<long long>(kf);
    }
}

double RngStream::sample_gamma(double shape, double rate) {
    if (!(shape > 0.0) || !(rate > 0.0))
        throw ParameterError("sample_gamma: shape and rate must be > 0");
    // Marsaglia & Tsang (2000) squeeze method; the shape<1 case is boosted
    // through shape+1 with the standard u^{1/shape} correction.
    double boost = 1.0;
    double a = shape;
    if (a < 1.0) {
        boost = std::pow(next_uniform(), 1.0 / a);
        a += 1.0;
    }
    const double d = a - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = next_normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = next_uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return boost * d * v / rate;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return boost * d * v / rate;
    }
}

void RngStream::fill_uniform_sphere(double* out, std::size_t d) {
    if (d == 0) throw ParameterError("sample_uniform_sphere: d must be >= 1");
    for (;;) {
        double norm2 = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            out[i] = next_normal();
            norm2 += out[i] * out[i];
        }
        if (norm2 > 1e-300) {
            const double inv = 1.0 / std::sqrt(norm2);
            for (std::size_t i = 0; i < d; ++i) out[i] *= inv;
            return;
        }
        // vanishingly unlikely; redraw
    }
}

std::vector<double> RngStream::sample_uniform_sphere(std::size_t d) {
    std::vector<double> v(d);
    fill_uniform_sphere(v.data(), d);
    return v;
}

std::vector<double> RngStream::sample_uniform_cube(std::size_t d) {
    std::vector<double> v(d);
    for (std::size_t i = 0; i < d; ++i) v[i] = next_uniform();
    return v;
}

std::uint64_t derive_seed(std::uint64_t master_seed, Lane lane) {
    return RngStream(master_seed, lane).next_u64();
}

} // namespace jumpsplit
