#pragma once

#include <cstdint>
#include <cmath>

namespace tfpp {

inline uint64_t splitmix64(uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stable 64-bit mix for deriving per-replica stream ids from
// (experiment tag, replica index).
inline uint64_t hash_combine(uint64_t a, uint64_t b) {
    uint64_t x = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
    uint64_t s = x;
    return splitmix64(s);
}

// xoshiro256++ keyed by (seed, stream_id). Streams with distinct ids are
// independent for all practical purposes; the sequence is a pure function
// of the key, so replica results never depend on thread scheduling.
class RngStream {
public:
    RngStream(uint64_t seed, uint64_t stream_id) {
        uint64_t sm = seed ^ (stream_id * 0xda942042e4dd58b5ULL);
        for (auto& w : state_) w = splitmix64(sm);
        have_normal_ = false;
    }

    uint64_t next_u64() {
        uint64_t* s = state_;
        uint64_t result = rotl(s[0] + s[3], 23) + s[0];
        uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        return result;
    }

    // uniform in (0,1)
    double next_double() {
        return ((next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    bool next_bit() { return next_u64() >> 63; }

    // standard normal, Marsaglia polar method with one cached value
    double next_normal() {
        if (have_normal_) {
            have_normal_ = false;
            return cached_;
        }
        double u, v, s;
        do {
            u = 2.0 * next_double() - 1.0;
            v = 2.0 * next_double() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        double f = std::sqrt(-2.0 * std::log(s) / s);
        cached_ = v * f;
        have_normal_ = true;
        return u * f;
    }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t state_[4];
    double cached_ = 0.0;
    bool have_normal_;
};

} // namespace tfpp
