#pragma once

#include <cmath>
#include <cstdint>

namespace bary {

/// Counter-based random stream. A stream is fully determined by
/// (seed, stream index); draw i is a hash of the stream key and a counter,
/// so there is no mutable generator state to share between workers and any
/// (seed, index) pair can be opened anywhere and replayed exactly.
///
/// The mixing function is the splitmix64 finalizer, keyed twice to decorrelate
/// the seed and the stream index.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream)
        : key_(mix(mix(seed + 0x9e3779b97f4a7c15ULL) ^ mix(stream + 0xbf58476d1ce4e5b9ULL))) {}

    std::uint64_t next_u64() {
        counter_ += 0x9e3779b97f4a7c15ULL;
        return mix(key_ ^ counter_);
    }

    /// Uniform on [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform on (0, 1]; safe to feed into log().
    double next_open_double() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; the second value of each pair is cached.
    double next_gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = next_open_double();
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    /// Uniform on [lo, hi).
    double next_uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    /// Uniform integer in [0, m).
    std::uint64_t next_below(std::uint64_t m) {
        return next_u64() % m;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace bary
