#pragma once

#include <array>
#include <cstdint>

namespace varest {

/// One step of the splitmix64 sequence; also serves as a 64-bit mixer.
inline std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// xoshiro256** (Blackman/Vigna). Small state and cheap re-seeding make
/// per-replication substreams affordable, unlike std::mt19937_64 whose
/// construction touches 2.5 KB of state.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0) noexcept {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~0ull; }

    result_type operator()() noexcept {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform draw from [0, bound), bound >= 1. Unbiased multiply-shift
    /// with rejection on the low word (Lemire's method); avoids the
    /// implementation-defined behaviour of std::uniform_int_distribution.
    std::uint64_t below(std::uint64_t bound) noexcept {
        unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = -bound % bound;
            while (low < threshold) {
                m = static_cast<unsigned __int128>((*this)()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

private:
    static std::uint64_t rotl(std::uint64_t v, int k) noexcept {
        return (v << k) | (v >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
};

/// Deterministic substream key: replication `index` of a run with a given
/// seed always sees the same generator state, independent of which thread
/// processes it or in what order.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    std::uint64_t a = index;
    const std::uint64_t h = splitmix64(a);
    std::uint64_t b = seed ^ h;
    return splitmix64(b);
}

}  // namespace varest
