#pragma once
#include <cstdint>
#include <string_view>

namespace deckopt {

// splitmix64 step. Every source of randomness in the library goes through
// this so that results are identical across platforms and standard
// libraries (std::uniform_int_distribution is not portable).
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic 64-bit PRNG (splitmix64). Cheap to copy and fork.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64(state_); }

    /// Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t below(std::uint64_t bound) {
        // Multiply-shift map; bias is ~bound/2^64, far below anything
        // our statistical tests can resolve.
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
    }

    /// Uniform double in [0, 1).
    double unit_real() { return (next_u64() >> 11) * 0x1.0p-53; }

    /// True with probability p.
    bool chance(double p) { return unit_real() < p; }

    std::uint64_t state() const { return state_; }
    void set_state(std::uint64_t s) { state_ = s; }

private:
    std::uint64_t state_;
};

/// Derive an independent child seed from a root seed and a salt.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t salt) {
    std::uint64_t s = root;
    std::uint64_t a = splitmix64(s);
    s ^= salt * 0x2545f4914f6cdd1dULL;
    std::uint64_t b = splitmix64(s);
    return a ^ (b + 0x9e3779b97f4a7c15ULL);
}

/// FNV-1a hash of a label, for salting seed streams by context name.
inline std::uint64_t hash_label(std::string_view label) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : label) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t derive_seed(std::uint64_t root, std::string_view label,
                                 std::uint64_t salt = 0) {
    return derive_seed(root, hash_label(label) ^ salt);
}

} // namespace deckopt
