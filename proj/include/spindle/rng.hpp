#ifndef SPINDLE_RNG_HPP
#define SPINDLE_RNG_HPP

#include <cstdint>

namespace spindle {

namespace detail {

// SplitMix64 finalizer (Steele, Lea, Flood 2014). All generator constants in
// this file are from that paper.
inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace detail

// Counter-based generator: output i is mix64(key + i * golden_gamma), with the
// key derived from (seed, stream). Identical (seed, stream) reproduces an
// identical sequence on any platform and under any worker schedule; distinct
// streams give statistically independent sequences.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream)
        : key_(detail::mix64(detail::mix64(seed + detail::kGolden) ^
                             detail::mix64(stream + 0xD1B54A32D192ED03ull))),
          counter_(0) {}

    std::uint64_t next_u64() {
        counter_ += detail::kGolden;
        return detail::mix64(key_ + counter_);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

    std::uint64_t key() const { return key_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_;
};

// Stream index for replication `rep` at sample size `n`: a fixed 64-bit mix so
// that the (seed, n, rep) -> stream mapping is collision-resistant and
// independent of execution order.
inline std::uint64_t replication_stream(std::uint64_t n, std::uint64_t rep) {
    return detail::mix64(detail::mix64(n + 0x8BB84B93962EACC9ull) ^ (rep + detail::kGolden));
}

}  // namespace spindle

#endif  // SPINDLE_RNG_HPP
