#pragma once

// Counter-based splittable random streams (the SplitMix64 / SplittableRandom
// construction of Steele, Lea and Flood 2014).
//
// A stream is identified by (master_seed, stream_id); both are hashed into a
// start value and an odd increment ("gamma"). Output k of a stream is
// mix64(start + (k + 1) * gamma), so every output is a pure function of
// (seed, id, counter) and independent of how other streams are consumed.

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include <boost/random/normal_distribution.hpp>

namespace interface_lab {

namespace detail {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

/// Stafford's variant 13 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Odd increment with enough bit transitions to avoid weak gammas.
constexpr std::uint64_t mix_gamma(std::uint64_t z) noexcept {
    z = (z ^ (z >> 33)) * 0xFF51AFD7ED558CCDull;
    z = (z ^ (z >> 33)) * 0xC4CEB9FE1A85EC53ull;
    z = (z ^ (z >> 33)) | 1ull;
    return std::popcount(z ^ (z >> 1)) < 24 ? z ^ 0xAAAAAAAAAAAAAAAAull : z;
}

}  // namespace detail

class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t master_seed, std::uint64_t stream_id) noexcept
        : master_seed_(master_seed),
          stream_id_(stream_id),
          start_(detail::mix64(master_seed + detail::mix64(stream_id + detail::kGoldenGamma))),
          gamma_(detail::mix_gamma(detail::mix64(master_seed ^ 0x5851F42D4C957F2Dull) + stream_id * detail::kGoldenGamma)) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    std::uint64_t master_seed() const noexcept { return master_seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }
    /// Number of 64-bit outputs consumed so far.
    std::uint64_t counter() const noexcept { return counter_; }

    result_type operator()() noexcept { return detail::mix64(start_ + ++counter_ * gamma_); }

    /// Uniform on (0, 1): 53 random bits, offset by half an ulp so 0 and 1 never occur.
    double uniform() noexcept {
        return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal (Boost's ziggurat sampler driven by this stream).
    double normal() noexcept { return boost::random::normal_distribution<double>{}(*this); }

private:
    std::uint64_t master_seed_;
    std::uint64_t stream_id_;
    std::uint64_t start_;
    std::uint64_t gamma_;
    std::uint64_t counter_ = 0;
};

}  // namespace interface_lab
