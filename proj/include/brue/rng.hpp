#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>

namespace brue {

/// Philox4x32-10 block function.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) noexcept;

/// SplitMix64 finalizer; used to combine identifiers, never as a generator.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Folds a sequence of identifiers into one stream id.
std::uint64_t derive_stream_id(std::initializer_list<std::uint64_t> parts) noexcept;

/**
 * Counter-based random stream.
 *
 * The seed is the Philox key; the stream id occupies the upper 64 counter
 * bits and the block index the lower 64. Draw k of stream (seed, id) is a
 * pure function of (seed, id, k), so streams are reproducible on every
 * platform and independent streams never share state.
 *
 * Single owner; copying forks the position.
 */
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept;

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

    std::uint64_t next_u64() noexcept;

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;

    /// Uniform integer in [0, n); n must be positive. Unbiased (Lemire).
    std::size_t uniform_index(std::size_t n) noexcept;

    bool bernoulli(double p) noexcept { return uniform() < p; }

    /// Independent child stream with the same seed.
    RngStream split(std::uint64_t child) const noexcept;

private:
    void refill() noexcept;

    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int used_ = 4; // 32-bit words consumed from buffer_
};

} // namespace brue
