#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>

namespace eigenbridge {

/// Philox4x32-10 block function (Salmon et al., SC'11). Maps a 128-bit
/// counter and a 64-bit key to 128 pseudorandom bits.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key) noexcept;

/// Counter-based stream. The key is the master seed and the upper half of the
/// counter is the stream index, so distinct (seed, stream) pairs never share
/// a block and any stream can be replayed independently of the others.
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t master_seed, std::uint64_t stream_index) noexcept
        : seed_(master_seed), stream_(stream_index) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform() noexcept;

    /// Standard normal via the Marsaglia polar method (one spare cached).
    double normal() noexcept;

    [[nodiscard]] std::uint64_t master_seed() const noexcept { return seed_; }
    [[nodiscard]] std::uint64_t stream_index() const noexcept { return stream_; }
    [[nodiscard]] std::uint64_t position() const noexcept { return block_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int used_ = 4;
    std::optional<double> spare_;
};

/// Parses a seed written in decimal or 0x-prefixed hex. Returns nullopt on
/// malformed input or overflow.
std::optional<std::uint64_t> parse_seed(std::string_view text);

}  // namespace eigenbridge
