#pragma once

#include <array>
#include <cstdint>

namespace smallball {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers: as
/// easy as 1, 2, 3"). Pure: the same (counter, key) always gives the same block.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

/// SplitMix64 finalizer, used to derive independent master seeds (e.g. the
/// expected-norm pre-pass) from a user seed.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t tag);

// Entry roles inside one matrix sample. Each role owns a disjoint counter
// range, so diagonal draws can never alias off-diagonal draws.
namespace role {
inline constexpr std::uint32_t offdiag = 0;
inline constexpr std::uint32_t diagonal(std::uint32_t i) { return 1u + i; }
} // namespace role

struct StreamId {
    std::uint64_t master_seed = 0;
    std::uint64_t sample_index = 0;
    std::uint32_t role = 0;

    friend bool operator==(const StreamId&, const StreamId&) = default;
};

/// A counter-based random stream keyed by (master seed, sample index, role).
/// Counter words: [block, role, index_lo, index_hi]; key: the master seed.
class Stream {
  public:
    explicit Stream(StreamId id);
    Stream(std::uint64_t master_seed, std::uint64_t sample_index, std::uint32_t role)
        : Stream(StreamId{master_seed, sample_index, role}) {}

    std::uint32_t next_u32();
    std::uint64_t next_u64();
    /// Uniform on the open interval (0, 1) with 53 random bits.
    double uniform();
    /// Standard normal via Box-Muller (one variate per call).
    double normal();

    const StreamId& id() const { return id_; }
    std::uint32_t blocks_used() const { return block_; }

  private:
    void refill();

    StreamId id_;
    PhiloxKey key_;
    std::uint32_t block_ = 0;
    PhiloxCounter buffer_{};
    int pos_ = 4;
};

} // namespace smallball
