#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace prwalk {

// Philox4x32-10 counter-based generator. Key = experiment seed; counter =
// (block, step lo, step hi, stream lo); the high half of the stream is folded
// into the second key word. Each step owns 2^32 blocks, so draws at a given
// (seed, stream, step) never depend on how many draws earlier steps used.
class Philox4x32 {
 public:
  using result_type = std::uint32_t;

  Philox4x32(std::uint64_t seed, std::uint64_t stream, std::uint64_t step = 0)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32) ^ static_cast<std::uint32_t>(stream >> 32)},
        stream_(stream) {
    seek(step);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  void seek(std::uint64_t step) {
    step_ = step;
    block_ = 0;
    used_ = 4;
  }
  std::uint64_t step() const noexcept { return step_; }

  result_type operator()() {
    if (used_ == 4) refill();
    return out_[used_++];
  }

  std::uint64_t next64() {
    const std::uint64_t hi = (*this)();
    return (hi << 32) | (*this)();
  }

  // Uniform on [0, n), unbiased (Lemire's multiply-and-reject).
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    if (n <= max()) {
      const auto n32 = static_cast<std::uint32_t>(n);
      std::uint64_t m = std::uint64_t{(*this)()} * n32;
      auto low = static_cast<std::uint32_t>(m);
      if (low < n32) {
        const std::uint32_t threshold = static_cast<std::uint32_t>(-n32) % n32;
        while (low < threshold) {
          m = std::uint64_t{(*this)()} * n32;
          low = static_cast<std::uint32_t>(m);
        }
      }
      return m >> 32;
    }
    const unsigned __int128 wide = n;
    unsigned __int128 m = static_cast<unsigned __int128>(next64()) * wide;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(next64()) * wide;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next64() >> 11) * 0x1.0p-53; }

  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t{M0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{M1} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
      key[0] += W0;
      key[1] += W1;
    }
    return ctr;
  }

 private:
  void refill() {
    out_ = block({block_++, static_cast<std::uint32_t>(step_), static_cast<std::uint32_t>(step_ >> 32),
                  static_cast<std::uint32_t>(stream_)},
                 key_);
    used_ = 0;
  }

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t step_ = 0;
  std::uint32_t block_ = 0;
  std::array<std::uint32_t, 4> out_{};
  int used_ = 4;
};

}  // namespace prwalk
