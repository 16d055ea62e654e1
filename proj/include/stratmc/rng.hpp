#pragma once

#include <cmath>
#include <cstdint>

namespace stratmc {

// SplitMix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix_bits(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t mix64(std::uint64_t z) {
  return mix_bits(z + 0x9e3779b97f4a7c15ULL);
}

// Folds one word into a stream key (hash_combine style with a strong mixer).
constexpr std::uint64_t derive_stream(std::uint64_t key, std::uint64_t word) {
  return mix64(key ^ (word + 0x9e3779b97f4a7c15ULL + (key << 6) + (key >> 2)));
}

constexpr double unit_from_bits(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Counter-based stream for one draw of one replicate. Values are addressed
// by slot index, so the consumption pattern is explicit and results do not
// depend on evaluation order or thread scheduling.
class DrawStream {
 public:
  DrawStream(std::uint64_t seed, std::uint64_t replicate, std::uint64_t draw)
      : key_(derive_stream(derive_stream(mix64(seed), replicate), draw)) {}

  std::uint64_t bits(unsigned slot) const { return mix64(key_ ^ (0x632be59bd9b4e019ULL * (slot + 1))); }

  // Uniform in [0, 1).
  double unit(unsigned slot) const { return unit_from_bits(bits(slot)); }

  // Uniform in (0, 1]; safe as a log argument.
  double unit_open(unsigned slot) const {
    return static_cast<double>((bits(slot) >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; consumes slots slot and slot+1.
  double gaussian(unsigned slot) const {
    const double u1 = unit_open(slot);
    const double u2 = unit(slot + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

 private:
  std::uint64_t key_;
};

// Sequential generator for instance construction (not for estimator draws).
class SequentialRng {
 public:
  explicit SequentialRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix_bits(state_);
  }

  double unit() { return unit_from_bits(next()); }

  // Inclusive bounds.
  int uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const auto wide = static_cast<unsigned __int128>(next()) * span;
    return lo + static_cast<int>(static_cast<std::uint64_t>(wide >> 64));
  }

  bool coin() { return (next() & 1u) != 0; }

  SequentialRng fork(std::uint64_t tag) { return SequentialRng(derive_stream(next(), tag)); }

 private:
  std::uint64_t state_;
};

}  // namespace stratmc
