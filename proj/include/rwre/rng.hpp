#pragma once

// Deterministic counter-based random streams.
//
// Every random draw in this project flows from one root seed through
// domain-separated substreams, so that (a) reruns are bit-identical, (b) work
// units (sites, replicas, sweep cells) can be evaluated in any order or on any
// thread without changing results, and (c) environments of different lengths
// generated from the same seed agree on their common prefix (one substream per
// site).
//
// The generator is the splitmix64 construction: output i of stream `key` is
// mix64(key + (i+1) * kGoldenGamma). State is two 64-bit words, trivially
// copyable, O(1) to seek.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace rwre {

inline constexpr uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

// Finalizing 64-bit mixer (splitmix64 / Stafford variant 13). Bijective,
// avalanches all input bits.
inline uint64_t mix64(uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

class CounterStream {
 public:
  CounterStream() : key_(0) {}
  explicit CounterStream(uint64_t key) : key_(key) {}
  // Resume an existing stream from a recorded (key, counter) position.
  CounterStream(uint64_t key, uint64_t counter) : key_(key), ctr_(counter) {}

  uint64_t next_u64() { return mix64(key_ + (++ctr_) * kGoldenGamma); }

  // Uniform on the OPEN interval (0,1): top 53 bits offset by half an ulp, so
  // neither endpoint can occur. Heavy-tail inversions U^{-1/alpha} therefore
  // always stay finite.
  double next_unit_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Four consecutive draws in one call, identical in sequence to four
  // next_unit_open() calls. The four mixes carry no data dependency on each
  // other, so a hot caller gets instruction-level parallelism the one-at-a-
  // time interface denies it.
  void next_unit_open4(double out[4]) {
    for (uint64_t i = 0; i < 4; ++i) {
      const uint64_t v = mix64(key_ + (ctr_ + 1 + i) * kGoldenGamma);
      out[i] = (static_cast<double>(v >> 11) + 0.5) * 0x1.0p-53;
    }
    ctr_ += 4;
  }

  bool next_coin() { return (next_u64() >> 63) != 0; }

  // Standard normal via Box-Muller; the second deviate of each pair is cached.
  double next_gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = next_unit_open();
    const double u2 = next_unit_open();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  uint64_t key() const { return key_; }
  uint64_t counter() const { return ctr_; }

 private:
  uint64_t key_;
  uint64_t ctr_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Purpose tags keeping unrelated consumers of the same root seed independent.
enum class StreamDomain : uint64_t {
  kEnvSite = 0x01,      // one substream per environment site
  kWalkReplica = 0x02,  // one substream per trajectory replica
  kMonteCarlo = 0x03,   // hitting-time Monte Carlo trials
  kSweepUnit = 0x04,    // per (cell, replica) environment seeds in sweeps
  kLimitLaw = 0x05,     // limit-law suite replicas
  kExperiment = 0x06,   // acceptance experiments
};

// Child stream (seed, domain, index) -> independent CounterStream. Two mix
// rounds with distinct injections separate all three coordinates.
inline CounterStream derive_stream(uint64_t seed, StreamDomain domain,
                                   uint64_t index) {
  const uint64_t base =
      mix64(seed + kGoldenGamma * static_cast<uint64_t>(domain));
  return CounterStream(mix64(base ^ (index + kGoldenGamma)));
}

// Derived 64-bit seed (for units that need a seed, not a stream).
inline uint64_t derive_seed(uint64_t seed, StreamDomain domain,
                            uint64_t index) {
  return derive_stream(seed, domain, index).next_u64();
}

}  // namespace rwre
