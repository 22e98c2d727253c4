#pragma once

#include <cstdint>
#include <span>

namespace rwc {

// Counter-based generator. Every stream is derived from (seed, stream_id)
// by mixing, so chunked parallel runs produce the same numbers regardless
// of how chunks are assigned to threads.
class Rng {
public:
  Rng(std::uint64_t seed, std::uint64_t stream_id = 0)
      : state_(mix(seed ^ mix(stream_id + 0x9e3779b97f4a7c15ull))) {
    if (state_ == 0) state_ = 0x4d595df4d0f33173ull;
  }

  std::uint64_t next_u64() {
    // splitmix64 step
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform on [0,1)
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // index into a cumulative probability table (strictly increasing, back()==1)
  int next_discrete(std::span<const double> cum) {
    double u = next_double();
    int lo = 0, hi = static_cast<int>(cum.size()) - 1;
    while (lo < hi) {
      int mid = (lo + hi) / 2;
      if (u < cum[mid]) hi = mid; else lo = mid + 1;
    }
    return lo;
  }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdull;
    z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ull;
    return z ^ (z >> 33);
  }

private:
  std::uint64_t state_;
};

}  // namespace rwc
