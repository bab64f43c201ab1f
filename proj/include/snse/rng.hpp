// Counter-based random number generation (Philox4x32-10).
//
// Every consumer derives a stream key from (base seed, purpose tag, index)
// and addresses variates by counter, so ensembles, modes and steps draw from
// disjoint streams without any shared mutable state.
#pragma once

#include <array>
#include <cstdint>

namespace snse {

struct PhiloxBlock {
  std::array<std::uint32_t, 4> x;
};

// Philox4x32-10: returns 4 x 32 random bits for a (key, counter) pair.
PhiloxBlock philox4x32(std::uint64_t key, std::uint64_t ctr_hi, std::uint64_t ctr_lo);

// SplitMix64 finalizer, used to mix seeds and purpose tags into stream keys.
std::uint64_t mix64(std::uint64_t v);

// Purpose tags keep independent experiment streams from colliding: adding a
// new experiment never perturbs the variates an existing one sees.
enum class StreamPurpose : std::uint64_t {
  path = 1,
  init = 2,
  probe = 3,
  moment = 4,
  measure = 5,
};

std::uint64_t derive_seed(std::uint64_t base, StreamPurpose purpose, std::uint64_t index);

// Stateless uniform draws addressed by (key, counter). Each counter yields
// two doubles in the open interval (0,1).
struct CounterRng {
  std::uint64_t key = 0;

  explicit CounterRng(std::uint64_t k) : key(k) {}

  std::pair<double, double> uniform_pair(std::uint64_t counter) const;
  double normal(std::uint64_t counter) const;  // Box-Muller, one N(0,1) per counter
};

}  // namespace snse
