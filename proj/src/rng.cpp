#include "snse/rng.hpp"

#include <cmath>

namespace snse {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mul_hilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline double u64_to_open_unit(std::uint64_t v) {
  // 53 significant bits, offset so the result lies strictly inside (0,1).
  return static_cast<double>(v >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

}  // namespace

PhiloxBlock philox4x32(std::uint64_t key, std::uint64_t ctr_hi, std::uint64_t ctr_lo) {
  std::uint32_t x0 = static_cast<std::uint32_t>(ctr_lo);
  std::uint32_t x1 = static_cast<std::uint32_t>(ctr_lo >> 32);
  std::uint32_t x2 = static_cast<std::uint32_t>(ctr_hi);
  std::uint32_t x3 = static_cast<std::uint32_t>(ctr_hi >> 32);
  std::uint32_t k0 = static_cast<std::uint32_t>(key);
  std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);

  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mul_hilo(kPhiloxM0, x0, hi0, lo0);
    mul_hilo(kPhiloxM1, x2, hi1, lo1);
    const std::uint32_t y0 = hi1 ^ x1 ^ k0;
    const std::uint32_t y1 = lo1;
    const std::uint32_t y2 = hi0 ^ x3 ^ k1;
    const std::uint32_t y3 = lo0;
    x0 = y0;
    x1 = y1;
    x2 = y2;
    x3 = y3;
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  return PhiloxBlock{{x0, x1, x2, x3}};
}

std::uint64_t mix64(std::uint64_t v) {
  v += 0x9E3779B97F4A7C15ull;
  v = (v ^ (v >> 30)) * 0xBF58476D1CE4E5B9ull;
  v = (v ^ (v >> 27)) * 0x94D049BB133111EBull;
  return v ^ (v >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, StreamPurpose purpose, std::uint64_t index) {
  std::uint64_t h = mix64(base);
  h = mix64(h ^ (static_cast<std::uint64_t>(purpose) * 0xA24BAED4963EE407ull));
  h = mix64(h ^ (index * 0x9FB21C651E98DF25ull));
  return h;
}

std::pair<double, double> CounterRng::uniform_pair(std::uint64_t counter) const {
  const PhiloxBlock b = philox4x32(key, 0, counter);
  const std::uint64_t v0 = (static_cast<std::uint64_t>(b.x[0]) << 32) | b.x[1];
  const std::uint64_t v1 = (static_cast<std::uint64_t>(b.x[2]) << 32) | b.x[3];
  return {u64_to_open_unit(v0), u64_to_open_unit(v1)};
}

double CounterRng::normal(std::uint64_t counter) const {
  const auto [u1, u2] = uniform_pair(counter);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace snse
