// Symmetric (and skewed) beta-stable variate generation.
//
// Convention: for beta < 2 a variate X ~ S_beta(sigma, 0, 0) has
// characteristic function E exp(i t X) = exp(-sigma^beta |t|^beta / 2).
// At beta = 2 the distribution is the Gaussian N(loc, 2 sigma^2); the scale
// enters the Gaussian endpoint without the 1/2, which matches the stable-law
// parametrization the Gaussian case is usually quoted in. The two statements
// do not join continuously at beta = 2; both are honored as-is.
#pragma once

#include <cstdint>
#include <vector>

#include "snse/rng.hpp"

namespace snse {

struct StableParams {
  double beta = 1.5;  // stability index, (0, 2]
  double scale = 1.0;  // sigma >= 0
  double skew = 0.0;   // delta in [-1, 1]
  double loc = 0.0;    // shift

  void validate() const;  // throws std::invalid_argument naming the field
};

// One variate addressed by (key, counter); deterministic and thread-safe.
double sample_stable_at(const StableParams& params, const CounterRng& rng, std::uint64_t counter);

// n i.i.d. variates; deterministic given seed, identical across thread counts.
std::vector<double> sample_stable(const StableParams& params, std::size_t n, std::uint64_t seed);

// Scale of sum_j w_j X_j for independent X_j ~ S_beta(s_j, 0, 0):
// (sum_j |w_j|^beta s_j^beta)^(1/beta).
double stable_sum_scale(const std::vector<double>& weights, const std::vector<double>& scales,
                        double beta);

}  // namespace snse
