#include "snse/stable.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace snse {

void StableParams::validate() const {
  if (!(beta > 0.0) || !(beta <= 2.0)) {
    throw std::invalid_argument("StableParams.beta must lie in (0, 2], got " + std::to_string(beta));
  }
  if (!(scale >= 0.0)) {
    throw std::invalid_argument("StableParams.scale must be >= 0, got " + std::to_string(scale));
  }
  if (!(skew >= -1.0 && skew <= 1.0)) {
    throw std::invalid_argument("StableParams.skew must lie in [-1, 1], got " + std::to_string(skew));
  }
  if (!std::isfinite(loc)) {
    throw std::invalid_argument("StableParams.loc must be finite");
  }
}

namespace {

// Chambers-Mallows-Stuck transform. u in (0,1) maps to the angle, w is a unit
// exponential. The result has E exp(i t X) = exp(-|t|^beta) for skew = 0.
double cms_standard(double beta, double skew, double u, double w) {
  const double U = M_PI * (u - 0.5);
  if (skew == 0.0) {
    if (beta == 1.0) return std::tan(U);  // symmetric Cauchy closed form
    const double t = std::sin(beta * U) / std::pow(std::cos(U), 1.0 / beta);
    const double s = std::pow(std::cos((1.0 - beta) * U) / w, (1.0 - beta) / beta);
    return t * s;
  }
  if (beta == 1.0) {
    const double a = M_PI_2 + skew * U;
    return M_2_PI * (a * std::tan(U) - skew * std::log((M_PI_2 * w * std::cos(U)) / a));
  }
  const double tb = std::tan(M_PI_2 * beta);
  const double B = std::atan(skew * tb) / beta;
  const double S = std::pow(1.0 + skew * skew * tb * tb, 0.5 / beta);
  const double t = S * std::sin(beta * (U + B)) / std::pow(std::cos(U), 1.0 / beta);
  const double s = std::pow(std::cos(U - beta * (U + B)) / w, (1.0 - beta) / beta);
  return t * s;
}

// sigma multiplier realizing the module's scale convention.
double scale_multiplier(double beta, double sigma) {
  if (beta == 2.0) return sigma;              // S_2(sigma) = N(0, 2 sigma^2)
  return sigma * std::pow(2.0, -1.0 / beta);  // CF exp(-sigma^beta |t|^beta / 2)
}

}  // namespace

double sample_stable_at(const StableParams& params, const CounterRng& rng, std::uint64_t counter) {
  if (params.scale == 0.0) return params.loc;
  const auto [u, v] = rng.uniform_pair(counter);
  const double w = -std::log(v);
  const double x = cms_standard(params.beta, params.skew, u, w);
  return scale_multiplier(params.beta, params.scale) * x + params.loc;
}

std::vector<double> sample_stable(const StableParams& params, std::size_t n, std::uint64_t seed) {
  params.validate();
  if (n == 0) throw std::invalid_argument("sample_stable: n must be >= 1");
  std::vector<double> out(n);
  const CounterRng rng(mix64(seed));
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
    out[static_cast<std::size_t>(i)] =
        sample_stable_at(params, rng, static_cast<std::uint64_t>(i));
  }
  return out;
}

double stable_sum_scale(const std::vector<double>& weights, const std::vector<double>& scales,
                        double beta) {
  if (weights.size() != scales.size()) {
    throw std::invalid_argument("stable_sum_scale: weights has length " +
                                std::to_string(weights.size()) + " but scales has length " +
                                std::to_string(scales.size()));
  }
  if (!(beta > 0.0) || !(beta > 0.0 && beta <= 2.0)) {
    throw std::invalid_argument("stable_sum_scale: beta must lie in (0, 2]");
  }
  double acc = 0.0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    acc += std::pow(std::abs(weights[j]), beta) * std::pow(scales[j], beta);
  }
  return std::pow(acc, 1.0 / beta);
}

}  // namespace snse
