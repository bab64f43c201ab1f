#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "snse/attractor.hpp"
#include "snse/measure.hpp"
#include "test_util.hpp"

using namespace snse;

namespace {

constexpr int kL = 7;

const SphereGrid& grid() {
  static SphereGrid g(12, 24, kL, true);
  return g;
}

ModelConfig config(double sigma, double f_amp = 0.1) {
  ModelConfig c;
  c.l_max = kL;
  c.l_min = 2;
  c.n_lat = 12;
  c.n_lon = 24;
  c.nu = 1.0;
  c.rotation = 2.0;
  c.beta = 1.5;
  c.alpha = 0.25;
  c.noise_modes = {{2, 0, sigma}, {3, 0, sigma}};
  c.dt = 2e-3;
  c.delta = 1.5;
  c.c_b = 0.4;
  c.seed = 5;
  if (f_amp != 0.0) {
    SpectralField f(kL, 2);
    f.at(2, 0) = f_amp * std::sqrt(6.0);
    c.forcing = f;
  }
  return c;
}

}  // namespace

TEST_CASE("transition estimate degenerate cases") {
  ModelConfig c = config(0.05);
  const FlowEngine eng(c, grid());
  const SpectralField x = sample_ball(kL, 2, 0.5, 3);
  const auto obs = default_observables(2);

  // t = 0: exactly f(x) with zero spread
  const MCEstimate at0 = transition_estimate(eng, obs[0].fn, 0.0, x, 100, 9);
  CHECK(at0.mean == obs[0].fn(x));
  CHECK(at0.stderr_ == 0.0);

  // f == 1: probability conservation
  const MCEstimate one =
      transition_estimate(eng, [](const SpectralField&) { return 1.0; }, 0.25, x, 50, 9);
  CHECK(one.mean == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(one.stderr_ <= 1e-15);

  // sigma = 0: the deterministic flow, zero spread
  ModelConfig det = config(0.0);
  const FlowEngine engd(det, grid());
  const MCEstimate d = transition_estimate(engd, obs[0].fn, 0.25, x, 20, 9);
  CHECK(d.stderr_ <= 1e-14);
  CHECK(d.mean > 0.0);
  CHECK(d.mean <= 1.0);
}

TEST_CASE("transition estimates stay inside the observable range") {
  ModelConfig c = config(0.08);
  const FlowEngine eng(c, grid());
  const SpectralField x = sample_ball(kL, 2, 0.7, 4);
  for (const auto& obs : default_observables(2)) {
    const MCEstimate e = transition_estimate(eng, obs.fn, 0.5, x, 200, 31);
    CHECK(e.mean >= 0.0 - 3.0 * e.stderr_);
    CHECK(e.mean <= 1.0 + 3.0 * e.stderr_);
  }
}

TEST_CASE("pullback measure: degenerate point mass at the origin") {
  ModelConfig c = config(0.0, 0.0);
  const FlowEngine eng(c, grid());
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4};
  const EmpiricalMeasure mu = pullback_measure(
      eng, seeds, 4.0, [&](std::uint64_t s) { return sample_ball(kL, 2, 0.5, s); });
  CHECK(mu.excluded == 0);
  CHECK(mu.support.size() == 4);
  for (const auto& u : mu.support) CHECK(h_norm(u) <= 1e-6);
}

TEST_CASE("pullback limit forgets the initial condition per omega") {
  ModelConfig c = config(0.05);
  const FlowEngine eng(c, grid());
  std::vector<std::uint64_t> seeds = {11, 12, 13};
  const auto sampler_a = [&](std::uint64_t s) { return sample_ball(kL, 2, 0.4, s); };
  const auto sampler_b = [&](std::uint64_t s) { return sample_ball(kL, 2, 1.1, s + 77); };
  const EmpiricalMeasure ma = pullback_measure(eng, seeds, 10.0, sampler_a);
  const EmpiricalMeasure mb = pullback_measure(eng, seeds, 10.0, sampler_b);
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    SpectralField d = ma.support[i];
    d -= mb.support[i];
    CHECK(h_norm(d) <= 1e-5);  // same omega, different x: the pullback forgot x
  }
}

TEST_CASE("Birkhoff time average cross-validates the pullback measure") {
  ModelConfig c = config(0.05);
  const FlowEngine eng(c, grid());
  const auto f = default_observables(2)[0].fn;

  // pooled pullback estimate of rho = E mu_omega
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < 48; ++i) seeds.push_back(1000 + i);
  const EmpiricalMeasure rho = pullback_measure(
      eng, seeds, 8.0, [&](std::uint64_t s) { return sample_ball(kL, 2, 0.5, s); });
  const double pullback_mean = rho.mean_observable(f);
  double pv = 0.0;
  for (const auto& u : rho.support) pv += std::pow(f(u) - pullback_mean, 2);
  const double pullback_se = std::sqrt(pv / rho.support.size() / rho.support.size());

  // long forward run, block-averaged stderr
  const double T = 150.0;
  const NoisePath path(c.stable_params(), c.dt, -8.0, T, 999);
  OUState z = eng.stationary_z(path, 0.0);
  SpectralField v = sample_ball(kL, 2, 0.5, 55);
  const std::size_t n = static_cast<std::size_t>(std::llround(T / c.dt));
  const std::size_t burn = n / 10;
  std::vector<double> block_means;
  double acc = 0.0, block = 0.0;
  std::size_t count = 0;
  const std::size_t block_len = (n - burn) / 24;
  for (std::size_t k = 0; k < n; ++k) {
    eng.step(v, z, path);
    if (k < burn) continue;
    SpectralField u = v;
    u += ou_field(z, c.ou_params(), c.l_max);
    const double val = f(u);
    acc += val;
    block += val;
    if (++count % block_len == 0) {
      block_means.push_back(block / block_len);
      block = 0.0;
    }
  }
  const double time_mean = acc / static_cast<double>(count);
  double bm = 0.0;
  for (double b : block_means) bm += b;
  bm /= block_means.size();
  double bv = 0.0;
  for (double b : block_means) bv += (b - bm) * (b - bm);
  const double time_se = std::sqrt(bv / block_means.size() / block_means.size());

  const double se = std::sqrt(pullback_se * pullback_se + time_se * time_se);
  MESSAGE("pullback " << pullback_mean << " +- " << pullback_se << ", time avg " << time_mean
          << " +- " << time_se);
  CHECK(std::abs(time_mean - pullback_mean) <= 3.0 * se);
}

TEST_CASE("Feller probe: zero shift, Lipschitz bound, monotone trend") {
  ModelConfig c = config(0.05);
  const FlowEngine eng(c, grid());
  const auto f = default_observables(2)[0].fn;
  const SpectralField x = sample_ball(kL, 2, 0.5, 21);
  SpectralField e = sample_ball(kL, 2, 1.0, 22);

  const auto pts =
      feller_probe(eng, f, 0.25, x, e, {0.1, 0.01, 0.001, 0.0}, 60, 123);
  CHECK(pts.back().diff_mean == 0.0);
  for (std::size_t k = 0; k + 2 < pts.size(); ++k) {
    CHECK(pts[k + 1].diff_mean <=
          pts[k].diff_mean + 2.0 * (pts[k].diff_stderr + pts[k + 1].diff_stderr));
  }

  // deterministic case: difference bounded by L_f K eps with the logged K
  ModelConfig det = config(0.0);
  const FlowEngine engd(det, grid());
  const NoisePath path(det.stable_params(), det.dt, -1.0, 1.0, 3);
  const double eps = 1e-4;
  SpectralField xp = e;
  xp *= eps;
  xp += x;
  const SpectralField ua = engd.phi(0.25, path, x);
  const SpectralField ub = engd.phi(0.25, path, xp);
  SpectralField d = ub;
  d -= ua;
  const double K = h_norm(d) / eps;
  const double lip_f = std::sqrt(2.0 / std::exp(1.0));  // max slope of exp(-r^2)
  const auto det_pts = feller_probe(engd, f, 0.25, x, e, {eps}, 5, 9);
  CHECK(det_pts[0].diff_mean <= lip_f * K * eps * 1.5 + 1e-14);
}

TEST_CASE("Chapman-Kolmogorov: degenerate and statistical checks") {
  ModelConfig c = config(0.05);
  const FlowEngine eng(c, grid());
  const auto f = default_observables(2)[0].fn;
  const SpectralField x = sample_ball(kL, 2, 0.5, 77);

  // s = 0 collapses the nested estimator to the plain one
  const ChapmanKolmogorov ck0 = chapman_kolmogorov_check(eng, f, 0.25, 0.0, x, 40, 40, 1, 8);
  CHECK(ck0.lhs.mean == ck0.rhs.mean);
  CHECK(ck0.pass_3sigma);

  // sigma = 0: both sides equal the deterministic composition exactly
  ModelConfig det = config(0.0);
  const FlowEngine engd(det, grid());
  const ChapmanKolmogorov ckd = chapman_kolmogorov_check(engd, f, 0.25, 0.25, x, 10, 5, 2, 8);
  CHECK(ckd.lhs.mean == doctest::Approx(ckd.rhs.mean).epsilon(1e-12));
  CHECK(ckd.lhs.stderr_ <= 1e-14);

  // stochastic smoke test at modest budget
  const ChapmanKolmogorov ck =
      chapman_kolmogorov_check(eng, f, 0.25, 0.25, x, 400, 24, 24, 4242);
  MESSAGE("CK lhs " << ck.lhs.mean << " rhs " << ck.rhs.mean << " combined se "
          << ck.combined_stderr);
  CHECK(ck.pass_3sigma);
}

TEST_CASE("invariance of the pullback measure under P_s (smoke scale)") {
  ModelConfig c = config(0.05);
  const FlowEngine eng(c, grid());
  const auto obs = default_observables(2);
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < 32; ++i) seeds.push_back(4000 + i);
  const EmpiricalMeasure mu = pullback_measure(
      eng, seeds, 8.0, [&](std::uint64_t s) { return sample_ball(kL, 2, 0.5, s); });

  for (const auto& named : obs) {
    const InvarianceCheck inv = invariance_check(eng, mu, named.fn, 0.25, 4, 31);
    MESSAGE(named.name << ": int f dmu = " << inv.direct << ", int P_s f dmu = " << inv.evolved
            << " +- " << inv.diff_stderr);
    CHECK(inv.pass_3sigma);
  }
}
