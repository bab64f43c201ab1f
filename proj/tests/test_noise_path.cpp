#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "snse/noise_path.hpp"
#include "test_util.hpp"

using namespace snse;

namespace {

std::vector<StableParams> two_modes(double beta, double sigma) {
  StableParams p;
  p.beta = beta;
  p.scale = sigma;
  return {p, p};
}

// Brute-force oracle: path value by direct cumulative sums of increments.
double value_oracle(const NoisePath& p, int mode, double t) {
  const auto k = static_cast<std::ptrdiff_t>(p.grid_index(t));
  const auto k0 = static_cast<std::ptrdiff_t>(p.grid_index(0.0));
  double s = 0.0;
  for (std::ptrdiff_t i = std::min(k, k0); i < std::max(k, k0); ++i) {
    s += p.increment(mode, static_cast<std::size_t>(i));
  }
  return k >= k0 ? s : -s;
}

}  // namespace

TEST_CASE("two-sided construction: 4 increments per mode, L(0) = 0") {
  const NoisePath p(two_modes(1.5, 1.0), 0.5, -1.0, 1.0, 5);
  CHECK(p.n_steps() == 4);
  CHECK(p.modes() == 2);
  CHECK(p.value(0, 0.0) == 0.0);
  CHECK(p.value(1, 0.0) == 0.0);
  CHECK(p.value(0, -1.0) == -(p.increment(0, 0) + p.increment(0, 1)));
  CHECK(p.value(0, 1.0) == p.increment(0, 2) + p.increment(0, 3));
}

TEST_CASE("construction errors") {
  CHECK_THROWS_AS(NoisePath(two_modes(1.5, 1.0), -0.1, -1.0, 1.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(NoisePath(two_modes(1.5, 1.0), 0.5, 0.3, 1.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(NoisePath(two_modes(1.5, 1.0), 0.3, -1.0, 1.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(NoisePath({}, 0.5, -1.0, 1.0, 5), std::invalid_argument);
}

TEST_CASE("same seed gives bit-identical paths") {
  const NoisePath a(two_modes(1.5, 0.3), 0.01, -2.0, 2.0, 77);
  const NoisePath b(two_modes(1.5, 0.3), 0.01, -2.0, 2.0, 77);
  for (int l = 0; l < a.modes(); ++l) {
    for (std::size_t k = 0; k < a.n_steps(); ++k) {
      CHECK(a.increment(l, k) == b.increment(l, k));
    }
  }
}

TEST_CASE("increment scale grows as (t-s)^(1/beta): fitted exponent within 3%") {
  const double beta = 1.5, h = 0.01;
  const NoisePath p(two_modes(beta, 1.0), h, 0.0, 4000.0 * h * 100, 31337);
  std::vector<double> log_tau, log_scale;
  for (int kblock : {1, 4, 16, 64}) {
    const double tau = kblock * h;
    // Non-overlapping increments over windows of kblock steps.
    std::vector<double> incs;
    double acc = 0.0;
    int cnt = 0;
    for (std::size_t k = 0; k < p.n_steps(); ++k) {
      acc += p.increment(0, k);
      if (++cnt == kblock) {
        incs.push_back(acc);
        acc = 0.0;
        cnt = 0;
      }
    }
    // Scale from the empirical CF at theta = 1: sigma^beta = -2 ln E cos(X).
    const double ecf = testutil::ecf_cos(incs, 1.0);
    const double scale = std::pow(-2.0 * std::log(ecf), 1.0 / beta);
    log_tau.push_back(std::log(tau));
    log_scale.push_back(std::log(scale));
  }
  const double slope = testutil::fit_slope(log_tau, log_scale);
  CHECK(slope == doctest::Approx(1.0 / beta).epsilon(0.03));
}

TEST_CASE("shift by zero is the identity") {
  const NoisePath p(two_modes(1.5, 1.0), 0.25, -2.0, 2.0, 9);
  const NoisePath q = p.shifted(0.0);
  CHECK(q.t_min() == p.t_min());
  CHECK(q.t_max() == p.t_max());
  for (std::size_t k = 0; k < p.n_steps(); ++k) CHECK(q.increment(0, k) == p.increment(0, k));
  CHECK(q.value(0, 1.25) == p.value(0, 1.25));
}

TEST_CASE("shift satisfies the defining relation exactly") {
  const NoisePath p(two_modes(1.5, 1.0), 0.25, -1.0, 1.0, 12);
  const NoisePath q = p.shifted(0.5);
  // value(theta_s p, t) = value(p, t+s) - value(p, s), via the cumulative-sum oracle
  for (double t : {-0.5, -0.25, 0.0, 0.25, 0.5}) {
    const double lhs = q.value(0, t);
    const double rhs = value_oracle(p, 0, t + 0.5) - value_oracle(p, 0, 0.5);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-15));
  }
  CHECK(q.value(0, 0.25) == doctest::Approx(p.value(0, 0.75) - p.value(0, 0.5)).epsilon(1e-15));
}

TEST_CASE("shift group property is exact") {
  const NoisePath p(two_modes(1.5, 1.0), 0.25, -4.0, 4.0, 13);
  const NoisePath a = p.shifted(0.5).shifted(0.75);
  const NoisePath b = p.shifted(1.25);
  CHECK(a.t_min() == b.t_min());
  CHECK(a.t_max() == b.t_max());
  for (double t : {-1.0, -0.25, 0.0, 0.5, 1.0}) {
    CHECK(a.value(0, t) == b.value(0, t));  // bitwise: same increments, same sums
  }
}

TEST_CASE("shift alignment and range errors") {
  const NoisePath p(two_modes(1.5, 1.0), 0.25, -1.0, 1.0, 14);
  CHECK_THROWS_AS(p.shifted(0.13), std::invalid_argument);
  CHECK_THROWS_AS(p.shifted(3.0), std::out_of_range);
  CHECK_THROWS_AS(p.value(0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(p.value(0, 7.0), std::out_of_range);
}

TEST_CASE("binary container round-trips bit-exactly") {
  const NoisePath p(two_modes(1.7, 0.4), 0.125, -1.0, 2.0, 2718);
  std::stringstream ss;
  p.write_binary(ss);
  const NoisePath q = NoisePath::read_binary(ss);
  CHECK(q.modes() == p.modes());
  CHECK(q.step() == p.step());
  CHECK(q.t_min() == p.t_min());
  CHECK(q.t_max() == p.t_max());
  CHECK(q.seed() == p.seed());
  CHECK(q.mode_params()[0].beta == p.mode_params()[0].beta);
  CHECK(q.mode_params()[1].scale == p.mode_params()[1].scale);
  for (int l = 0; l < p.modes(); ++l) {
    for (std::size_t k = 0; k < p.n_steps(); ++k) {
      CHECK(q.increment(l, k) == p.increment(l, k));
    }
  }
}

TEST_CASE("bad magic is rejected") {
  std::stringstream ss;
  ss << "NOTAPATHxxxxxxxxxxxxxxxxxxxxxxxxxxxx";
  CHECK_THROWS_AS(NoisePath::read_binary(ss), std::runtime_error);
}

TEST_CASE("csv export anchors L(0) = 0") {
  const NoisePath p(two_modes(1.5, 1.0), 0.5, -1.0, 1.0, 4);
  std::stringstream ss;
  p.write_csv(ss);
  std::string header;
  std::getline(ss, header);
  CHECK(header == "t,L_1,L_2");
  // Row at t = 0 must read exactly 0 for both modes.
  std::string line;
  bool found = false;
  while (std::getline(ss, line)) {
    if (line.rfind("0,", 0) == 0) {
      CHECK(line == "0,0,0");
      found = true;
    }
  }
  CHECK(found);
}
