#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <omp.h>

#include <cmath>
#include <sstream>

#include "snse/flow.hpp"
#include "test_util.hpp"

using namespace snse;

namespace {

constexpr int kL = 15;

ModelConfig small_config(double sigma, double f_amp, double nu = 1.0, double rotation = 2.0) {
  ModelConfig c;
  c.l_max = kL;
  c.l_min = 2;
  c.n_lat = 24;
  c.n_lon = 48;
  c.nu = nu;
  c.rotation = rotation;
  c.beta = 1.5;
  c.alpha = 0.25;
  c.noise_modes = {{2, 0, sigma}, {3, 0, sigma}};
  c.dt = 1e-3;
  c.delta = 1.5;
  c.c_b = 0.4;
  c.seed = 11;
  if (f_amp != 0.0) {
    SpectralField f(kL, 2);
    f.at(2, 0) = f_amp * std::sqrt(6.0);
    c.forcing = f;
  }
  return c;
}

const SphereGrid& grid_for(const ModelConfig& c) {
  static SphereGrid g(24, 48, kL, true);
  (void)c;
  return g;
}

NoisePath make_path(const ModelConfig& c, double t_min, double t_max, std::uint64_t seed) {
  return NoisePath(c.stable_params(), c.dt / c.path_substeps, t_min, t_max, seed);
}

}  // namespace

TEST_CASE("single mode decays exponentially, exact per step") {
  ModelConfig c = small_config(0.0, 0.0);
  const FlowEngine eng(c, grid_for(c));
  const NoisePath path = make_path(c, -1.0, 1.0, 1);
  SpectralField v(kL, 2);
  v.at(2, 0) = 3.0;
  OUState z = eng.stationary_z(path, 0.0);
  for (int k = 0; k < 200; ++k) eng.step(v, z, path);
  const double want = 3.0 * std::exp(-c.nu * 4.0 * 0.2);
  CHECK(v.at(2, 0).real() == doctest::Approx(want).epsilon(1e-12));
  // nothing leaked into other modes
  SpectralField rest = v;
  rest.at(2, 0) = 0.0;
  CHECK(h_norm(rest) <= 1e-13);
}

TEST_CASE("inviscid truncated dynamics conserve energy and enstrophy") {
  ModelConfig c = small_config(0.0, 0.0, /*nu=*/0.0, /*rotation=*/1.5);
  const FlowEngine eng(c, grid_for(c));
  const NoisePath path = make_path(c, -1.0, 1.0, 2);
  SpectralField v = random_field(kL, 2, 55);
  v *= 0.5 / h_norm(v);
  OUState z = eng.stationary_z(path, 0.0);
  const double e0 = energy(v), s0 = enstrophy(v);
  for (int k = 0; k < 500; ++k) eng.step(v, z, path);
  CHECK(std::abs(energy(v) - e0) <= 1e-6 * e0);
  CHECK(std::abs(enstrophy(v) - s0) <= 1e-6 * s0);
}

TEST_CASE("ETD-RK2 shows order >= 2 between jump times") {
  // One jump aligned with every step grid; z is reproduced exactly across
  // resolutions, so the Richardson ratios isolate the integrator order.
  auto run_at = [&](int levels) {
    ModelConfig c = small_config(0.3, 0.1);
    c.dt = 1.0 / (128 << levels);
    const FlowEngine eng(c, grid_for(c));
    const std::size_t n = static_cast<std::size_t>(1.0 / c.dt);
    std::vector<std::vector<double>> inc(2, std::vector<double>(9 * n, 0.0));
    inc[0][8 * n + n / 2 - 1] = 0.8;  // increment over [0.5-dt, 0.5]: arrival exactly at 0.5
    const NoisePath path =
        NoisePath::from_increments(c.stable_params(), c.dt, -8.0, std::move(inc));
    SpectralField v = random_field(kL, 2, 77);
    v *= 0.4 / h_norm(v);
    OUState z = eng.stationary_z(path, 0.0);
    for (std::size_t k = 0; k < n; ++k) eng.step(v, z, path);
    return v;
  };
  const SpectralField v0 = run_at(0);
  const SpectralField v1 = run_at(1);
  const SpectralField v2 = run_at(2);
  SpectralField d01 = v0, d12 = v1;
  d01 -= v1;
  d12 -= v2;
  const double ratio = h_norm(d01) / h_norm(d12);
  MESSAGE("Richardson ratio " << ratio << " (4 = second order)");
  CHECK(ratio >= 3.2);
}

TEST_CASE("phi(0) is the identity, phi is deterministic") {
  ModelConfig c = small_config(0.05, 0.1);
  const FlowEngine eng(c, grid_for(c));
  const NoisePath path = make_path(c, -12.0, 2.0, 99);
  const SpectralField x = random_field(kL, 2, 5);
  const SpectralField u0 = eng.phi(0.0, path, x);
  for (std::size_t i = 0; i < x.coeff_count(); ++i) CHECK(u0.data()[i] == x.data()[i]);

  const SpectralField a = eng.phi(1.0, path, x);
  const SpectralField b = eng.phi(1.0, path, x);
  for (std::size_t i = 0; i < a.coeff_count(); ++i) CHECK(a.data()[i] == b.data()[i]);
}

TEST_CASE("phi output is bit-identical across thread counts") {
  ModelConfig c = small_config(0.05, 0.1);
  const FlowEngine eng(c, grid_for(c));
  const NoisePath path = make_path(c, -12.0, 1.0, 123);
  const SpectralField x = random_field(kL, 2, 6);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const SpectralField a = eng.phi(0.5, path, x);
  omp_set_num_threads(4);
  const SpectralField b = eng.phi(0.5, path, x);
  omp_set_num_threads(saved);
  for (std::size_t i = 0; i < a.coeff_count(); ++i) CHECK(a.data()[i] == b.data()[i]);
}

TEST_CASE("noise-free flow contracts inside the e^{-nu lambda_1 t} envelope") {
  ModelConfig c = small_config(0.0, 0.0);
  const FlowEngine eng(c, grid_for(c));
  const NoisePath path = make_path(c, -1.0, 2.0, 3);
  SpectralField x = random_field(kL, 2, 8);
  x *= 1.0 / h_norm(x);
  for (double t : {0.25, 0.5, 1.0, 2.0}) {
    const SpectralField u = eng.phi(t, path, x);
    CHECK(h_norm(u) <= std::exp(-c.nu * 4.0 * t) * (1.0 + 1e-6));
  }
}

TEST_CASE("cocycle identity: degenerate and generic cases") {
  ModelConfig c = small_config(0.05, 0.1);
  const FlowEngine eng(c, grid_for(c));
  const NoisePath path = make_path(c, -16.0, 2.0, 2718);
  const SpectralField x = random_field(kL, 2, 12);

  CHECK(eng.verify_cocycle(0.5, 0.0, path, x) <= 1e-14);
  CHECK(eng.verify_cocycle(0.0, 0.5, path, x) <= 1e-14);
  CHECK(eng.verify_cocycle(0.5, 0.5, path, x) <= 1e-10);
  CHECK_THROWS_AS(eng.verify_cocycle(0.5, 0.1234e-4, path, x), std::invalid_argument);
}

TEST_CASE("ledger: noise-free decay bound and zero violations") {
  ModelConfig c = small_config(0.0, 0.0);
  const FlowEngine eng(c, grid_for(c));
  const NoisePath path = make_path(c, -2.0, 1.0, 4);
  SpectralField v0 = random_field(kL, 2, 21);
  v0 *= 0.8 / h_norm(v0);
  const auto run = eng.run_with_ledger(-2.0, 0.0, path, v0);
  CHECK(!run.blew_up);
  CHECK(run.ledger.violation_count() == 0);
  const double h0 = run.ledger.rows.front().v_h2;
  for (const auto& row : run.ledger.rows) {
    CHECK(row.v_h2 <= h0 * std::exp(-2.0 * (row.t + 2.0)) * (1.0 + 1e-8));
    CHECK(row.gamma == doctest::Approx(-2.0));
    CHECK(row.p == 0.0);
  }
}

TEST_CASE("ledger: stochastic runs keep the Gronwall flag clear") {
  ModelConfig c = small_config(0.05, 0.1);
  const FlowEngine eng(c, grid_for(c));
  for (int member = 0; member < 5; ++member) {
    const NoisePath path = make_path(c, -16.0, 1.0, 5000 + member);
    SpectralField v0 = random_field(kL, 2, 600 + member);
    v0 *= 1.0 / h_norm(v0);
    const auto run = eng.run_with_ledger(-4.0, 0.0, path, v0);
    CHECK(!run.blew_up);
    CHECK(run.ledger.violation_count() == 0);
  }
}

TEST_CASE("V-ledger display reproduces from ledger columns") {
  ModelConfig c = small_config(0.05, 0.1);
  const FlowEngine eng(c, grid_for(c));
  const NoisePath path = make_path(c, -16.0, 1.0, 31);
  SpectralField v0 = random_field(kL, 2, 41);
  v0 *= 0.7 / h_norm(v0);
  const auto run = eng.run_with_ledger(-1.0, 0.0, path, v0);
  const auto& rows = run.ledger.rows;
  double int_v2 = 0.0, int_gamma_pos = 0.0, int_2p = 0.0, sup_h2 = 0.0;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    int_v2 += 0.5 * c.dt * (rows[i].v_v2 + rows[i + 1].v_v2);
    int_gamma_pos +=
        0.5 * c.dt * (std::max(rows[i].gamma, 0.0) + std::max(rows[i + 1].gamma, 0.0));
    int_2p += 0.5 * c.dt * (2.0 * rows[i].p + 2.0 * rows[i + 1].p);
  }
  for (const auto& r : rows) sup_h2 = std::max(sup_h2, r.v_h2);
  const double rhs = rows.front().v_h2 + int_gamma_pos * sup_h2 + int_2p;
  CHECK(int_v2 <= rhs * (1.0 + 1e-8) + 1e-12);
}

TEST_CASE("continuous dependence on the initial state, constant logged") {
  ModelConfig c = small_config(0.05, 0.1);
  const FlowEngine eng(c, grid_for(c));
  const NoisePath path = make_path(c, -12.0, 1.0, 17);
  const SpectralField x = random_field(kL, 2, 50);
  SpectralField e = random_field(kL, 2, 51);
  e *= 1.0 / h_norm(e);
  const double eps = 1e-6;
  SpectralField xp = e;
  xp *= eps;
  xp += x;
  const SpectralField a = eng.phi(0.5, path, x);
  const SpectralField b = eng.phi(0.5, path, xp);
  SpectralField d = b;
  d -= a;
  const double K = h_norm(d) / eps;
  MESSAGE("continuity constant K(omega, 0.5) = " << K);
  CHECK(std::isfinite(K));
  CHECK(K <= 10.0);  // contractive regime
}

TEST_CASE("heavy jumps surface as blow-up outcomes with a time stamp") {
  ModelConfig c = small_config(0.3, 0.0);
  const FlowEngine eng(c, grid_for(c));
  const std::size_t n = 9000;
  std::vector<std::vector<double>> inc(2, std::vector<double>(n, 0.0));
  inc[0][8500] = 1e14;  // monstrous jump at t = 0.5
  const NoisePath path = NoisePath::from_increments(c.stable_params(), 1e-3, -8.0, std::move(inc));
  SpectralField v0 = random_field(kL, 2, 3);
  v0 *= 0.5 / h_norm(v0);
  const auto run = eng.run_with_ledger(0.0, 1.0, path, v0);
  CHECK(run.blew_up);
  CHECK(run.blowup_time >= 0.5);
  CHECK(run.ledger.rows.size() >= 500);  // partial ledger delivered
}

TEST_CASE("phi demands full burn-in coverage and matching steps") {
  ModelConfig c = small_config(0.05, 0.0);
  const FlowEngine eng(c, grid_for(c));
  const NoisePath short_path = make_path(c, -1.0, 1.0, 9);  // certified window is ~6.5
  const SpectralField x = random_field(kL, 2, 1);
  CHECK_THROWS_AS(eng.phi(0.5, short_path, x), std::out_of_range);

  const NoisePath wrong_step(c.stable_params(), 2e-3, -8.0, 1.0, 9);
  CHECK_THROWS_AS(eng.phi(0.5, wrong_step, x), std::invalid_argument);
}

TEST_CASE("trajectory CSV emits the documented columns") {
  EnergyLedger led;
  led.rows.push_back({0.0, 1.0, 4.0, 16.0, -2.0, 0.1, 0.2, 1.0, false});
  std::stringstream ss;
  write_trajectory_csv(ss, led, {0.5}, {1.5});
  std::string header;
  std::getline(ss, header);
  CHECK(header == "t,energy,enstrophy,v_h,v_v,gamma,p,q,gronwall_rhs,violated");
  std::string row;
  std::getline(ss, row);
  CHECK(row.find("0.5,1.5") != std::string::npos);
}
