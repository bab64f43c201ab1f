#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "snse/operators.hpp"
#include "snse/reference_kernels.hpp"
#include "test_util.hpp"

using namespace snse;

namespace {

constexpr int kL = 15;
const SphereGrid& test_grid() {
  static SphereGrid g(24, 48, kL, true);
  return g;
}

OperatorContext ctx(double rotation = 2.0) {
  OperatorContext c;
  c.grid = &test_grid();
  c.rotation = rotation;
  c.viscosity = 1.0;
  return c;
}

// ---------------------------------------------------------------------------
// Independent high-resolution quadrature oracle for
// b(u,v,w) = sum_j int J(psi_u, v_j) w_j dOmega (Cartesian components of the
// integral definition). Everything is evaluated by direct mode sums with
// standalone Legendre recurrences; no library transform is involved.
// ---------------------------------------------------------------------------

struct ModeTables {
  int l_max;
  std::vector<double> lam, dlam, lamp;  // Lambda, (1-mu^2) Lambda', Lambda'
  std::vector<double> ddlam;            // d/dmu[(1-mu^2) Lambda']
  std::size_t idx(int l, int m) const {
    const std::size_t mm = static_cast<std::size_t>(m);
    const std::size_t L = static_cast<std::size_t>(l_max);
    return mm * (L + 1) - mm * (mm - 1) / 2 + static_cast<std::size_t>(l - m);
  }
};

ModeTables eval_tables(int l_max, double mu) {
  ModeTables t;
  t.l_max = l_max;
  const std::size_t n = static_cast<std::size_t>(l_max + 1) * (l_max + 2) / 2;
  t.lam.resize(n);
  t.dlam.resize(n);
  t.lamp.resize(n);
  t.ddlam.resize(n);
  const double s2 = 1.0 - mu * mu;
  for (int m = 0; m <= l_max; ++m) {
    for (int l = m; l <= l_max; ++l) {
      const double lam = ref::legendre_lm(l, m, mu);
      const double eps_l =
          std::sqrt((static_cast<double>(l) * l - m * m) / (4.0 * l * l - 1.0));
      const double eps_lp =
          std::sqrt(((l + 1.0) * (l + 1.0) - m * m) / (4.0 * (l + 1.0) * (l + 1.0) - 1.0));
      const double lm1 = (l - 1 >= m) ? ref::legendre_lm(l - 1, m, mu) : 0.0;
      const double lp1 = ref::legendre_lm(l + 1, m, mu);
      const double d = (l + 1.0) * eps_l * lm1 - static_cast<double>(l) * eps_lp * lp1;
      t.lam[t.idx(l, m)] = lam;
      t.dlam[t.idx(l, m)] = d;
      t.lamp[t.idx(l, m)] = d / s2;
      // d/dmu[(1-mu^2) Lambda'] = -(l(l+1) - m^2/(1-mu^2)) Lambda  (Legendre ODE)
      t.ddlam[t.idx(l, m)] =
          -(static_cast<double>(l) * (l + 1) - static_cast<double>(m) * m / s2) * lam;
    }
  }
  return t;
}

// Real-field mode sum with a per-(l,m) complex factor applied to the stored
// m >= 0 coefficients (the conjugate pair doubles the real part).
double mode_sum(const SpectralField& f, const ModeTables& t, const std::vector<double>& table,
                double lon, const std::function<std::complex<double>(int, int)>& factor) {
  double acc = 0.0;
  for (int m = 0; m <= f.l_max(); ++m) {
    const std::complex<double> ph(std::cos(m * lon), std::sin(m * lon));
    for (int l = std::max(m, f.l_min()); l <= f.l_max(); ++l) {
      const std::complex<double> term = f.at(l, m) * factor(l, m) * table[t.idx(l, m)] * ph;
      acc += (m == 0 ? 1.0 : 2.0) * term.real();
    }
  }
  return acc;
}

struct PointEval {
  double v[3];      // Cartesian components
  double dlon[3];   // d/dlon of components
  double dmu[3];    // d/dmu of components
};

// Velocity components and first derivatives of the stream-function flow of a
// vorticity field, from closed-form Legendre identities.
PointEval eval_velocity(const SpectralField& vort, const ModeTables& t, double mu, double lon) {
  SpectralField psi = vort;
  for (int m = 0; m <= psi.l_max(); ++m) {
    for (int l = std::max(m, psi.l_min()); l <= psi.l_max(); ++l) {
      psi.at(l, m) /= -static_cast<double>(l) * (l + 1);
    }
  }
  const double s = std::sqrt(1.0 - mu * mu);
  auto im = [](int, int m) { return std::complex<double>(0.0, m); };
  auto imm = [](int, int m) { return std::complex<double>(-static_cast<double>(m) * m, 0.0); };
  auto one = [](int, int) { return std::complex<double>(1.0, 0.0); };

  const double P = mode_sum(psi, t, t.lam, lon, im);        // d_lon psi
  const double D = mode_sum(psi, t, t.dlam, lon, one);      // (1-mu^2) d_mu psi
  const double P_lon = mode_sum(psi, t, t.lam, lon, imm);   // d_lon^2 psi
  const double P_mu = mode_sum(psi, t, t.lamp, lon, im);    // d_mu d_lon psi
  const double D_lon = mode_sum(psi, t, t.dlam, lon, im);   // d_lon (1-mu^2) d_mu psi
  const double D_mu = mode_sum(psi, t, t.ddlam, lon, one);  // d_mu (1-mu^2) d_mu psi

  const double vth = -P / s, vph = -D / s;
  const double vth_lon = -P_lon / s, vph_lon = -D_lon / s;
  const double vth_mu = -(P_mu / s + P * mu / (s * s * s));
  const double vph_mu = -(D_mu / s + D * mu / (s * s * s));

  const double cl = std::cos(lon), sl = std::sin(lon);
  const double eth[3] = {mu * cl, mu * sl, -s};
  const double eth_mu[3] = {cl, sl, mu / s};
  const double eth_lon[3] = {-mu * sl, mu * cl, 0.0};
  const double eph[3] = {-sl, cl, 0.0};
  const double eph_lon[3] = {-cl, -sl, 0.0};

  PointEval out{};
  for (int j = 0; j < 3; ++j) {
    out.v[j] = vth * eth[j] + vph * eph[j];
    out.dlon[j] = vth_lon * eth[j] + vth * eth_lon[j] + vph_lon * eph[j] + vph * eph_lon[j];
    out.dmu[j] = vth_mu * eth[j] + vth * eth_mu[j] + vph_mu * eph[j];
  }
  return out;
}

double b_oracle(const SpectralField& u, const SpectralField& v, const SpectralField& w) {
  const int L = u.l_max();
  const int n_lat = 3 * L + 8;
  const int n_lon = 4 * L + 8;
  std::vector<double> mu, wq;
  gauss_legendre(n_lat, mu, wq);

  SpectralField psi_u = u;
  for (int m = 0; m <= L; ++m) {
    for (int l = std::max(m, u.l_min()); l <= L; ++l) {
      psi_u.at(l, m) /= -static_cast<double>(l) * (l + 1);
    }
  }
  auto im = [](int, int m) { return std::complex<double>(0.0, m); };
  auto one = [](int, int) { return std::complex<double>(1.0, 0.0); };

  double acc = 0.0;
  for (int j = 0; j < n_lat; ++j) {
    const ModeTables t = eval_tables(L + 1, mu[j]);
    double row = 0.0;
    for (int k = 0; k < n_lon; ++k) {
      const double lon = 2.0 * M_PI * k / n_lon;
      const double a_lon = mode_sum(psi_u, t, t.lam, lon, im);
      const double a_dmu = mode_sum(psi_u, t, t.dlam, lon, one);  // (1-mu^2) d_mu
      const PointEval pv = eval_velocity(v, t, mu[j], lon);
      const PointEval pw = eval_velocity(w, t, mu[j], lon);
      double point = 0.0;
      for (int c = 0; c < 3; ++c) {
        // J(a, g) = d_lon(a) d_mu(g) - d_mu(a) d_lon(g)
        const double jac = a_lon * pv.dmu[c] - (a_dmu / (1.0 - mu[j] * mu[j])) * pv.dlon[c];
        point += jac * pw.v[c];
      }
      row += point;
    }
    acc += wq[j] * row * (2.0 * M_PI / n_lon);
  }
  return acc;
}

}  // namespace

TEST_CASE("apply_A is diagonal multiplication by the Stokes spectrum") {
  const OperatorContext c = ctx();
  const SpectralField zero(kL, 2);
  CHECK(h_norm2(apply_A(zero, c)) == 0.0);

  SpectralField e(kL, 2);
  e.at(2, 0) = 1.0;
  const SpectralField ae = apply_A(e, c);
  CHECK(ae.at(2, 0).real() == doctest::Approx(4.0).epsilon(1e-15));

  const SpectralField u = random_field(kL, 2, 321);
  CHECK(h_norm2(apply_A(u, c)) == doctest::Approx(a_norm2(u)).epsilon(1e-13));
}

TEST_CASE("apply_C: zero rotation, zonal annihilation, skew-adjointness") {
  const SpectralField u = random_field(kL, 2, 31);
  CHECK(h_norm2(apply_C(u, ctx(0.0))) == 0.0);

  SpectralField zonal(kL, 2);
  zonal.at(2, 0) = 1.0;
  zonal.at(5, 0) = -0.7;
  CHECK(h_norm2(apply_C(zonal, ctx())) == 0.0);

  for (int s = 0; s < 100; ++s) {
    const SpectralField f = random_field(kL, 2, 1000 + s);
    const double ip = inner_h(apply_C(f, ctx()), f);
    CHECK(std::abs(ip) <= 1e-12 * h_norm2(f));
  }
}

TEST_CASE("bilinearity: B(0, v) = 0 and B(u, 0) = 0") {
  const OperatorContext c = ctx();
  const SpectralField zero(kL, 2);
  const SpectralField v = random_field(kL, 2, 5);
  CHECK(h_norm(bilinear_B(zero, v, c)) <= 1e-14);
  CHECK(h_norm(bilinear_B(v, zero, c)) <= 1e-14);
  CHECK(std::abs(trilinear_b(zero, v, v, c)) == 0.0);
}

TEST_CASE("energy cancellation: |b(u,v,v)| <= 1e-10 |u|_V |v|_V^2 over 100 pairs") {
  const OperatorContext c = ctx();
  for (int s = 0; s < 100; ++s) {
    const SpectralField u = random_field(kL, 2, 2000 + 2 * s);
    const SpectralField v = random_field(kL, 2, 2001 + 2 * s);
    const double b = trilinear_b(u, v, v, c);
    CHECK(std::abs(b) <= 1e-10 * v_norm(u) * v_norm2(v));
  }
}

TEST_CASE("b(u,u,u) = 0") {
  const OperatorContext c = ctx();
  const SpectralField u = random_field(kL, 2, 9);
  CHECK(std::abs(trilinear_b(u, u, u, c)) <= 1e-12 * v_norm(u) * v_norm2(u));
}

TEST_CASE("trilinear form matches the independent refined-quadrature oracle") {
  const int L = 8;
  SphereGrid g(16, 28, L, true);
  OperatorContext c;
  c.grid = &g;
  c.rotation = 0.0;
  for (int s = 0; s < 5; ++s) {
    const SpectralField u = random_field(L, 2, 300 + 3 * s);
    const SpectralField v = random_field(L, 2, 301 + 3 * s);
    const SpectralField w = random_field(L, 2, 302 + 3 * s);
    const double lib = trilinear_b(u, v, w, c);
    const double ora = b_oracle(u, v, w);
    const double scale = v_norm(u) * v_norm(v) * v_norm(w);
    CHECK(std::abs(lib - ora) <= 1e-8 * scale);
  }
}

TEST_CASE("(B(u,v), w)_H agrees with the trilinear form") {
  const OperatorContext c = ctx();
  for (int s = 0; s < 5; ++s) {
    const SpectralField u = random_field(kL, 2, 400 + 3 * s);
    const SpectralField v = random_field(kL, 2, 401 + 3 * s);
    const SpectralField w = random_field(kL, 2, 402 + 3 * s);
    const double via_field = inner_h(bilinear_B(u, v, c), w);
    const double via_form = trilinear_b(u, v, w, c);
    const double scale = v_norm(u) * v_norm(v) * v_norm(w);
    CHECK(std::abs(via_field - via_form) <= 1e-8 * scale);
  }
}

TEST_CASE("self-advection Jacobian equals the general bilinear operator at u = v") {
  const OperatorContext c = ctx();
  const SpectralField u = random_field(kL, 2, 88);
  const SpectralField fast = self_advection(u, c);
  const SpectralField general = bilinear_B(u, u, c);
  SpectralField d = fast;
  d -= general;
  CHECK(h_norm(d) <= 1e-8 * h_norm(general));
}

TEST_CASE("self-advection conserves energy and enstrophy pairings") {
  const OperatorContext c = ctx();
  const SpectralField u = random_field(kL, 2, 91);
  const SpectralField bu = self_advection(u, c);
  CHECK(std::abs(inner_h(bu, u)) <= 1e-12 * h_norm(bu) * h_norm(u));
  // enstrophy pairing: plain coefficient inner product against u
  double ip = 0.0;
  for (int m = 0; m <= kL; ++m) {
    for (int l = std::max(m, 2); l <= kL; ++l) {
      const auto a = bu.at(l, m), b = u.at(l, m);
      ip += (m == 0 ? 1.0 : 2.0) * (a.real() * b.real() + a.imag() * b.imag());
    }
  }
  CHECK(std::abs(ip) <= 1e-11 * std::sqrt(2.0 * enstrophy(bu)) * std::sqrt(2.0 * enstrophy(u)));
}

TEST_CASE("truncation mismatch raises a dimension error") {
  const OperatorContext c = ctx();
  const SpectralField u = random_field(kL, 2, 1);
  const SpectralField v = random_field(kL - 3, 2, 2);
  CHECK_THROWS_AS(bilinear_B(u, v, c), std::invalid_argument);
}

TEST_CASE("Jacobian antisymmetry on the grid") {
  const SphereGrid& g = test_grid();
  const SpectralField a = random_field(kL, 2, 61);
  const SpectralField b = random_field(kL, 2, 62);
  const GridField jab = jacobian(a, b, g);
  const GridField jba = jacobian(b, a, g);
  double max_diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < jab.size(); ++i) {
    max_diff = std::max(max_diff, std::abs(jab[i] + jba[i]));
    scale = std::max(scale, std::abs(jab[i]));
  }
  CHECK(max_diff <= 1e-12 * scale);
}

TEST_CASE("mode bound delta: zonal-zonal vanishes, estimator stabilizes, analytic bound") {
  const OperatorContext c = ctx();
  const SpectralField e2 = SpectralField::unit_mode(2, 0, kL, 2);

  // zonal u against zonal e_l: the Jacobian of two zonal fields vanishes
  SpectralField uz(kL, 2);
  uz.at(3, 0) = 1.3;
  uz.at(7, 0) = -0.4;
  CHECK(std::abs(trilinear_b(uz, e2, uz, c)) <= 1e-13);

  const std::vector<SpectralField> modes = {e2, SpectralField::unit_mode(3, 0, kL, 2)};
  const ModeBoundEstimate a = estimate_mode_bound_delta(modes, c, 40, 7);
  const ModeBoundEstimate b = estimate_mode_bound_delta(modes, c, 80, 7);
  CHECK(a.delta_hat > 0.0);
  CHECK(std::abs(b.delta_hat - a.delta_hat) <= 0.05 * a.delta_hat);
  CHECK(a.delta_hat <= a.delta_analytic);
  MESSAGE("delta_hat = " << b.delta_hat << ", analytic bound = " << b.delta_analytic);
  CHECK_THROWS_AS(estimate_mode_bound_delta({}, c, 4, 1), std::invalid_argument);
}

TEST_CASE("Hoelder bound with the empirically estimated c_B") {
  const OperatorContext c = ctx();
  const double cb = estimate_c_b(c, kL, 2, 50, 1234);
  CHECK(cb > 0.0);
  MESSAGE("estimated c_B = " << cb);
  for (int s = 0; s < 20; ++s) {
    const SpectralField u = random_field(kL, 2, 7000 + 3 * s);
    const SpectralField v = random_field(kL, 2, 7001 + 3 * s);
    const SpectralField w = random_field(kL, 2, 7002 + 3 * s);
    const double bound = 1.25 * cb * std::sqrt(h_norm(u) * v_norm(u)) *
                         std::sqrt(h_norm(v) * v_norm(v)) * v_norm(w);
    CHECK(std::abs(trilinear_b(u, v, w, c)) <= bound);
  }
}
