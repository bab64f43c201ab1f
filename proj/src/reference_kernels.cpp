#include "snse/reference_kernels.hpp"

#include <algorithm>
#include <cmath>

namespace snse::ref {

double legendre_lm(int l, int m, double mu) {
  double pmm = 1.0 / std::sqrt(4.0 * M_PI);
  for (int k = 1; k <= m; ++k) {
    pmm *= -std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * std::sqrt(1.0 - mu * mu);
  }
  if (l == m) return pmm;
  double p1 = pmm;
  double p2 = 0.0;
  for (int ll = m + 1; ll <= l; ++ll) {
    const double a = std::sqrt((4.0 * ll * ll - 1.0) / (static_cast<double>(ll) * ll - m * m));
    const double b = (ll - 1 == m)
                         ? 0.0
                         : std::sqrt(((ll - 1.0) * (ll - 1.0) - m * m) /
                                     (4.0 * (ll - 1.0) * (ll - 1.0) - 1.0));
    const double p = a * (mu * p1 - b * p2);
    p2 = p1;
    p1 = p;
  }
  return p1;
}

GridField synthesize(const SpectralField& f, const SphereGrid& g) {
  GridField out(g.grid_size(), 0.0);
  for (int j = 0; j < g.n_lat(); ++j) {
    for (int k = 0; k < g.n_lon(); ++k) {
      double v = 0.0;
      for (int m = 0; m <= f.l_max(); ++m) {
        for (int l = std::max(m, f.l_min()); l <= f.l_max(); ++l) {
          const double lam = legendre_lm(l, m, g.mu(j));
          const auto c = f.at(l, m);
          const double phase = m * g.lon(k);
          const double term = c.real() * std::cos(phase) - c.imag() * std::sin(phase);
          v += (m == 0 ? 1.0 : 2.0) * lam * term;
        }
      }
      out[static_cast<std::size_t>(j) * g.n_lon() + k] = v;
    }
  }
  return out;
}

SpectralField analyze(const GridField& vals, const SphereGrid& g, int l_max, int l_min) {
  SpectralField f(l_max, l_min);
  const double dlon = 2.0 * M_PI / g.n_lon();
  for (int m = 0; m <= l_max; ++m) {
    for (int l = std::max(m, l_min); l <= l_max; ++l) {
      std::complex<double> acc(0.0, 0.0);
      for (int j = 0; j < g.n_lat(); ++j) {
        const double lam = legendre_lm(l, m, g.mu(j));
        std::complex<double> row(0.0, 0.0);
        for (int k = 0; k < g.n_lon(); ++k) {
          const double phase = m * g.lon(k);
          row += vals[static_cast<std::size_t>(j) * g.n_lon() + k] *
                 std::complex<double>(std::cos(phase), -std::sin(phase));
        }
        acc += g.weight(j) * lam * row;
      }
      f.at(l, m) = acc * dlon;
    }
  }
  f.project();
  return f;
}

}  // namespace snse::ref
