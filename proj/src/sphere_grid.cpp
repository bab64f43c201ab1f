#include "snse/sphere_grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace snse {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Newton iteration on P_n from the Chebyshev-based initial guess.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int l = 2; l <= n; ++l) {
        const double p2 = ((2.0 * l - 1.0) * x * p1 - (l - 1.0) * p0) / l;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    // One more recurrence pass at the converged node for the weight.
    double p0 = 1.0, p1 = x;
    for (int l = 2; l <= n; ++l) {
      const double p2 = ((2.0 * l - 1.0) * x * p1 - (l - 1.0) * p0) / l;
      p0 = p1;
      p1 = p2;
    }
    pp = n * (x * p1 - p0) / (x * x - 1.0);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

LegendreTable::LegendreTable(int l_max, const std::vector<double>& mu)
    : l_max_(l_max), n_lat_(mu.size()) {
  const int L = l_max_;
  const std::size_t n_pairs = static_cast<std::size_t>(L + 1) * (L + 2) / 2;
  lam_.assign(n_pairs * n_lat_, 0.0);
  dlam_.assign(n_pairs * n_lat_, 0.0);

  const std::size_t J = n_lat_;
  std::vector<double> pmm(J, 1.0 / std::sqrt(4.0 * M_PI));

  for (int m = 0; m <= L; ++m) {
    if (m > 0) {
      // Lambda_{m,m} = -sqrt((2m+1)/(2m)) sin(theta) Lambda_{m-1,m-1}
      const double c = -std::sqrt((2.0 * m + 1.0) / (2.0 * m));
      for (std::size_t j = 0; j < J; ++j) pmm[j] *= c * std::sqrt(1.0 - mu[j] * mu[j]);
    }
    double* lam_mm = lam_.data() + offset(m, m);
    for (std::size_t j = 0; j < J; ++j) lam_mm[j] = pmm[j];

    for (int l = m + 1; l <= L; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - m * m));
      const double b =
          (l - 1 == m) ? 0.0
                       : std::sqrt(((l - 1.0) * (l - 1.0) - m * m) / (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
      const double* lm1 = lam_.data() + offset(l - 1, m);
      const double* lm2 = (l - 2 >= m) ? lam_.data() + offset(l - 2, m) : nullptr;
      double* dst = lam_.data() + offset(l, m);
      for (std::size_t j = 0; j < J; ++j) {
        dst[j] = a * (mu[j] * lm1[j] - (lm2 != nullptr ? b * lm2[j] : 0.0));
      }
    }

    // (1-mu^2) dLambda_lm/dmu = (l+1) eps_lm Lambda_{l-1,m} - l eps_{l+1,m} Lambda_{l+1,m},
    // eps_lm = sqrt((l^2-m^2)/(4l^2-1)); Lambda_{L+1,m} is formed on the fly.
    for (int l = m; l <= L; ++l) {
      const double eps_l = std::sqrt((static_cast<double>(l) * l - m * m) / (4.0 * l * l - 1.0));
      const double eps_lp =
          std::sqrt(((l + 1.0) * (l + 1.0) - m * m) / (4.0 * (l + 1.0) * (l + 1.0) - 1.0));
      const double* lm1 = (l - 1 >= m) ? lam_.data() + offset(l - 1, m) : nullptr;
      const double* lcur = lam_.data() + offset(l, m);
      double* dst = dlam_.data() + offset(l, m);
      if (l + 1 <= L) {
        const double* lp1 = lam_.data() + offset(l + 1, m);
        for (std::size_t j = 0; j < J; ++j) {
          dst[j] = (lm1 != nullptr ? (l + 1.0) * eps_l * lm1[j] : 0.0) -
                   static_cast<double>(l) * eps_lp * lp1[j];
        }
      } else {
        const double a = std::sqrt((4.0 * (l + 1.0) * (l + 1.0) - 1.0) /
                                   ((l + 1.0) * (l + 1.0) - m * m));
        const double b = std::sqrt((static_cast<double>(l) * l - m * m) / (4.0 * l * l - 1.0));
        for (std::size_t j = 0; j < J; ++j) {
          const double lam_lp1 = a * (mu[j] * lcur[j] - (lm1 != nullptr ? b * lm1[j] : 0.0));
          dst[j] = (lm1 != nullptr ? (l + 1.0) * eps_l * lm1[j] : 0.0) -
                   static_cast<double>(l) * eps_lp * lam_lp1;
        }
      }
    }
  }
}

SphereGrid::SphereGrid(int n_lat, int n_lon, int l_max, bool dealias)
    : n_lat_(n_lat), n_lon_(n_lon), l_max_(l_max), dealias_(dealias) {
  if (l_max < 1) throw std::invalid_argument("SphereGrid: l_max must be >= 1");
  if (n_lat < l_max + 1 || n_lon < 2 * l_max + 1) {
    throw std::invalid_argument("SphereGrid: grid " + std::to_string(n_lat) + "x" +
                                std::to_string(n_lon) + " too coarse for l_max=" +
                                std::to_string(l_max));
  }
  if (dealias_) {
    const int lat_need = (3 * (l_max + 1) + 1) / 2;
    const int lon_need = 3 * l_max + 1;
    if (n_lat < lat_need || n_lon < lon_need) {
      throw std::invalid_argument(
          "SphereGrid: dealiasing needs n_lat >= " + std::to_string(lat_need) +
          " and n_lon >= " + std::to_string(lon_need));
    }
  }
  gauss_legendre(n_lat_, mu_, w_);
  sin_th_.resize(mu_.size());
  for (std::size_t j = 0; j < mu_.size(); ++j) sin_th_[j] = std::sqrt(1.0 - mu_[j] * mu_[j]);
  table_ = std::make_unique<LegendreTable>(l_max_ + 1, mu_);

  // Plans are created once here; the fftw_execute_dft variants are re-entrant.
  std::vector<double> row(static_cast<std::size_t>(n_lon_), 0.0);
  std::vector<fftw_complex> spec(static_cast<std::size_t>(n_lon_ / 2 + 1));
  plan_c2r_ = fftw_plan_dft_c2r_1d(n_lon_, spec.data(), row.data(), FFTW_ESTIMATE);
  plan_r2c_ = fftw_plan_dft_r2c_1d(n_lon_, row.data(), spec.data(), FFTW_ESTIMATE);
  if (plan_c2r_ == nullptr || plan_r2c_ == nullptr) {
    throw std::runtime_error("SphereGrid: FFTW plan creation failed");
  }
}

SphereGrid::~SphereGrid() {
  if (plan_c2r_ != nullptr) fftw_destroy_plan(plan_c2r_);
  if (plan_r2c_ != nullptr) fftw_destroy_plan(plan_r2c_);
}

double SphereGrid::lon(int k) const { return 2.0 * M_PI * k / n_lon_; }

void SphereGrid::row_c2r(const fftw_complex* spec, double* row) const {
  // c2r destroys its input, so copy into a scratch buffer first.
  std::vector<fftw_complex> tmp(static_cast<std::size_t>(n_lon_ / 2 + 1));
  for (std::size_t i = 0; i < tmp.size(); ++i) {
    tmp[i][0] = spec[i][0];
    tmp[i][1] = spec[i][1];
  }
  fftw_execute_dft_c2r(plan_c2r_, tmp.data(), row);
}

void SphereGrid::row_r2c(const double* row, fftw_complex* spec) const {
  // r2c with FFTW_ESTIMATE leaves the input intact but is declared non-const.
  fftw_execute_dft_r2c(plan_r2c_, const_cast<double*>(row), spec);
}

}  // namespace snse
