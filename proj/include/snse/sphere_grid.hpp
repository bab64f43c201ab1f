// Gauss-Legendre x equispaced-longitude grid with precomputed associated
// Legendre tables and FFTW plans for the longitude transform.
#pragma once

#include <fftw3.h>

#include <cstddef>
#include <memory>
#include <vector>

namespace snse {

// Fully normalized associated Legendre functions Lambda_lm(mu) with
// Condon-Shortley phase: Y_lm = Lambda_lm(cos theta) e^(i m lambda),
// integral of |Y_lm|^2 over the unit sphere = 1.
class LegendreTable {
 public:
  LegendreTable(int l_max, const std::vector<double>& mu);

  int l_max() const { return l_max_; }
  // Lambda_lm at latitude node j.
  double lam(int j, int l, int m) const { return lam_[offset(l, m) + static_cast<std::size_t>(j)]; }
  // D_lm = (1 - mu^2) d Lambda_lm / d mu at latitude node j.
  double dlam(int j, int l, int m) const {
    return dlam_[offset(l, m) + static_cast<std::size_t>(j)];
  }

  const double* lam_block(int l, int m) const { return lam_.data() + offset(l, m); }
  const double* dlam_block(int l, int m) const { return dlam_.data() + offset(l, m); }

 private:
  // Blocks ordered by m, then l >= m; each block holds all latitudes.
  std::size_t offset(int l, int m) const {
    const std::size_t L = static_cast<std::size_t>(l_max_);
    const std::size_t mm = static_cast<std::size_t>(m);
    const std::size_t block = mm * (L + 1) - mm * (mm - 1) / 2 + static_cast<std::size_t>(l - m);
    return block * n_lat_;
  }

  int l_max_;
  std::size_t n_lat_;
  std::vector<double> lam_;
  std::vector<double> dlam_;
};

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

class SphereGrid {
 public:
  // Throws when the grid cannot represent fields truncated at l_max; with
  // dealias = true the 3/2-rule bounds are enforced so quadratic products
  // are alias-free.
  SphereGrid(int n_lat, int n_lon, int l_max, bool dealias = true);
  ~SphereGrid();

  SphereGrid(const SphereGrid&) = delete;
  SphereGrid& operator=(const SphereGrid&) = delete;

  int n_lat() const { return n_lat_; }
  int n_lon() const { return n_lon_; }
  int l_max() const { return l_max_; }
  bool dealias() const { return dealias_; }

  double mu(int j) const { return mu_[j]; }            // cos(colatitude)
  double weight(int j) const { return w_[j]; }         // Gauss weight
  double sin_theta(int j) const { return sin_th_[j]; }
  double lon(int k) const;

  // Legendre tables extend one degree past l_max (derivative recurrences and
  // velocity synthesis reach l_max + 1).
  const LegendreTable& table() const { return *table_; }

  // Longitude FFT helpers; rows are length n_lon real, spectra n_lon/2+1
  // complex. Thread-safe after construction.
  void row_c2r(const fftw_complex* spec, double* row) const;
  void row_r2c(const double* row, fftw_complex* spec) const;

  std::size_t grid_size() const {
    return static_cast<std::size_t>(n_lat_) * static_cast<std::size_t>(n_lon_);
  }

 private:
  int n_lat_;
  int n_lon_;
  int l_max_;
  bool dealias_;
  std::vector<double> mu_, w_, sin_th_;
  std::unique_ptr<LegendreTable> table_;
  fftw_plan plan_c2r_ = nullptr;
  fftw_plan plan_r2c_ = nullptr;
};

}  // namespace snse
