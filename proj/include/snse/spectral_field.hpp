// Divergence-free velocity states on the unit sphere, held as complex
// vorticity coefficients over spherical-harmonic modes.
//
// Only m >= 0 is stored; the represented field is real, so
// omega_{l,-m} = (-1)^m conj(omega_{l,m}). All Sobolev norms are norms of the
// velocity field u = k x grad(psi) with psi_lm = -omega_lm / (l(l+1)); the
// 1/(l(l+1)) conversion lives inside the norm routines so callers never mix
// vorticity and velocity conventions.
#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace snse {

enum class StokesSpectrum {
  stokes,     // lambda_l = l(l+1) - 2, the default -P(Laplacian + 2 Ric) spectrum
  laplacian,  // lambda_l = l(l+1)
};

// Eigenvalue of the Stokes operator at degree l; throws std::domain_error for
// l below the working floor l_min.
double stokes_eig(int l, StokesSpectrum spectrum = StokesSpectrum::stokes, int l_min = 2);

class SpectralField {
 public:
  SpectralField() = default;
  SpectralField(int l_max, int l_min);

  int l_max() const { return l_max_; }
  int l_min() const { return l_min_; }
  const std::string& tag() const { return tag_; }

  std::complex<double>& at(int l, int m) { return c_[index(l, m)]; }
  const std::complex<double>& at(int l, int m) const { return c_[index(l, m)]; }

  std::size_t coeff_count() const { return c_.size(); }
  std::complex<double>* data() { return c_.data(); }
  const std::complex<double>* data() const { return c_.data(); }

  // Zeroes l < l_min, strips the imaginary part at m = 0. Applied by every
  // operation that could produce content outside the working subspace.
  void project();

  bool same_shape(const SpectralField& other) const {
    return l_max_ == other.l_max_ && l_min_ == other.l_min_;
  }

  SpectralField& operator+=(const SpectralField& rhs);
  SpectralField& operator-=(const SpectralField& rhs);
  SpectralField& operator*=(double s);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(SpectralField a, double s) { return a *= s; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

  // Unit-H-norm single-mode field e_{l,m} (the Stokes eigenfunctions used as
  // noise directions): vorticity amplitude sqrt(l(l+1)) at m = 0, or
  // sqrt(l(l+1)/2) shared across +-m for m > 0.
  static SpectralField unit_mode(int l, int m, int l_max, int l_min);

  std::size_t index(int l, int m) const;

 private:
  int l_max_ = 0;
  int l_min_ = 2;
  std::string tag_ = "vorticity";
  std::vector<std::complex<double>> c_;
};

// |u|^2   = sum |omega_lm|^2 / (l(l+1))
// |u|_V^2 = sum lambda_l |omega_lm|^2 / (l(l+1))
// |Au|^2  = sum lambda_l^2 |omega_lm|^2 / (l(l+1))
double h_norm2(const SpectralField& f, StokesSpectrum spectrum = StokesSpectrum::stokes);
double v_norm2(const SpectralField& f, StokesSpectrum spectrum = StokesSpectrum::stokes);
double a_norm2(const SpectralField& f, StokesSpectrum spectrum = StokesSpectrum::stokes);
double h_norm(const SpectralField& f);
double v_norm(const SpectralField& f, StokesSpectrum spectrum = StokesSpectrum::stokes);
double a_norm(const SpectralField& f, StokesSpectrum spectrum = StokesSpectrum::stokes);

// Real H inner product of two vorticity-coefficient fields.
double inner_h(const SpectralField& a, const SpectralField& b);

// Enstrophy (half the squared L2 norm of vorticity) and energy (half |u|^2).
double energy(const SpectralField& f);
double enstrophy(const SpectralField& f);

// Snapshot format: JSON header {l_max, l_min, time, tag} plus base64-coded
// little-endian coefficient doubles. CSV dump: columns l, m_z, re, im.
void write_snapshot(std::ostream& os, const SpectralField& f, double time);
SpectralField read_snapshot(std::istream& is, double* time_out = nullptr);
void write_spectral_csv(std::ostream& os, const SpectralField& f);

}  // namespace snse
