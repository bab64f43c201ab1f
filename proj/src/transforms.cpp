#include "snse/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace snse {

namespace {

using cplx = std::complex<double>;

void check_grid(const SpectralField& f, const SphereGrid& g) {
  if (f.l_max() > g.l_max()) {
    throw std::invalid_argument("transforms: field truncation exceeds grid l_max");
  }
}

// Fourier columns G[m][j] for m = 0..l_max of a Legendre synthesis; the
// spectral premultiplier distinguishes values / d_lon / weighted d_mu.
std::vector<cplx> legendre_columns(const SpectralField& f, const SphereGrid& g, SynthKind kind) {
  const int L = f.l_max();
  const int J = g.n_lat();
  std::vector<cplx> cols(static_cast<std::size_t>(L + 1) * J, cplx(0.0, 0.0));
  const auto& tab = g.table();
#pragma omp parallel for schedule(static)
  for (int m = 0; m <= L; ++m) {
    cplx* col = cols.data() + static_cast<std::size_t>(m) * J;
    for (int l = std::max(m, f.l_min()); l <= L; ++l) {
      cplx c = f.at(l, m);
      if (c == cplx(0.0, 0.0)) continue;
      if (kind == SynthKind::dlon) c *= cplx(0.0, static_cast<double>(m));
      const double* blk =
          (kind == SynthKind::dmu_w) ? tab.dlam_block(l, m) : tab.lam_block(l, m);
      for (int j = 0; j < J; ++j) {
        col[j] += c * blk[j];
      }
    }
  }
  return cols;
}

GridField columns_to_grid(const std::vector<cplx>& cols, int l_max, const SphereGrid& g) {
  const int J = g.n_lat();
  const int K = g.n_lon();
  const int nspec = K / 2 + 1;
  GridField out(g.grid_size());
#pragma omp parallel
  {
    std::vector<fftw_complex> spec(static_cast<std::size_t>(nspec));
#pragma omp for schedule(static)
    for (int j = 0; j < J; ++j) {
      for (int m = 0; m < nspec; ++m) {
        if (m <= l_max) {
          const cplx v = cols[static_cast<std::size_t>(m) * J + j];
          spec[m][0] = v.real();
          spec[m][1] = v.imag();
        } else {
          spec[m][0] = 0.0;
          spec[m][1] = 0.0;
        }
      }
      g.row_c2r(spec.data(), out.data() + static_cast<std::size_t>(j) * K);
    }
  }
  return out;
}

// Forward FFT of every latitude row, scaled to Fourier coefficients
// integral f e^(-im lon) dlon; returns columns G[m][j] for m = 0..l_max.
std::vector<cplx> grid_to_columns(const GridField& vals, const SphereGrid& g, int l_max) {
  const int J = g.n_lat();
  const int K = g.n_lon();
  const int nspec = K / 2 + 1;
  if (vals.size() != g.grid_size()) {
    throw std::invalid_argument("transforms: grid value array has wrong size");
  }
  std::vector<cplx> cols(static_cast<std::size_t>(l_max + 1) * J);
  const double scale = 2.0 * M_PI / K;
#pragma omp parallel
  {
    std::vector<fftw_complex> spec(static_cast<std::size_t>(nspec));
#pragma omp for schedule(static)
    for (int j = 0; j < J; ++j) {
      g.row_r2c(vals.data() + static_cast<std::size_t>(j) * K, spec.data());
      for (int m = 0; m <= l_max; ++m) {
        cols[static_cast<std::size_t>(m) * J + j] =
            scale * cplx(spec[m][0], spec[m][1]);
      }
    }
  }
  return cols;
}

}  // namespace

GridField synthesize_kind(const SpectralField& f, const SphereGrid& g, SynthKind kind) {
  check_grid(f, g);
  const auto cols = legendre_columns(f, g, kind);
  return columns_to_grid(cols, f.l_max(), g);
}

SpectralField analyze(const GridField& vals, const SphereGrid& g, int l_max, int l_min) {
  if (l_max > g.l_max()) {
    throw std::invalid_argument("transforms: analysis truncation exceeds grid l_max");
  }
  const auto cols = grid_to_columns(vals, g, l_max);
  SpectralField f(l_max, std::max(l_min, 1));
  const int J = g.n_lat();
  const auto& tab = g.table();
#pragma omp parallel for schedule(static)
  for (int m = 0; m <= l_max; ++m) {
    const cplx* col = cols.data() + static_cast<std::size_t>(m) * J;
    for (int l = std::max(m, 1); l <= l_max; ++l) {
      const double* blk = tab.lam_block(l, m);
      cplx acc(0.0, 0.0);
      for (int j = 0; j < J; ++j) acc += g.weight(j) * blk[j] * col[j];
      f.at(l, m) = acc;
    }
  }
  f.project();
  return f;
}

SpectralField analyze_scalar(const GridField& vals, const SphereGrid& g, int l_max) {
  if (l_max > g.l_max() + 1) {
    throw std::invalid_argument("transforms: scalar analysis exceeds table degree");
  }
  const auto cols = grid_to_columns(vals, g, l_max);
  SpectralField f(l_max, 1);
  const int J = g.n_lat();
  const auto& tab = g.table();
#pragma omp parallel for schedule(static)
  for (int m = 0; m <= l_max; ++m) {
    const cplx* col = cols.data() + static_cast<std::size_t>(m) * J;
    for (int l = std::max(m, 1); l <= l_max; ++l) {
      const double* blk = tab.lam_block(l, m);
      cplx acc(0.0, 0.0);
      for (int j = 0; j < J; ++j) acc += g.weight(j) * blk[j] * col[j];
      f.at(l, m) = acc;
    }
  }
  // No l_min projection and no reality cleanup beyond m = 0 (scalars keep
  // every degree); the l = 0 mean is not representable and is dropped.
  for (int l = 1; l <= l_max; ++l) f.at(l, 0).imag(0.0);
  return f;
}

VelocityGrids synthesize_velocity(const SpectralField& vorticity, const SphereGrid& g) {
  check_grid(vorticity, g);
  // psi_lm = -omega_lm / (l(l+1))
  SpectralField psi = vorticity;
  for (int m = 0; m <= psi.l_max(); ++m) {
    for (int l = std::max(m, psi.l_min()); l <= psi.l_max(); ++l) {
      psi.at(l, m) /= -static_cast<double>(l) * (l + 1);
    }
  }
  const GridField dlon = synthesize_kind(psi, g, SynthKind::dlon);
  const GridField dmu = synthesize_kind(psi, g, SynthKind::dmu_w);
  VelocityGrids v{GridField(g.grid_size()), GridField(g.grid_size())};
  const int J = g.n_lat();
  const int K = g.n_lon();
#pragma omp parallel for schedule(static)
  for (int j = 0; j < J; ++j) {
    const double inv_sin = 1.0 / g.sin_theta(j);
    for (int k = 0; k < K; ++k) {
      const std::size_t i = static_cast<std::size_t>(j) * K + k;
      v.u_theta[i] = -dlon[i] * inv_sin;
      v.u_lon[i] = -dmu[i] * inv_sin;
    }
  }
  return v;
}

CartesianVelocity synthesize_velocity_cartesian(const SpectralField& vorticity,
                                                const SphereGrid& g) {
  const VelocityGrids v = synthesize_velocity(vorticity, g);
  CartesianVelocity c{GridField(g.grid_size()), GridField(g.grid_size()), GridField(g.grid_size())};
  const int J = g.n_lat();
  const int K = g.n_lon();
#pragma omp parallel for schedule(static)
  for (int j = 0; j < J; ++j) {
    const double mu = g.mu(j);
    const double st = g.sin_theta(j);
    for (int k = 0; k < K; ++k) {
      const std::size_t i = static_cast<std::size_t>(j) * K + k;
      const double cl = std::cos(g.lon(k));
      const double sl = std::sin(g.lon(k));
      // e_theta = (mu cos, mu sin, -sin_theta), e_lon = (-sin, cos, 0)
      c.x[i] = v.u_theta[i] * mu * cl - v.u_lon[i] * sl;
      c.y[i] = v.u_theta[i] * mu * sl + v.u_lon[i] * cl;
      c.z[i] = -v.u_theta[i] * st;
    }
  }
  return c;
}

SpectralField analyze_vorticity(const GridField& t_theta, const GridField& t_lon,
                                const SphereGrid& g, int l_max, int l_min) {
  if (l_max > g.l_max()) {
    throw std::invalid_argument("transforms: analysis truncation exceeds grid l_max");
  }
  const int J = g.n_lat();
  const int K = g.n_lon();
  GridField a(g.grid_size()), b(g.grid_size());
#pragma omp parallel for schedule(static)
  for (int j = 0; j < J; ++j) {
    const double inv_sin = 1.0 / g.sin_theta(j);
    for (int k = 0; k < K; ++k) {
      const std::size_t i = static_cast<std::size_t>(j) * K + k;
      a[i] = t_lon[i] * inv_sin;
      b[i] = t_theta[i] * inv_sin;
    }
  }
  const auto ca = grid_to_columns(a, g, l_max);
  const auto cb = grid_to_columns(b, g, l_max);
  SpectralField f(l_max, l_min);
  const auto& tab = g.table();
#pragma omp parallel for schedule(static)
  for (int m = 0; m <= l_max; ++m) {
    const cplx* cola = ca.data() + static_cast<std::size_t>(m) * J;
    const cplx* colb = cb.data() + static_cast<std::size_t>(m) * J;
    for (int l = std::max(m, f.l_min()); l <= l_max; ++l) {
      const double* dblk = tab.dlam_block(l, m);
      const double* lblk = tab.lam_block(l, m);
      cplx acc(0.0, 0.0);
      for (int j = 0; j < J; ++j) {
        // zeta_lm = int [T_lon D_lm / sin - i m T_theta Lam_lm / sin] e^(-im lon)
        acc += g.weight(j) * (cola[j] * dblk[j] - cplx(0.0, m) * colb[j] * lblk[j]);
      }
      f.at(l, m) = acc;
    }
  }
  f.project();
  return f;
}

GridField jacobian(const SpectralField& a, const SpectralField& b, const SphereGrid& g) {
  check_grid(a, g);
  check_grid(b, g);
  const GridField a_lon = synthesize_kind(a, g, SynthKind::dlon);
  const GridField a_mu = synthesize_kind(a, g, SynthKind::dmu_w);
  const GridField b_lon = synthesize_kind(b, g, SynthKind::dlon);
  const GridField b_mu = synthesize_kind(b, g, SynthKind::dmu_w);
  GridField out(g.grid_size());
  const int J = g.n_lat();
  const int K = g.n_lon();
#pragma omp parallel for schedule(static)
  for (int j = 0; j < J; ++j) {
    const double inv = 1.0 / (g.sin_theta(j) * g.sin_theta(j));
    for (int k = 0; k < K; ++k) {
      const std::size_t i = static_cast<std::size_t>(j) * K + k;
      out[i] = (a_lon[i] * b_mu[i] - a_mu[i] * b_lon[i]) * inv;
    }
  }
  return out;
}

double integrate(const GridField& vals, const SphereGrid& g) {
  if (vals.size() != g.grid_size()) {
    throw std::invalid_argument("integrate: grid value array has wrong size");
  }
  const int J = g.n_lat();
  const int K = g.n_lon();
  const double dlon = 2.0 * M_PI / K;
  double acc = 0.0;
  for (int j = 0; j < J; ++j) {
    double row = 0.0;
    for (int k = 0; k < K; ++k) row += vals[static_cast<std::size_t>(j) * K + k];
    acc += g.weight(j) * row;
  }
  return acc * dlon;
}

}  // namespace snse
