// Spectral <-> grid transforms. OpenMP-parallel over latitude bands (grid
// direction) and coefficient columns (spectral direction); every loop writes
// disjoint slots, so results are bit-identical for any thread count.
#pragma once

#include <vector>

#include "snse/spectral_field.hpp"
#include "snse/sphere_grid.hpp"

namespace snse {

// Real grid values, row-major n_lat x n_lon.
using GridField = std::vector<double>;

enum class SynthKind {
  values,   // f
  dlon,     // df/dlambda
  dmu_w,    // (1 - mu^2) df/dmu
};

// Pointwise values of the truncated expansion of the stored coefficients
// (or a derivative of it).
GridField synthesize_kind(const SpectralField& f, const SphereGrid& g, SynthKind kind);
inline GridField synthesize(const SpectralField& f, const SphereGrid& g) {
  return synthesize_kind(f, g, SynthKind::values);
}

// Harmonic analysis by exact Gauss-Legendre x FFT quadrature. `l_min` content
// below the floor is projected away; pass l_min = 0 via analyze_scalar to
// keep everything (used for intermediate scalars like velocity components).
SpectralField analyze(const GridField& vals, const SphereGrid& g, int l_max, int l_min);
SpectralField analyze_scalar(const GridField& vals, const SphereGrid& g, int l_max);

// Orthonormal-frame velocity components of the stream-function flow of a
// vorticity field: u_theta = -(1/sin) d_lon psi, u_lon = -(1/sin) (1-mu^2) d_mu psi.
struct VelocityGrids {
  GridField u_theta;
  GridField u_lon;
};
VelocityGrids synthesize_velocity(const SpectralField& vorticity, const SphereGrid& g);

// Cartesian components of the same velocity field (smooth scalars on the
// sphere, degree-preserving).
struct CartesianVelocity {
  GridField x, y, z;
};
CartesianVelocity synthesize_velocity_cartesian(const SpectralField& vorticity,
                                                const SphereGrid& g);

// Vorticity (rotational-part) analysis of a tangent vector field given by
// orthonormal-frame grid components. Realizes the Leray projection: the
// divergent part is simply never looked at.
SpectralField analyze_vorticity(const GridField& t_theta, const GridField& t_lon,
                                const SphereGrid& g, int l_max, int l_min);

// Spherical Jacobian J(a, b) = d_lon(a) d_mu(b) - d_mu(a) d_lon(b) of two
// scalar expansions, evaluated pointwise on the (dealiased) grid.
GridField jacobian(const SpectralField& a, const SpectralField& b, const SphereGrid& g);

// Quadrature of a grid field against the sphere measure.
double integrate(const GridField& vals, const SphereGrid& g);

}  // namespace snse
