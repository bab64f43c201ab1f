// The three operators of the model equation: Stokes A (diagonal), Coriolis C
// (imaginary diagonal), and the advection nonlinearity B with its trilinear
// form b(u,v,w), plus the empirical constants delta and c_B.
#pragma once

#include <vector>

#include "snse/transforms.hpp"

namespace snse {

struct OperatorContext {
  const SphereGrid* grid = nullptr;
  double rotation = 0.0;   // Omega >= 0
  double viscosity = 1.0;  // nu > 0
  StokesSpectrum spectrum = StokesSpectrum::stokes;

  void validate() const;
};

// A: mode-wise multiplication by stokes_eig(l).
SpectralField apply_A(const SpectralField& f, const OperatorContext& ctx);

// C: mode (l, m) times -2 Omega i m / (l(l+1)); skew-adjoint in H, annihilates
// zonal fields.
SpectralField apply_C(const SpectralField& f, const OperatorContext& ctx);

// Coriolis spectral multiplier (purely imaginary).
std::complex<double> coriolis_multiplier(int l, int m, double rotation);

// Advection of the vorticity of v by the flow of u: curl((u.grad) v) in
// vorticity coefficients, projected to [l_min, l_max]. Computed by advecting
// the Cartesian velocity components of v with the stream function of u
// (pseudo-spectral scalar Jacobians) and analyzing the rotational part.
SpectralField bilinear_B(const SpectralField& u, const SpectralField& v,
                         const OperatorContext& ctx);

// Self-advection used by the integrator: for u = v the operator reduces to
// the scalar Jacobian J(psi_u, omega_u), which needs no vector analysis and
// keeps the quadrature polynomial-exact.
SpectralField self_advection(const SpectralField& u, const OperatorContext& ctx);

// b(u,v,w) = (B(u,v), w)_H, evaluated in the skew-symmetrized grid form
// (1/2)[S(u,v,w) - S(u,w,v)], S = sum_j int J(psi_u, v_j) w_j. The
// skew-symmetrization makes b(u,v,v) vanish to roundoff by construction.
double trilinear_b(const SpectralField& u, const SpectralField& v, const SpectralField& w,
                   const OperatorContext& ctx);

struct ModeBoundEstimate {
  double delta_hat = 0.0;      // 1.1 x max ratio |<B(u,e_l),u>| / |u|^2 over samples
  double delta_analytic = 0.0; // sup over the grid of the Frobenius gradient bound
  std::vector<double> per_mode_ratio;
};

// Empirical estimate of the mode bound delta of |<B(u,e_l),u>| <= delta |u|^2
// for unit-H-norm eigenmode fields e_l, with the analytic gradient bound as a
// cross-check (the e_l are Lipschitz, so the sup is finite).
ModeBoundEstimate estimate_mode_bound_delta(const std::vector<SpectralField>& noise_modes,
                                            const OperatorContext& ctx, int n_samples,
                                            std::uint64_t seed);

// Empirical Ladyzhenskaya-type constant: max over random triples of
// |b(u,v,w)| / (|u|^(1/2) |u|_V^(1/2) |v|^(1/2) |v|_V^(1/2) |w|_V).
double estimate_c_b(const OperatorContext& ctx, int l_max, int l_min, int n_samples,
                    std::uint64_t seed);

// Gaussian random field with unit-variance coefficient decay l^(-decay),
// shared by estimators and tests.
SpectralField random_field(int l_max, int l_min, std::uint64_t seed, double decay = 1.0);

}  // namespace snse
