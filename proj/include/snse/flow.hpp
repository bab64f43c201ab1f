// Time integration of the transformed random PDE
//   d+v/dt = -nu A v - C v - B(u,u) + f + alpha z,   u = v + z,
// the cocycle flow phi(t,omega)x = v(t; x - z(0)) + z(t), and the
// per-trajectory energy ledger with the Gronwall-inequality check.
#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "snse/operators.hpp"
#include "snse/ou.hpp"

namespace snse {

struct ModelConfig {
  int l_max = 31;
  int l_min = 2;
  int n_lat = 48;
  int n_lon = 96;
  double nu = 1.0;
  double rotation = 2.0;
  double beta = 1.5;
  double alpha = 0.0;
  std::vector<NoiseMode> noise_modes;
  SpectralField forcing;  // zero when default-constructed with wrong shape; see forcing_field()
  double dt = 1e-3;
  bool dealias = true;
  StokesSpectrum spectrum = StokesSpectrum::stokes;
  double c = 0.25;        // Young constant, 1/lambda_1
  double c_prime = 0.5;   // lambda_1 / 8
  double delta = 1.0;     // mode bound of |<B(u,e_l),u>| <= delta |u|^2
  double c_b = 0.5;       // trilinear-form constant
  std::uint64_t seed = 1;
  int path_substeps = 1;  // increments per solver step (default one)

  double lambda1() const { return stokes_eig(l_min, spectrum, l_min); }
  OUParams ou_params() const;
  std::vector<StableParams> stable_params() const;
  GammaConstants gamma_constants() const;
  SpectralField forcing_field() const;  // forcing resized/projected to the truncation
  void validate() const;                // throws on the first inconsistency
};

// Heavy-tailed jumps can excite arbitrarily large states; a diverging
// trajectory is a reported outcome, not a crash.
struct BlowupError : std::runtime_error {
  double time;
  explicit BlowupError(double t)
      : std::runtime_error("trajectory blow-up at t = " + std::to_string(t)), time(t) {}
};

struct LedgerRow {
  double t = 0.0;
  double v_h2 = 0.0;   // |v|^2
  double v_v2 = 0.0;   // |v|_V^2
  double v_a2 = 0.0;   // |Av|^2
  double gamma = 0.0;
  double p = 0.0;
  double q = 0.0;
  double gronwall_rhs = 0.0;
  bool violated = false;
};

struct EnergyLedger {
  std::vector<LedgerRow> rows;
  int violation_count() const;
};

// z-side quantities along a window (member-independent).
struct ZRow {
  double t = 0.0;
  double sum_abs = 0.0;  // sum_l |z_l|
  double h2 = 0.0;       // |z|^2
  double v2 = 0.0;       // |z|_V^2
  double a2 = 0.0;       // |Az|^2
  double gamma = 0.0;
  double p = 0.0;
  double q = 0.0;
};

// Precomputed ETD-RK2 stepper. The linear part exp(-(nu A + C) dt) is exact
// per mode; the nonlinear part -B(u,u) + f + alpha z gets the second-order
// exponential quadrature (Cox-Matthews coefficients phi_1, phi_2).
class FlowEngine {
 public:
  FlowEngine(const ModelConfig& cfg, const SphereGrid& grid);

  const ModelConfig& config() const { return cfg_; }
  const SphereGrid& grid() const { return grid_; }

  // One step of (v, z) over [z.time, z.time + dt]; v and z must be synchronous.
  void step(SpectralField& v, OUState& z, const NoisePath& path) const;

  // Nonlinear term N(v, z) = -B(u,u) + f + alpha z at fixed z.
  SpectralField nonlinear(const SpectralField& v, const SpectralField& z_field) const;

  // Stationary z at time t via the certified burn-in from the path start.
  OUState stationary_z(const NoisePath& path, double t) const;

  // u(t) = v(t) + z(t) from v(0) = x - z(0); t = 0 returns x identically.
  SpectralField phi(double t, const NoisePath& path, const SpectralField& x) const;

  // Residual |phi(t+s,w)x - phi(t,theta_s w) phi(s,w)x|_H / (1 + |phi(t+s,w)x|_H).
  double verify_cocycle(double t, double s, const NoisePath& path, const SpectralField& x) const;

  struct RunResult {
    SpectralField v_final;
    EnergyLedger ledger;
    bool blew_up = false;
    double blowup_time = 0.0;
  };

  // Integrate v over [t0, t1] from v(t0) = v0, recording the ledger and the
  // Gronwall right-hand side |v(t0)|^2 e^{int gamma} + int e^{int gamma} 2p.
  RunResult run_with_ledger(double t0, double t1, const NoisePath& path,
                            const SpectralField& v0) const;

  // z-side ledger over [t0, t1] (shared by every ensemble member).
  std::vector<ZRow> z_trajectory(const NoisePath& path, double t0, double t1) const;

 private:
  SpectralField zero_field() const { return SpectralField(cfg_.l_max, cfg_.l_min); }
  void check_finite(const SpectralField& v, double t) const;
  void check_path(const NoisePath& path) const;

  ModelConfig cfg_;
  const SphereGrid& grid_;
  OUParams ou_;
  SpectralField forcing_;
  std::vector<std::complex<double>> etd_decay_;  // exp(-g dt) per coefficient
  std::vector<std::complex<double>> etd_phi1_;   // dt phi1(-g dt)
  std::vector<std::complex<double>> etd_phi2_;   // dt phi2(-g dt)
};

void write_trajectory_csv(std::ostream& os, const EnergyLedger& ledger,
                          const std::vector<double>& u_energy,
                          const std::vector<double>& u_enstrophy);

}  // namespace snse
