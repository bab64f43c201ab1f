#include "snse/flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace snse {

OUParams ModelConfig::ou_params() const {
  OUParams p;
  p.modes = noise_modes;
  p.nu = nu;
  p.alpha = alpha;
  p.rotation = rotation;
  p.spectrum = spectrum;
  p.l_min = l_min;
  return p;
}

std::vector<StableParams> ModelConfig::stable_params() const {
  std::vector<StableParams> out;
  out.reserve(noise_modes.size());
  for (const auto& nm : noise_modes) {
    StableParams sp;
    sp.beta = beta;
    sp.scale = nm.sigma;
    out.push_back(sp);
  }
  return out;
}

GammaConstants ModelConfig::gamma_constants() const {
  GammaConstants k;
  k.lambda1 = lambda1();
  k.delta = delta;
  k.c = c;
  k.alpha = alpha;
  k.nu = nu;
  k.f_h2 = h_norm2(forcing_field());
  return k;
}

SpectralField ModelConfig::forcing_field() const {
  SpectralField f(l_max, l_min);
  if (forcing.coeff_count() == 0) return f;
  for (int m = 0; m <= std::min(forcing.l_max(), l_max); ++m) {
    for (int l = std::max({m, l_min, forcing.l_min()}); l <= std::min(forcing.l_max(), l_max);
         ++l) {
      f.at(l, m) = forcing.at(l, m);
    }
  }
  f.project();
  return f;
}

void ModelConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("ModelConfig.dt must be > 0");
  // nu = 0 is admitted for the inviscid conservation diagnostics; every
  // stochastic experiment keeps nu > 0.
  if (!(nu >= 0.0)) throw std::invalid_argument("ModelConfig.nu must be >= 0");
  if (!(beta > 0.0 && beta <= 2.0)) throw std::invalid_argument("ModelConfig.beta must be in (0,2]");
  if (l_min < 1 || l_min > l_max) throw std::invalid_argument("ModelConfig: need 1 <= l_min <= l_max");
  if (spectrum == StokesSpectrum::stokes && l_min < 2) {
    throw std::invalid_argument(
        "ModelConfig: the default Stokes spectrum needs l_min >= 2 (lambda_1 > 0)");
  }
  if (path_substeps < 1) throw std::invalid_argument("ModelConfig.path_substeps must be >= 1");
  for (const auto& nm : noise_modes) {
    if (nm.l < l_min || nm.l > l_max || nm.m < 0 || nm.m > nm.l) {
      throw std::invalid_argument("ModelConfig: noise mode outside the truncation");
    }
    if (!(nm.sigma >= 0.0)) throw std::invalid_argument("ModelConfig: sigma must be >= 0");
  }
  ou_params().validate();
}

int EnergyLedger::violation_count() const {
  int n = 0;
  for (const auto& r : rows) n += r.violated ? 1 : 0;
  return n;
}

namespace {

// phi1(x) = (e^x - 1)/x, phi2(x) = (e^x - 1 - x)/x^2, series near 0.
std::complex<double> phi1(std::complex<double> x) {
  if (std::abs(x) < 1e-3) {
    return 1.0 + x * (0.5 + x * (1.0 / 6.0 + x * (1.0 / 24.0 + x / 120.0)));
  }
  return (std::exp(x) - 1.0) / x;
}

std::complex<double> phi2(std::complex<double> x) {
  if (std::abs(x) < 1e-3) {
    return 0.5 + x * (1.0 / 6.0 + x * (1.0 / 24.0 + x * (1.0 / 120.0 + x / 720.0)));
  }
  return (std::exp(x) - 1.0 - x) / (x * x);
}

}  // namespace

FlowEngine::FlowEngine(const ModelConfig& cfg, const SphereGrid& grid)
    : cfg_(cfg), grid_(grid), ou_(cfg.ou_params()), forcing_(cfg.forcing_field()) {
  cfg_.validate();
  if (grid_.l_max() != cfg_.l_max) {
    throw std::invalid_argument("FlowEngine: grid truncation does not match the config");
  }
  const SpectralField probe = zero_field();
  etd_decay_.assign(probe.coeff_count(), {1.0, 0.0});
  etd_phi1_.assign(probe.coeff_count(), {0.0, 0.0});
  etd_phi2_.assign(probe.coeff_count(), {0.0, 0.0});
  for (int m = 0; m <= cfg_.l_max; ++m) {
    for (int l = std::max(m, cfg_.l_min); l <= cfg_.l_max; ++l) {
      const std::complex<double> g =
          cfg_.nu * stokes_eig(l, cfg_.spectrum, cfg_.l_min) +
          coriolis_multiplier(l, m, cfg_.rotation);
      const std::complex<double> x = -g * cfg_.dt;
      const std::size_t i = probe.index(l, m);
      etd_decay_[i] = std::exp(x);
      etd_phi1_[i] = cfg_.dt * phi1(x);
      etd_phi2_[i] = cfg_.dt * phi2(x);
    }
  }
}

SpectralField FlowEngine::nonlinear(const SpectralField& v, const SpectralField& z_field) const {
  SpectralField u = v;
  u += z_field;
  OperatorContext ctx{&grid_, cfg_.rotation, cfg_.nu, cfg_.spectrum};
  SpectralField n = self_advection(u, ctx);
  n *= -1.0;
  n += forcing_;
  if (cfg_.alpha != 0.0) {
    SpectralField az = z_field;
    az *= cfg_.alpha;
    n += az;
  }
  return n;
}

void FlowEngine::check_finite(const SpectralField& v, double t) const {
  const double h2 = h_norm2(v);
  if (!std::isfinite(h2) || h2 > 1e24) throw BlowupError(t);
}

void FlowEngine::check_path(const NoisePath& path) const {
  const double expected = cfg_.dt / cfg_.path_substeps;
  if (std::abs(path.step() - expected) > 1e-9 * expected) {
    throw std::invalid_argument("FlowEngine: path step " + std::to_string(path.step()) +
                                " does not match dt/substeps = " + std::to_string(expected));
  }
  if (static_cast<std::size_t>(path.modes()) != ou_.modes.size()) {
    throw std::invalid_argument("FlowEngine: path mode count does not match the config");
  }
}

void FlowEngine::step(SpectralField& v, OUState& z, const NoisePath& path) const {
  const SpectralField zf0 = ou_field(z, ou_, cfg_.l_max);
  const SpectralField n1 = nonlinear(v, zf0);

  SpectralField a = zero_field();
  for (std::size_t i = 0; i < a.coeff_count(); ++i) {
    a.data()[i] = etd_decay_[i] * v.data()[i] + etd_phi1_[i] * n1.data()[i];
  }

  OUState z_next = z;
  OUState z_stage = z;
  for (int ss = 0; ss < cfg_.path_substeps; ++ss) {
    auto [post, pre] = ou_step_with_limit(z_next, ou_, path);
    z_stage = std::move(pre);  // last pre-jump limit z((t+dt)-)
    z_next = std::move(post);
  }
  const SpectralField zf1 = ou_field(z_stage, ou_, cfg_.l_max);
  const SpectralField n2 = nonlinear(a, zf1);

  for (std::size_t i = 0; i < a.coeff_count(); ++i) {
    a.data()[i] += etd_phi2_[i] * (n2.data()[i] - n1.data()[i]);
  }
  a.project();
  v = std::move(a);
  z = z_next;
  check_finite(v, z.time);
}

OUState FlowEngine::stationary_z(const NoisePath& path, double t) const {
  check_path(path);
  const double window = certified_burn_in_window(ou_, path.step());
  // The certified window is mandatory: a silently shortened burn-in would
  // break the restart invariance the cocycle checks lean on.
  return ou_stationary_burn_in(path, ou_, t - window, t);
}

SpectralField FlowEngine::phi(double t, const NoisePath& path, const SpectralField& x) const {
  if (t == 0.0) return x;  // phi(0, omega) = identity
  if (t < 0.0) throw std::invalid_argument("phi: t must be >= 0");
  const std::size_t n = static_cast<std::size_t>(std::llround(t / cfg_.dt));
  if (std::abs(static_cast<double>(n) * cfg_.dt - t) > 1e-9 * std::max(1.0, t)) {
    throw std::invalid_argument("phi: t must be grid aligned");
  }
  OUState z = stationary_z(path, 0.0);
  SpectralField v = x;
  v -= ou_field(z, ou_, cfg_.l_max);
  v.project();
  for (std::size_t k = 0; k < n; ++k) step(v, z, path);
  SpectralField u = v;
  u += ou_field(z, ou_, cfg_.l_max);
  return u;
}

double FlowEngine::verify_cocycle(double t, double s, const NoisePath& path,
                                  const SpectralField& x) const {
  const SpectralField lhs = phi(t + s, path, x);
  const SpectralField mid = phi(s, path, x);
  const NoisePath shifted = path.shifted(s);
  const SpectralField rhs = phi(t, shifted, mid);
  SpectralField diff = lhs;
  diff -= rhs;
  return h_norm(diff) / (1.0 + h_norm(lhs));
}

FlowEngine::RunResult FlowEngine::run_with_ledger(double t0, double t1, const NoisePath& path,
                                                  const SpectralField& v0) const {
  if (!(t0 < t1)) throw std::invalid_argument("run_with_ledger: need t0 < t1");
  const std::size_t n = static_cast<std::size_t>(std::llround((t1 - t0) / cfg_.dt));
  OUState z = stationary_z(path, t0);
  SpectralField v = v0;
  v.project();

  const GammaConstants gk = cfg_.gamma_constants();
  RunResult res{zero_field(), {}, false, 0.0};
  res.ledger.rows.reserve(n + 1);

  const double v0_h2 = h_norm2(v);
  double big_gamma = 0.0;   // int_{t0}^{t} gamma
  double weighted_p = 0.0;  // int_{t0}^{t} e^{-int_{t0}^{s} gamma} 2 p(s) ds
  GammaPQ prev = gamma_p_q(z, gk);

  auto push_row = [&](double t, const GammaPQ& gpq) {
    LedgerRow row;
    row.t = t;
    row.v_h2 = h_norm2(v);
    row.v_v2 = v_norm2(v, cfg_.spectrum);
    row.v_a2 = a_norm2(v, cfg_.spectrum);
    row.gamma = gpq.gamma;
    row.p = gpq.p;
    row.q = gpq.q;
    row.gronwall_rhs = std::exp(big_gamma) * (v0_h2 + weighted_p);
    row.violated = row.v_h2 > row.gronwall_rhs * (1.0 + 1e-8);
    res.ledger.rows.push_back(row);
  };

  push_row(t0, prev);
  for (std::size_t k = 0; k < n; ++k) {
    const double t_next = t0 + static_cast<double>(k + 1) * cfg_.dt;
    try {
      step(v, z, path);
    } catch (const BlowupError& e) {
      res.blew_up = true;
      res.blowup_time = e.time;
      res.v_final = v;
      return res;
    }
    const GammaPQ cur = gamma_p_q(z, gk);
    // Trapezoid accumulation matching the integrator order.
    const double g_prev = big_gamma;
    big_gamma += 0.5 * cfg_.dt * (prev.gamma + cur.gamma);
    weighted_p +=
        0.5 * cfg_.dt * (std::exp(-g_prev) * 2.0 * prev.p + std::exp(-big_gamma) * 2.0 * cur.p);
    prev = cur;
    push_row(t_next, cur);
  }
  res.v_final = v;
  return res;
}

std::vector<ZRow> FlowEngine::z_trajectory(const NoisePath& path, double t0, double t1) const {
  const std::size_t n = static_cast<std::size_t>(std::llround((t1 - t0) / cfg_.dt));
  OUState z = stationary_z(path, t0);
  const GammaConstants gk = cfg_.gamma_constants();
  std::vector<ZRow> rows;
  rows.reserve(n + 1);
  auto push = [&]() {
    const GammaPQ gpq = gamma_p_q(z, gk);
    rows.push_back({z.time, z.sum_abs(), z.h_norm2(), ou_v_norm2(z, ou_), ou_a_norm2(z, ou_),
                    gpq.gamma, gpq.p, gpq.q});
  };
  push();
  for (std::size_t k = 0; k < n; ++k) {
    z = ou_step(z, ou_, path);
    push();
  }
  return rows;
}

void write_trajectory_csv(std::ostream& os, const EnergyLedger& ledger,
                          const std::vector<double>& u_energy,
                          const std::vector<double>& u_enstrophy) {
  os << "t,energy,enstrophy,v_h,v_v,gamma,p,q,gronwall_rhs,violated\n";
  char buf[256];
  for (std::size_t i = 0; i < ledger.rows.size(); ++i) {
    const auto& r = ledger.rows[i];
    const double en = i < u_energy.size() ? u_energy[i] : 0.0;
    const double ens = i < u_enstrophy.size() ? u_enstrophy[i] : 0.0;
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d",
                  r.t, en, ens, std::sqrt(r.v_h2), std::sqrt(r.v_v2), r.gamma, r.p, r.q,
                  r.gronwall_rhs, r.violated ? 1 : 0);
    os << buf << "\n";
  }
}

}  // namespace snse
