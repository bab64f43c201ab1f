#include "snse/ou.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "snse/operators.hpp"
#include "snse/transforms.hpp"

namespace snse {

std::complex<double> OUParams::generator(std::size_t mode) const {
  const NoiseMode& nm = modes.at(mode);
  return nu * stokes_eig(nm.l, spectrum, l_min) + alpha +
         coriolis_multiplier(nm.l, nm.m, nm.m == 0 ? 0.0 : rotation);
}

void OUParams::validate() const {
  if (modes.empty()) throw std::invalid_argument("OUParams: needs at least one noise mode");
  if (!(nu >= 0.0)) throw std::invalid_argument("OUParams: nu must be >= 0");
  if (!(alpha >= 0.0)) throw std::invalid_argument("OUParams: alpha must be >= 0");
  for (std::size_t i = 0; i < modes.size(); ++i) {
    // Dissipativity is what the stationary convolution needs; silent modes
    // (sigma = 0) are allowed to sit at the margin.
    if (modes[i].sigma > 0.0 && generator(i).real() <= 0.0) {
      throw std::invalid_argument("OUParams: generator has nonpositive real part at mode " +
                                  std::to_string(i));
    }
  }
}

double OUState::sum_abs() const {
  double s = 0.0;
  for (const auto& v : values) s += std::abs(v);
  return s;
}

double OUState::h_norm2() const {
  double s = 0.0;
  for (const auto& v : values) s += std::norm(v);
  return s;
}

std::pair<OUState, OUState> ou_step_with_limit(const OUState& state, const OUParams& params,
                                               const NoisePath& path) {
  const double h = path.step();
  const std::size_t k = path.grid_index(state.time);
  if (k >= path.n_steps()) {
    throw std::out_of_range("ou_step: no increment stored past t = " + std::to_string(state.time));
  }
  OUState pre;
  pre.time = state.time + h;
  pre.values.resize(state.values.size());
  OUState post = pre;
  for (std::size_t i = 0; i < state.values.size(); ++i) {
    const std::complex<double> decay = std::exp(-params.generator(i) * h);
    pre.values[i] = decay * state.values[i];
    post.values[i] = pre.values[i] + path.increment(static_cast<int>(i), k);
  }
  return {post, pre};
}

OUState ou_step(const OUState& state, const OUParams& params, const NoisePath& path) {
  return ou_step_with_limit(state, params, path).first;
}

double certified_burn_in_window(const OUParams& params, double h) {
  // Only live modes matter: with no noise at all, z stays 0 without burn-in.
  double min_re = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < params.modes.size(); ++i) {
    if (params.modes[i].sigma > 0.0) min_re = std::min(min_re, params.generator(i).real());
  }
  if (!std::isfinite(min_re)) return 0.0;
  const double window = 12.0 * std::log(10.0) / min_re;
  return std::ceil(window / h) * h;
}

OUState ou_stationary_burn_in(const NoisePath& path, const OUParams& params, double t_start,
                              double t_target) {
  params.validate();
  if (params.modes.size() != static_cast<std::size_t>(path.modes())) {
    throw std::invalid_argument("ou_stationary_burn_in: path/mode count mismatch");
  }
  if (!(t_start <= t_target)) {
    throw std::invalid_argument("ou_stationary_burn_in: t_start must be <= t_target");
  }
  path.grid_index(t_start);   // throws range error when coverage is missing
  path.grid_index(t_target);

  OUState z;
  z.time = t_start;
  z.values.assign(params.modes.size(), {0.0, 0.0});

  // Precompute decay factors; the loop is a straight per-mode recursion.
  const double h = path.step();
  std::vector<std::complex<double>> decay(params.modes.size());
  for (std::size_t i = 0; i < decay.size(); ++i) decay[i] = std::exp(-params.generator(i) * h);

  std::size_t k = path.grid_index(t_start);
  const std::size_t k_end = path.grid_index(t_target);
  for (; k < k_end; ++k) {
    for (std::size_t i = 0; i < z.values.size(); ++i) {
      z.values[i] = decay[i] * z.values[i] + path.increment(static_cast<int>(i), k);
    }
  }
  z.time = t_target;
  return z;
}

std::vector<std::complex<double>> ou_ibp_reconstruct(const NoisePath& path,
                                                     const OUParams& params, double t) {
  params.validate();
  const std::size_t k0 = path.grid_index(0.0);
  const std::size_t kt = path.grid_index(t);
  if (kt < k0) throw std::invalid_argument("ou_ibp_reconstruct: t must be >= 0");
  const double h = path.step();

  std::vector<std::complex<double>> out(params.modes.size());
  for (std::size_t i = 0; i < params.modes.size(); ++i) {
    const std::complex<double> a = params.generator(i);
    // Running value of L on the grid (L(0) = 0 by construction).
    double L = 0.0;
    std::complex<double> y(0.0, 0.0);
    double prev_integrand_re = 0.0, prev_integrand_im = 0.0;  // a e^{-a(t-s)} L(s) at s = 0
    {
      const std::complex<double> w = a * std::exp(-a * (t - 0.0)) * L;
      prev_integrand_re = w.real();
      prev_integrand_im = w.imag();
    }
    for (std::size_t k = k0; k < kt; ++k) {
      L += path.increment(static_cast<int>(i), k);
      const double s = static_cast<double>(k + 1 - k0) * h;
      const std::complex<double> w = a * std::exp(-a * (t - s)) * L;
      y += 0.5 * h * (std::complex<double>(prev_integrand_re, prev_integrand_im) + w);
      prev_integrand_re = w.real();
      prev_integrand_im = w.imag();
    }
    out[i] = L - y;
  }
  return out;
}

namespace {

double stationary_scale(double sigma, double beta, double a_real, double h) {
  if (sigma == 0.0) return 0.0;
  const double inc_scale = sigma * std::pow(h, 1.0 / beta);
  return inc_scale * std::pow(1.0 - std::exp(-beta * a_real * h), -1.0 / beta);
}

}  // namespace

MomentEstimate estimate_abs_moment(const OUParams& params, double beta, std::size_t mode,
                                   double h, int n_paths, std::uint64_t seed) {
  params.validate();
  if (!(beta > 1.0)) {
    throw std::domain_error("estimate_abs_moment: E|z| is infinite for beta <= 1");
  }
  const std::complex<double> a = params.generator(mode);
  if (a.imag() != 0.0) {
    throw std::invalid_argument(
        "estimate_abs_moment: exact stationary sampling needs a real generator (zonal mode)");
  }
  const double sigma = params.modes.at(mode).sigma;
  if (sigma == 0.0) return {0.0, 0.0};

  StableParams p;
  p.beta = beta;
  p.scale = stationary_scale(sigma, beta, a.real(), h);
  const CounterRng rng(derive_seed(seed, StreamPurpose::moment, mode));
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n_paths; ++i) {
    const double x = std::abs(sample_stable_at(p, rng, static_cast<std::uint64_t>(i)));
    sum += x;
    sum2 += x * x;
  }
  const double n = static_cast<double>(n_paths);
  const double mean = sum / n;
  const double var = std::max(0.0, sum2 / n - mean * mean);
  return {mean, std::sqrt(var / n)};
}

AlphaCertificate select_alpha(const OUParams& base, double beta, double delta, double lambda1,
                              double h, double alpha_lo, double alpha_hi, int n_grid,
                              int n_paths, std::uint64_t seed) {
  if (!(delta > 0.0) || base.modes.empty() || !(lambda1 > 0.0)) {
    throw std::invalid_argument("select_alpha: need delta > 0, m >= 1, lambda1 > 0");
  }
  if (!(alpha_lo >= 0.0) || !(alpha_hi > alpha_lo) || n_grid < 2) {
    throw std::invalid_argument("select_alpha: bad search bounds");
  }
  const double m = static_cast<double>(base.modes.size());
  const double rhs = lambda1 / 4.0;

  std::vector<double> grid(static_cast<std::size_t>(n_grid));
  if (alpha_lo > 0.0) {
    const double r = std::pow(alpha_hi / alpha_lo, 1.0 / (n_grid - 1));
    for (int i = 0; i < n_grid; ++i) grid[i] = alpha_lo * std::pow(r, i);
  } else {
    grid[0] = 0.0;
    const double lo = alpha_hi / std::pow(2.0, n_grid - 2);
    const double r = std::pow(alpha_hi / lo, 1.0 / std::max(1, n_grid - 2));
    for (int i = 1; i < n_grid; ++i) grid[i] = lo * std::pow(r, i - 1);
  }

  AlphaCertificate last;
  for (int i = 0; i < n_grid; ++i) {
    OUParams trial = base;
    trial.alpha = grid[i];
    double moment = 0.0, se = 0.0;
    for (std::size_t mode = 0; mode < trial.modes.size(); ++mode) {
      const MomentEstimate est = estimate_abs_moment(trial, beta, mode, h, n_paths,
                                                     derive_seed(seed, StreamPurpose::moment, i));
      if (est.mean + 2.0 * est.stderr_ > moment + 2.0 * se) {
        moment = est.mean;
        se = est.stderr_;
      }
    }
    const double lhs = 4.0 * delta * m * (moment + 2.0 * se);
    last = {grid[i], moment, se, lhs, rhs};
    if (lhs <= rhs) return last;
  }
  throw std::runtime_error(
      "select_alpha: bound unreachable on the search grid; at alpha = " +
      std::to_string(last.alpha) + " the certificate gives " + std::to_string(last.lhs) +
      " > lambda1/4 = " + std::to_string(last.rhs));
}

GammaPQ gamma_p_q(const OUState& z, const GammaConstants& k) {
  const double sum_abs = z.sum_abs();
  const double z2 = z.h_norm2();
  GammaPQ out;
  out.gamma = -0.5 * k.lambda1 + 4.0 * k.delta * sum_abs;
  out.p = k.c * k.f_h2 + k.c * k.alpha * z2 + k.delta * z2 * sum_abs;
  // q only appears in the V-absorption chain, which presumes nu > 0; the
  // inviscid diagnostic runs carry q = 0.
  out.q = k.nu > 0.0 ? (2.0 / k.nu) * (k.f_h2 + k.alpha * k.alpha * z2) : 0.0;
  return out;
}

GrowthReport check_growth(const NoisePath& path, const OUParams& params, double kappa,
                          double horizon, const SphereGrid* grid) {
  params.validate();
  const double h = path.step();
  OUState z = ou_stationary_burn_in(path, params, path.t_min(), 0.0);
  GrowthReport rep;
  const std::size_t n = static_cast<std::size_t>(std::llround(horizon / h));
  int l_max_needed = params.l_min;
  for (const auto& nm : params.modes) l_max_needed = std::max(l_max_needed, nm.l);
  for (std::size_t k = 0; k < n; ++k) {
    z = ou_step(z, params, path);
    double proxy = std::sqrt(z.h_norm2());
    if (grid != nullptr) {
      const SpectralField zf = ou_field(z, params, l_max_needed);
      const GridField vals = synthesize(zf, *grid);
      GridField quart(vals.size());
      for (std::size_t i = 0; i < vals.size(); ++i) quart[i] = std::pow(vals[i], 4);
      proxy += std::pow(integrate(quart, *grid), 0.25);
    }
    const double ratio = proxy / (1.0 + std::pow(std::abs(z.time), kappa));
    rep.sup_ratio = std::max(rep.sup_ratio, ratio);
    if (k < n / 2) rep.sup_ratio_first_half = std::max(rep.sup_ratio_first_half, ratio);
  }
  rep.bounded = rep.sup_ratio <= rep.sup_ratio_first_half * (1.0 + 1e-12);
  return rep;
}

SpectralField ou_field(const OUState& z, const OUParams& params, int l_max) {
  SpectralField f(l_max, params.l_min);
  for (std::size_t i = 0; i < params.modes.size(); ++i) {
    const NoiseMode& nm = params.modes[i];
    const double ll1 = static_cast<double>(nm.l) * (nm.l + 1);
    if (nm.m == 0) {
      f.at(nm.l, 0) += std::sqrt(ll1) * z.values[i].real();
    } else {
      f.at(nm.l, nm.m) += std::sqrt(ll1 / 2.0) * z.values[i];
    }
  }
  return f;
}

double ou_v_norm2(const OUState& z, const OUParams& params) {
  double s = 0.0;
  for (std::size_t i = 0; i < params.modes.size(); ++i) {
    s += stokes_eig(params.modes[i].l, params.spectrum, params.l_min) * std::norm(z.values[i]);
  }
  return s;
}

double ou_a_norm2(const OUState& z, const OUParams& params) {
  double s = 0.0;
  for (std::size_t i = 0; i < params.modes.size(); ++i) {
    const double lam = stokes_eig(params.modes[i].l, params.spectrum, params.l_min);
    s += lam * lam * std::norm(z.values[i]);
  }
  return s;
}

}  // namespace snse
