#include "snse/attractor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace snse {

double hausdorff_semidist(const Cloud& a, const Cloud& b) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("hausdorff_semidist: clouds must be nonempty");
  }
  double worst = 0.0;
  for (const auto& x : a) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& y : b) {
      SpectralField d = x;
      d -= y;
      best = std::min(best, h_norm(d));
    }
    worst = std::max(worst, best);
  }
  return worst;
}

double hausdorff_dist(const Cloud& a, const Cloud& b) {
  return std::max(hausdorff_semidist(a, b), hausdorff_semidist(b, a));
}

SpectralField sample_ball(int l_max, int l_min, double rho, std::uint64_t seed) {
  SpectralField f = random_field(l_max, l_min, seed, 1.0);
  const double n = h_norm(f);
  if (n > 0.0) f *= rho / n;
  return f;
}

AttractorEstimate pullback_ensemble(const FlowEngine& engine, const NoisePath& path,
                                    const std::vector<double>& t0_schedule, double rho,
                                    int n_samples, std::uint64_t init_seed) {
  if (t0_schedule.empty() || n_samples < 1) {
    throw std::invalid_argument("pullback_ensemble: empty schedule or no samples");
  }
  for (double t0 : t0_schedule) {
    if (!(t0 <= -1.0)) throw std::invalid_argument("pullback_ensemble: t0 values must be <= -1");
  }
  const ModelConfig& cfg = engine.config();

  // The same ball B is transported from every t0 over the same realization.
  std::vector<SpectralField> ball;
  ball.reserve(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) {
    ball.push_back(sample_ball(cfg.l_max, cfg.l_min,
                               rho, derive_seed(init_seed, StreamPurpose::init, i)));
  }

  AttractorEstimate est;
  est.t0_schedule = t0_schedule;
  est.path_seed = path.seed();
  est.clouds.resize(t0_schedule.size());
  est.excluded.assign(t0_schedule.size(), 0);
  est.v_at_minus1_h2.resize(t0_schedule.size());

  for (std::size_t k = 0; k < t0_schedule.size(); ++k) {
    const double t0 = t0_schedule[k];
    const OUState z0 = engine.stationary_z(path, t0);
    const SpectralField zf0 = ou_field(z0, cfg.ou_params(), cfg.l_max);
    const OUState zT = engine.stationary_z(path, 0.0);
    const SpectralField zfT = ou_field(zT, cfg.ou_params(), cfg.l_max);
    std::vector<SpectralField> results(ball.size(), SpectralField(cfg.l_max, cfg.l_min));
    std::vector<double> vm1(ball.size(), 0.0);
    std::vector<char> ok(ball.size(), 0);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(ball.size()); ++i) {
      SpectralField v0 = ball[static_cast<std::size_t>(i)];
      v0 -= zf0;
      const auto run = engine.run_with_ledger(t0, 0.0, path, v0);
      if (run.blew_up) continue;
      ok[static_cast<std::size_t>(i)] = 1;
      // state at time 0 is u = v + z
      SpectralField u = run.v_final;
      u += zfT;
      results[static_cast<std::size_t>(i)] = std::move(u);
      const std::size_t idx_m1 =
          static_cast<std::size_t>(std::llround((-1.0 - t0) / cfg.dt));
      vm1[static_cast<std::size_t>(i)] = run.ledger.rows.at(idx_m1).v_h2;
    }
    for (std::size_t i = 0; i < ball.size(); ++i) {
      if (ok[i]) {
        est.clouds[k].push_back(std::move(results[i]));
        est.v_at_minus1_h2[k].push_back(vm1[i]);
      } else {
        ++est.excluded[k];
      }
    }
    if (est.clouds[k].empty()) {
      throw std::runtime_error("pullback_ensemble: every member blew up for t0 = " +
                               std::to_string(t0));
    }
  }

  for (std::size_t k = 0; k + 1 < est.clouds.size(); ++k) {
    est.hausdorff_trace.push_back(hausdorff_dist(est.clouds[k], est.clouds[k + 1]));
  }
  return est;
}

AbsorbingRadii absorbing_radii(const FlowEngine& engine, const NoisePath& path,
                               const std::vector<double>& t0_schedule) {
  if (t0_schedule.empty()) throw std::invalid_argument("absorbing_radii: empty schedule");
  const ModelConfig& cfg = engine.config();
  const double T = *std::min_element(t0_schedule.begin(), t0_schedule.end());
  if (!(T <= -1.0)) throw std::invalid_argument("absorbing_radii: schedule must reach t <= -1");

  const std::vector<ZRow> rows = engine.z_trajectory(path, T, 0.0);
  const double dt = cfg.dt;
  auto index_of = [&](double t) {
    const std::size_t i = static_cast<std::size_t>(std::llround((t - T) / dt));
    if (i >= rows.size()) throw std::out_of_range("absorbing_radii: missing ledger coverage");
    return i;
  };
  const std::size_t i_m1 = index_of(-1.0);
  const std::size_t i_0 = rows.size() - 1;

  // Gamma(s) = int_s^{-1} gamma, backwards trapezoid from -1 to T.
  std::vector<double> Gamma(i_m1 + 1, 0.0);
  for (std::size_t i = i_m1; i-- > 0;) {
    Gamma[i] = Gamma[i + 1] + 0.5 * dt * (rows[i].gamma + rows[i + 1].gamma);
  }

  AbsorbingRadii r;
  for (double t0 : t0_schedule) {
    const std::size_t i = index_of(t0);
    r.sup_pullback_term = std::max(r.sup_pullback_term, std::exp(Gamma[i]) * rows[i].h2);
  }
  for (std::size_t i = 0; i < i_m1; ++i) {
    r.int_exp_2p += 0.5 * dt *
                    (std::exp(Gamma[i]) * 2.0 * rows[i].p + std::exp(Gamma[i + 1]) * 2.0 * rows[i + 1].p);
  }
  r.r1_sq = 2.0 + 2.0 * r.sup_pullback_term + r.int_exp_2p;

  // Unit-window integrals and sups over [-1, 0].
  for (std::size_t i = i_m1; i < i_0; ++i) {
    r.int_gamma_raw += 0.5 * dt * (rows[i].gamma + rows[i + 1].gamma);
    r.int_gamma_pos +=
        0.5 * dt * (std::max(rows[i].gamma, 0.0) + std::max(rows[i + 1].gamma, 0.0));
    r.int_2p_unit += 0.5 * dt * (2.0 * rows[i].p + 2.0 * rows[i + 1].p);
    r.int_2q_unit += 0.5 * dt * (2.0 * rows[i].q + 2.0 * rows[i + 1].q);
    r.int_z_v2_unit += 0.5 * dt * (rows[i].v2 + rows[i + 1].v2);
  }
  for (std::size_t i = i_m1; i <= i_0; ++i) {
    r.sup_z_h2 = std::max(r.sup_z_h2, rows[i].h2);
    r.sup_az = std::max(r.sup_az, std::sqrt(rows[i].a2));
  }
  r.sup_z = std::sqrt(r.sup_z_h2);
  r.z0_v2 = rows[i_0].v2;

  // c1 = sup_{t in [-1,0]} [ e^{int_{-1}^t gamma} r1^2 + int_{-1}^t e^{int_s^t gamma} 2p ds ],
  // accumulated exactly like the member ledgers (2p matches the Lemma bound).
  double G = 0.0;          // int_{-1}^{t} gamma
  double wp = 0.0;         // int_{-1}^{t} e^{-int_{-1}^{s} gamma} 2p ds
  r.c1 = r.r1_sq;          // value at t = -1
  for (std::size_t i = i_m1; i < i_0; ++i) {
    const double g_prev = G;
    G += 0.5 * dt * (rows[i].gamma + rows[i + 1].gamma);
    wp += 0.5 * dt *
          (std::exp(-g_prev) * 2.0 * rows[i].p + std::exp(-G) * 2.0 * rows[i + 1].p);
    r.c1 = std::max(r.c1, std::exp(G) * (r.r1_sq + wp));
  }

  r.c2 = r.r1_sq * (1.0 + r.int_gamma_pos) + r.int_2p_unit;
  r.c3 = r.c1 + r.sup_z_h2;
  r.c4 = r.c2 + r.int_z_v2_unit;
  r.c5 = std::sqrt(r.c1) + r.sup_z;

  const double cb2 = cfg.c_b * cfg.c_b;
  const double cb4 = cb2 * cb2;
  const double expo = 64.0 * cb4 * r.c3 * r.c4;
  r.r2_sq = 2.0 * r.z0_v2 +
            2.0 *
                (r.c2 + 64.0 * cb4 * r.c3 * r.c4 * r.sup_z + 8.0 * cb2 * r.c5 * r.c4 * r.sup_az +
                 r.int_2q_unit) *
                std::exp(expo);
  return r;
}

OmegaLimit omega_limit_estimate(const AttractorEstimate& est, double tol) {
  if (est.clouds.empty()) throw std::invalid_argument("omega_limit_estimate: empty estimate");
  OmegaLimit out;
  // schedule is ordered by increasing |t0|; the deepest pullback is last
  out.cloud = est.clouds.back();
  out.final_trace = est.hausdorff_trace.empty() ? 0.0 : est.hausdorff_trace.back();
  out.converged = out.final_trace <= tol;
  return out;
}

}  // namespace snse
