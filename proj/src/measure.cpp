#include "snse/measure.hpp"

#include <cmath>
#include <stdexcept>

namespace snse {

std::vector<NamedObservable> default_observables(int l_ref) {
  std::vector<NamedObservable> obs;
  obs.push_back({"exp_neg_h2", [](const SpectralField& u) { return std::exp(-h_norm2(u)); }});
  obs.push_back({"mode_amp_smooth", [l_ref](const SpectralField& u) {
                   const double a = std::abs(u.at(l_ref, 0));
                   return 1.0 - std::tanh(a);
                 }});
  obs.push_back({"inv_enstrophy", [](const SpectralField& u) {
                   return 1.0 / (1.0 + enstrophy(u));
                 }});
  return obs;
}

double EmpiricalMeasure::mean_observable(const Observable& f) const {
  if (support.empty()) throw std::invalid_argument("EmpiricalMeasure: empty support");
  double s = 0.0;
  for (const auto& u : support) s += f(u);
  return s / static_cast<double>(support.size());
}

namespace {

// Fresh path covering [t_begin - burn_in, t_end] for one sample.
NoisePath sample_path(const FlowEngine& engine, double t_begin, double t_end,
                      std::uint64_t seed) {
  const ModelConfig& cfg = engine.config();
  const double h = cfg.dt / cfg.path_substeps;
  const double window = certified_burn_in_window(cfg.ou_params(), h);
  // Keep the window grid aligned.
  const double t_min = t_begin - window;
  return NoisePath(cfg.stable_params(), h, t_min, std::max(t_end, 0.0), seed);
}

MCEstimate reduce(const std::vector<double>& vals) {
  MCEstimate e;
  e.n = static_cast<int>(vals.size());
  if (vals.empty()) return e;
  double s = 0.0;
  for (double v : vals) s += v;
  const double n = static_cast<double>(vals.size());
  e.mean = s / n;
  // two-pass variance: identical samples give exactly zero spread
  double var = 0.0;
  for (double v : vals) var += (v - e.mean) * (v - e.mean);
  e.stderr_ = std::sqrt(var / n / n);
  return e;
}

}  // namespace

EmpiricalMeasure pullback_measure(const FlowEngine& engine,
                                  const std::vector<std::uint64_t>& path_seeds, double t_big,
                                  const std::function<SpectralField(std::uint64_t)>& init_sampler) {
  if (path_seeds.empty()) throw std::invalid_argument("pullback_measure: no seeds");
  const ModelConfig& cfg = engine.config();
  EmpiricalMeasure out;
  std::vector<SpectralField> slots(path_seeds.size(), SpectralField(cfg.l_max, cfg.l_min));
  std::vector<char> ok(path_seeds.size(), 0);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(path_seeds.size()); ++i) {
    const std::size_t idx = static_cast<std::size_t>(i);
    // phi(t_big, theta_{-t_big} omega) x == run over [-t_big, 0] on omega.
    const NoisePath path = sample_path(engine, -t_big, 0.0, path_seeds[idx]);
    const SpectralField x = init_sampler(path_seeds[idx]);
    const OUState z0 = engine.stationary_z(path, -t_big);
    SpectralField v0 = x;
    v0 -= ou_field(z0, cfg.ou_params(), cfg.l_max);
    const auto run = engine.run_with_ledger(-t_big, 0.0, path, v0);
    if (run.blew_up) continue;
    SpectralField u = run.v_final;
    const OUState zT = engine.stationary_z(path, 0.0);
    u += ou_field(zT, cfg.ou_params(), cfg.l_max);
    slots[idx] = std::move(u);
    ok[idx] = 1;
  }
  for (std::size_t i = 0; i < path_seeds.size(); ++i) {
    if (ok[i]) {
      out.support.push_back(std::move(slots[i]));
    } else {
      ++out.excluded;
    }
  }
  if (out.support.empty()) throw std::runtime_error("pullback_measure: every member blew up");
  return out;
}

MCEstimate transition_estimate(const FlowEngine& engine, const Observable& f, double t,
                               const SpectralField& x, int n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("transition_estimate: n_samples must be >= 1");
  if (t == 0.0) return {f(x), 0.0, n_samples};
  std::vector<double> vals(static_cast<std::size_t>(n_samples), 0.0);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n_samples; ++i) {
    const NoisePath path =
        sample_path(engine, 0.0, t, derive_seed(seed, StreamPurpose::measure, i));
    vals[static_cast<std::size_t>(i)] = f(engine.phi(t, path, x));
  }
  return reduce(vals);
}

std::vector<FellerPoint> feller_probe(const FlowEngine& engine, const Observable& f, double t,
                                      const SpectralField& x, const SpectralField& direction,
                                      const std::vector<double>& eps_list, int n_samples,
                                      std::uint64_t seed) {
  std::vector<FellerPoint> out;
  for (double eps : eps_list) {
    std::vector<double> diffs(static_cast<std::size_t>(n_samples), 0.0);
    if (eps != 0.0) {
      SpectralField xp = direction;
      xp *= eps;
      xp += x;
#pragma omp parallel for schedule(dynamic)
      for (std::int64_t i = 0; i < n_samples; ++i) {
        // Common noise per pair: the same path drives both trajectories.
        const NoisePath path =
            sample_path(engine, 0.0, t, derive_seed(seed, StreamPurpose::measure, i));
        const double a = f(engine.phi(t, path, xp));
        const double b = f(engine.phi(t, path, x));
        diffs[static_cast<std::size_t>(i)] = std::abs(a - b);
      }
    }
    const MCEstimate e = reduce(diffs);
    out.push_back({eps, e.mean, e.stderr_});
  }
  return out;
}

InvarianceCheck invariance_check(const FlowEngine& engine, const EmpiricalMeasure& mu,
                                 const Observable& f, double s, int n_inner,
                                 std::uint64_t seed) {
  if (mu.support.empty()) throw std::invalid_argument("invariance_check: empty support");
  const std::size_t n = mu.support.size();
  std::vector<double> direct(n, 0.0), evolved(n, 0.0);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(n); ++k) {
    const std::size_t i = static_cast<std::size_t>(k);
    direct[i] = f(mu.support[i]);
    evolved[i] =
        transition_estimate(engine, f, s, mu.support[i], n_inner,
                            derive_seed(seed, StreamPurpose::measure, 50000 + i))
            .mean;
  }
  InvarianceCheck out;
  std::vector<double> diffs(n);
  double sd = 0.0, se = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out.direct += direct[i];
    out.evolved += evolved[i];
    diffs[i] = evolved[i] - direct[i];
  }
  out.direct /= static_cast<double>(n);
  out.evolved /= static_cast<double>(n);
  out.diff = out.evolved - out.direct;
  for (double d : diffs) sd += (d - out.diff) * (d - out.diff);
  se = std::sqrt(sd / static_cast<double>(n) / static_cast<double>(n));
  out.diff_stderr = se;
  out.pass_3sigma = std::abs(out.diff) <= 3.0 * se + 1e-12;
  return out;
}

ChapmanKolmogorov chapman_kolmogorov_check(const FlowEngine& engine, const Observable& f,
                                           double t, double s, const SpectralField& x,
                                           int n_lhs, int n_outer, int n_inner,
                                           std::uint64_t seed) {
  ChapmanKolmogorov ck;
  ck.lhs = transition_estimate(engine, f, t + s, x, n_lhs, derive_seed(seed, StreamPurpose::measure, 0));

  if (s == 0.0) {
    ck.rhs = ck.lhs;  // the nested estimator degenerates to the plain one
  } else {
    std::vector<double> outer_means(static_cast<std::size_t>(n_outer), 0.0);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < n_outer; ++i) {
      const std::uint64_t si = derive_seed(seed, StreamPurpose::measure, 1000000 + i);
      const NoisePath path = sample_path(engine, 0.0, t, si);
      const SpectralField y = engine.phi(t, path, x);
      double acc = 0.0;
      for (int j = 0; j < n_inner; ++j) {
        const NoisePath inner =
            sample_path(engine, 0.0, s, derive_seed(si, StreamPurpose::measure, j));
        acc += f(engine.phi(s, inner, y));
      }
      outer_means[static_cast<std::size_t>(i)] = acc / n_inner;
    }
    ck.rhs = reduce(outer_means);
  }

  ck.combined_stderr = std::sqrt(ck.lhs.stderr_ * ck.lhs.stderr_ + ck.rhs.stderr_ * ck.rhs.stderr_);
  ck.pass_3sigma = std::abs(ck.lhs.mean - ck.rhs.mean) <= 3.0 * ck.combined_stderr;
  return ck;
}

}  // namespace snse
