// Command-line orchestrator: configuration, reproducible seeding, experiment
// pipelines and report emission.
//
// Exit codes: 0 success, 2 config error, 3 blow-up-dominated ensemble,
// 4 verification failure (Gronwall/absorption/3-sigma), 5 attractor trace
// not converged.
#include <omp.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "snse/attractor.hpp"
#include "snse/config.hpp"
#include "snse/measure.hpp"
#include "snse/reference_kernels.hpp"

using namespace snse;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitBlowup = 3;
constexpr int kExitVerification = 4;
constexpr int kExitNotConverged = 5;

struct Cli {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
};

json load_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config file " + path);
  json j;
  is >> j;
  return j;
}

void write_text(const std::filesystem::path& p, const std::string& content) {
  std::ofstream os(p);
  os << content;
}

class Runner {
 public:
  Runner(const Cli& cli, const std::string& command)
      : cli_(cli), command_(command), start_(std::chrono::steady_clock::now()) {
    json raw = json::object();
    if (!cli.config_path.empty()) raw = load_json(cli.config_path);
    experiment_ = raw.value("experiment", json::object());
    ConfigValidation v = validate_config(raw);
    if (!v.ok()) {
      std::cerr << "config error:\n";
      for (const auto& e : v.errors) std::cerr << "  - " << e << "\n";
      throw_config();
    }
    for (const auto& w : v.warnings) std::cerr << "config warning: " << w << "\n";
    cfg_ = v.config;
    if (cli.seed_set) cfg_.seed = cli.seed;
    if (cli.threads > 0) omp_set_num_threads(cli.threads);
    std::filesystem::create_directories(cli.out_dir);
    grid_ = std::make_unique<SphereGrid>(cfg_.n_lat, cfg_.n_lon, cfg_.l_max, cfg_.dealias);
    engine_ = std::make_unique<FlowEngine>(cfg_, *grid_);
  }

  [[noreturn]] static void throw_config() { throw int(kExitConfig); }

  const ModelConfig& cfg() const { return cfg_; }
  const FlowEngine& engine() const { return *engine_; }
  const SphereGrid& grid() const { return *grid_; }

  double exp_num(const char* key, double def) const { return experiment_.value(key, def); }
  int exp_int(const char* key, int def) const { return experiment_.value(key, def); }
  std::vector<double> exp_list(const char* key, std::vector<double> def) const {
    if (!experiment_.contains(key)) return def;
    return experiment_.at(key).get<std::vector<double>>();
  }

  NoisePath make_path(double t_min, double t_max, std::uint64_t seed) const {
    return NoisePath(cfg_.stable_params(), cfg_.dt / cfg_.path_substeps, t_min, t_max, seed);
  }

  // Path window that always covers the burn-in before t_begin.
  NoisePath make_covering_path(double t_begin, double t_end, std::uint64_t seed) const {
    const double h = cfg_.dt / cfg_.path_substeps;
    const double window = certified_burn_in_window(cfg_.ou_params(), h);
    return make_path(t_begin - window, std::max(t_end, 0.0), seed);
  }

  void finish(const json& report, const std::string& report_name) {
    const auto wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    json manifest;
    manifest["command"] = command_;
    manifest["config"] = config_to_json(cfg_);
    manifest["base_seed"] = cfg_.seed;
    manifest["versions"] = {{"snse", "1.0.0"}, {"compiler", __VERSION__}};
    manifest["threads"] = omp_get_max_threads();
    manifest["wall_clock_sec"] = wall;  // the one field reruns may differ in
    manifest["artifacts"] = artifacts_;
    write_text(std::filesystem::path(cli_.out_dir) / "manifest.json", manifest.dump(2) + "\n");
    write_text(std::filesystem::path(cli_.out_dir) / report_name, report.dump(2) + "\n");
  }

  void add_artifact(const std::string& name) { artifacts_.push_back(name); }

  std::ofstream open_artifact(const std::string& name) {
    add_artifact(name);
    return std::ofstream(std::filesystem::path(cli_.out_dir) / name);
  }

 private:
  Cli cli_;
  std::string command_;
  std::chrono::steady_clock::time_point start_;
  json experiment_;
  ModelConfig cfg_;
  std::unique_ptr<SphereGrid> grid_;
  std::unique_ptr<FlowEngine> engine_;
  std::vector<std::string> artifacts_;
};


json radii_json(const AbsorbingRadii& rad) {
  return {{"r1_sq", rad.r1_sq},
          {"r2_sq", rad.r2_sq},
          {"sup_pullback_term", rad.sup_pullback_term},
          {"int_exp_2p", rad.int_exp_2p},
          {"int_gamma_raw", rad.int_gamma_raw},
          {"int_gamma_pos", rad.int_gamma_pos},
          {"int_2p_unit", rad.int_2p_unit},
          {"int_2q_unit", rad.int_2q_unit},
          {"int_z_v2_unit", rad.int_z_v2_unit},
          {"c1", rad.c1},
          {"c2", rad.c2},
          {"c3", rad.c3},
          {"c4", rad.c4},
          {"c5", rad.c5},
          {"sup_z", rad.sup_z},
          {"sup_az", rad.sup_az},
          {"z0_v2", rad.z0_v2}};
}

int cmd_simulate(Runner& r) {
  const ModelConfig& cfg = r.cfg();
  const double horizon = r.exp_num("horizon", 2.0);
  const NoisePath path =
      r.make_covering_path(0.0, horizon, derive_seed(cfg.seed, StreamPurpose::path, 0));
  SpectralField v0 = sample_ball(cfg.l_max, cfg.l_min, r.exp_num("initial_radius", 0.5),
                                 derive_seed(cfg.seed, StreamPurpose::init, 0));
  const OUState z0 = r.engine().stationary_z(path, 0.0);
  v0 -= ou_field(z0, cfg.ou_params(), cfg.l_max);
  const auto run = r.engine().run_with_ledger(0.0, horizon, path, v0);

  // u-side energy/enstrophy columns and optional snapshots along the way
  const std::vector<double> snapshot_times = r.exp_list("snapshot_times", {});
  std::vector<double> u_energy, u_enstrophy;
  {
    OUState z = z0;
    SpectralField v = v0;
    u_energy.reserve(run.ledger.rows.size());
    u_enstrophy.reserve(run.ledger.rows.size());
    auto record = [&](double t) {
      SpectralField u = v;
      u += ou_field(z, cfg.ou_params(), cfg.l_max);
      u_energy.push_back(energy(u));
      u_enstrophy.push_back(enstrophy(u));
      for (std::size_t si = 0; si < snapshot_times.size(); ++si) {
        if (std::abs(snapshot_times[si] - t) <= 0.5 * cfg.dt) {
          auto os = r.open_artifact("snapshot_" + std::to_string(si) + ".json");
          write_snapshot(os, u, t);
        }
      }
    };
    record(0.0);
    for (std::size_t k = 1; k < run.ledger.rows.size(); ++k) {
      r.engine().step(v, z, path);
      record(run.ledger.rows[k].t);
    }
  }
  {
    auto os = r.open_artifact("trajectory.csv");
    write_trajectory_csv(os, run.ledger, u_energy, u_enstrophy);
  }
  {
    auto os = r.open_artifact("final_state.json");
    write_snapshot(os, run.v_final, horizon);
  }
  json rep;
  rep["blew_up"] = run.blew_up;
  if (run.blew_up) rep["blowup_time"] = run.blowup_time;
  rep["violations"] = run.ledger.violation_count();
  rep["final_v_h2"] = run.ledger.rows.back().v_h2;
  r.finish(rep, "simulate.json");
  if (run.blew_up) return kExitBlowup;
  return run.ledger.violation_count() == 0 ? kExitOk : kExitVerification;
}

int cmd_cocycle(Runner& r) {
  const ModelConfig& cfg = r.cfg();
  const double t = r.exp_num("t", 1.0);
  const double s = r.exp_num("s", 1.0);
  const int pairs = r.exp_int("pairs", 10);
  const double tol = r.exp_num("tolerance", 1e-10);
  double max_residual = 0.0;
  json rows = json::array();
  for (int i = 0; i < pairs; ++i) {
    const NoisePath path = r.make_covering_path(-s, t + s,
                                                derive_seed(cfg.seed, StreamPurpose::path, i));
    const SpectralField x = sample_ball(cfg.l_max, cfg.l_min, 1.0,
                                        derive_seed(cfg.seed, StreamPurpose::init, i));
    const double res = r.engine().verify_cocycle(t, s, path, x);
    rows.push_back({{"pair", i}, {"residual", res}});
    max_residual = std::max(max_residual, res);
  }
  json rep;
  rep["t"] = t;
  rep["s"] = s;
  rep["pairs"] = rows;
  rep["max_residual"] = max_residual;
  rep["tolerance"] = tol;
  rep["pass"] = max_residual <= tol;
  r.finish(rep, "cocycle.json");
  std::cout << "cocycle max residual " << max_residual << " (tolerance " << tol << ")\n";
  return max_residual <= tol ? kExitOk : kExitVerification;
}

int cmd_ou_stats(Runner& r, bool estimate_constants) {
  const ModelConfig& cfg = r.cfg();
  const OUParams ou = cfg.ou_params();
  json rep;

  if (estimate_constants) {
    OperatorContext ctx{&r.grid(), cfg.rotation, cfg.nu, cfg.spectrum};
    std::vector<SpectralField> modes;
    for (const auto& nm : cfg.noise_modes) {
      modes.push_back(SpectralField::unit_mode(nm.l, nm.m, cfg.l_max, cfg.l_min));
    }
    const ModeBoundEstimate mb = estimate_mode_bound_delta(
        modes, ctx, r.exp_int("delta_samples", 64), derive_seed(cfg.seed, StreamPurpose::probe, 1));
    const double cb = estimate_c_b(ctx, cfg.l_max, cfg.l_min, r.exp_int("cb_samples", 64),
                                   derive_seed(cfg.seed, StreamPurpose::probe, 2));
    rep["delta_hat"] = mb.delta_hat;
    rep["delta_analytic"] = mb.delta_analytic;
    rep["c_b_hat"] = cb;
    std::cout << "delta_hat " << mb.delta_hat << "  delta_analytic " << mb.delta_analytic
              << "  c_b_hat " << cb << "\n";
  }

  json moments = json::array();
  double worst = 0.0, worst_se = 0.0;
  for (std::size_t mode = 0; mode < ou.modes.size(); ++mode) {
    const MomentEstimate est =
        estimate_abs_moment(ou, cfg.beta, mode, cfg.dt / cfg.path_substeps,
                            r.exp_int("moment_paths", 200000),
                            derive_seed(cfg.seed, StreamPurpose::moment, mode));
    moments.push_back({{"l", ou.modes[mode].l},
                       {"m", ou.modes[mode].m},
                       {"mean_abs", est.mean},
                       {"stderr", est.stderr_}});
    if (est.mean > worst) {
      worst = est.mean;
      worst_se = est.stderr_;
    }
  }
  rep["stationary_abs_moments"] = moments;
  rep["certificate"] = {{"alpha", cfg.alpha},
                        {"lhs", 4.0 * cfg.delta * static_cast<double>(ou.modes.size()) *
                                    (worst + 2.0 * worst_se)},
                        {"rhs", cfg.lambda1() / 4.0}};

  const double horizon = r.exp_num("growth_horizon", 200.0);
  const NoisePath path = r.make_covering_path(0.0, horizon,
                                              derive_seed(cfg.seed, StreamPurpose::path, 7));
  const GrowthReport growth = check_growth(path, ou, 2.0 / cfg.beta, horizon, &r.grid());
  rep["growth"] = {{"kappa", 2.0 / cfg.beta},
                   {"sup_ratio", growth.sup_ratio},
                   {"bounded", growth.bounded}};

  // per-step CSV: t, z_1..z_m, gamma, p, q over one unit window
  {
    auto os = r.open_artifact("ou_trace.csv");
    os << "t";
    for (std::size_t i = 1; i <= ou.modes.size(); ++i) os << ",z_" << i;
    os << ",gamma,p,q\n";
    const GammaConstants gk = cfg.gamma_constants();
    OUState z = r.engine().stationary_z(path, 0.0);
    const std::size_t n = static_cast<std::size_t>(std::llround(std::min(horizon, 1.0) / cfg.dt));
    char buf[64];
    for (std::size_t k = 0; k <= n; ++k) {
      const GammaPQ gpq = gamma_p_q(z, gk);
      std::snprintf(buf, sizeof(buf), "%.17g", z.time);
      os << buf;
      for (const auto& zv : z.values) {
        std::snprintf(buf, sizeof(buf), ",%.17g", zv.real());
        os << buf;
      }
      std::snprintf(buf, sizeof(buf), ",%.17g,%.17g,%.17g", gpq.gamma, gpq.p, gpq.q);
      os << buf << "\n";
      if (k < n) z = ou_step(z, ou, path);
    }
  }
  r.finish(rep, "ou_stats.json");
  return kExitOk;
}

int cmd_verify(Runner& r) {
  const ModelConfig& cfg = r.cfg();
  const double t0 = r.exp_num("t0", -8.0);
  const int members = r.exp_int("members", 20);
  const double rho = r.exp_num("rho", 1.0);
  const NoisePath path =
      r.make_covering_path(t0, 1.0, derive_seed(cfg.seed, StreamPurpose::path, 0));

  std::vector<double> schedule;
  for (double t = -1.0; t >= t0 - 1e-9; t *= 2.0) schedule.push_back(std::max(t, t0));
  const AttractorEstimate est = pullback_ensemble(r.engine(), path, {t0}, rho, members,
                                                  derive_seed(cfg.seed, StreamPurpose::init, 0));
  const AbsorbingRadii rad = absorbing_radii(r.engine(), path, schedule);

  // re-run the members over [t0, 0] for the row-by-row Gronwall count
  int violations = 0;
  int blowups = est.excluded[0];
  int h_absorbed = 0, v_absorbed = 0;
  const OUState z0 = r.engine().stationary_z(path, t0);
  const SpectralField zf0 = ou_field(z0, cfg.ou_params(), cfg.l_max);
  for (int i = 0; i < members; ++i) {
    SpectralField v0 = sample_ball(cfg.l_max, cfg.l_min, rho,
                                   derive_seed(derive_seed(cfg.seed, StreamPurpose::init, 0),
                                               StreamPurpose::init, i));
    v0 -= zf0;
    const auto run = r.engine().run_with_ledger(t0, 0.0, path, v0);
    if (run.blew_up) continue;
    violations += run.ledger.violation_count();
  }
  for (std::size_t i = 0; i < est.v_at_minus1_h2[0].size(); ++i) {
    if (est.v_at_minus1_h2[0][i] <= rad.r1_sq) ++h_absorbed;
    if (v_norm2(est.clouds[0][i], cfg.spectrum) <= rad.r2_sq) ++v_absorbed;
  }
  const int survived = static_cast<int>(est.clouds[0].size());

  json rep;
  rep["members"] = members;
  rep["blowups"] = blowups;
  rep["gronwall_violations"] = violations;
  rep["r1_sq"] = rad.r1_sq;
  rep["r2_sq"] = rad.r2_sq;
  rep["ingredients"] = radii_json(rad);
  rep["h_absorbed"] = h_absorbed;
  rep["v_absorbed"] = v_absorbed;
  rep["survived"] = survived;
  const bool ok = violations == 0 && h_absorbed == survived && v_absorbed == survived;
  rep["pass"] = ok;
  r.finish(rep, "verify.json");
  std::cout << "verify: " << violations << " Gronwall violations, " << h_absorbed << "/"
            << survived << " H-absorbed, " << v_absorbed << "/" << survived << " V-absorbed\n";
  if (2 * blowups > members) return kExitBlowup;
  return ok ? kExitOk : kExitVerification;
}

int cmd_pullback(Runner& r, bool with_radii) {
  const ModelConfig& cfg = r.cfg();
  const std::vector<double> schedule =
      r.exp_list("t0_schedule", {-1.0, -2.0, -4.0, -8.0, -16.0, -32.0});
  const double rho = r.exp_num("rho", 1.0);
  const int members = r.exp_int("members", 8);
  const double tol = r.exp_num("trace_tolerance", 1e-2) * rho;
  const double deepest = *std::min_element(schedule.begin(), schedule.end());
  const NoisePath path =
      r.make_covering_path(deepest, 1.0, derive_seed(cfg.seed, StreamPurpose::path, 0));
  const AttractorEstimate est = pullback_ensemble(r.engine(), path, schedule, rho, members,
                                                  derive_seed(cfg.seed, StreamPurpose::init, 0));
  {
    auto os = r.open_artifact("cloud_norms.csv");
    os << "t0,member,h_norm,v_norm\n";
    char buf[256];
    for (std::size_t k = 0; k < est.clouds.size(); ++k) {
      for (std::size_t i = 0; i < est.clouds[k].size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%zu,%.17g,%.17g", est.t0_schedule[k], i,
                      h_norm(est.clouds[k][i]), v_norm(est.clouds[k][i], cfg.spectrum));
        os << buf << "\n";
      }
    }
  }
  const OmegaLimit om = omega_limit_estimate(est, tol);
  json rep;
  rep["t0_schedule"] = est.t0_schedule;
  rep["hausdorff_trace"] = est.hausdorff_trace;
  rep["excluded"] = est.excluded;
  rep["final_trace"] = om.final_trace;
  rep["converged"] = om.converged;
  int total_excluded = 0;
  for (int e : est.excluded) total_excluded += e;

  if (with_radii) {
    std::vector<double> rsched;
    for (double t : schedule) {
      if (t <= -1.0) rsched.push_back(t);
    }
    const AbsorbingRadii rad = absorbing_radii(r.engine(), path, rsched);
    int v_ok = 0, total = 0;
    for (const auto& u0 : om.cloud) {
      ++total;
      if (v_norm2(u0, cfg.spectrum) <= rad.r2_sq) ++v_ok;
    }
    rep["r1_sq"] = rad.r1_sq;
    rep["r2_sq"] = rad.r2_sq;
    rep["ingredients"] = radii_json(rad);
    rep["omega_limit_inside_v_ball"] = v_ok;
    rep["omega_limit_size"] = total;
    r.finish(rep, "attractor.json");
    std::cout << "attractor: final trace " << om.final_trace << " (tol " << tol << "), "
              << v_ok << "/" << total << " inside the V-ball\n";
    if (2 * total_excluded > members * static_cast<int>(schedule.size())) return kExitBlowup;
    if (v_ok != total) return kExitVerification;
    return om.converged ? kExitOk : kExitNotConverged;
  }
  r.finish(rep, "pullback.json");
  std::cout << "pullback: final trace " << om.final_trace << " (tol " << tol << ")\n";
  if (2 * total_excluded > members * static_cast<int>(schedule.size())) return kExitBlowup;
  return om.converged ? kExitOk : kExitNotConverged;
}

int cmd_measure(Runner& r) {
  const ModelConfig& cfg = r.cfg();
  const double t = r.exp_num("t", 0.5);
  const double s = r.exp_num("s", 0.5);
  const int n_lhs = r.exp_int("n_lhs", 10000);
  const int n_outer = r.exp_int("n_outer", 100);
  const int n_inner = r.exp_int("n_inner", 100);
  const int n_seeds = r.exp_int("measure_seeds", 100);
  const double t_big = r.exp_num("t_big", 8.0);
  const auto obs = default_observables(cfg.l_min);
  const SpectralField x = sample_ball(cfg.l_max, cfg.l_min, 0.5,
                                      derive_seed(cfg.seed, StreamPurpose::init, 1));

  json rep;
  const ChapmanKolmogorov ck = chapman_kolmogorov_check(
      r.engine(), obs[0].fn, t, s, x, n_lhs, n_outer, n_inner,
      derive_seed(cfg.seed, StreamPurpose::measure, 0));
  rep["chapman_kolmogorov"] = {{"lhs", ck.lhs.mean},
                               {"rhs", ck.rhs.mean},
                               {"lhs_stderr", ck.lhs.stderr_},
                               {"rhs_stderr", ck.rhs.stderr_},
                               {"combined_stderr", ck.combined_stderr},
                               {"pass", ck.pass_3sigma}};

  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < n_seeds; ++i) {
    seeds.push_back(derive_seed(cfg.seed, StreamPurpose::measure, 10000 + i));
  }
  const EmpiricalMeasure mu = pullback_measure(
      r.engine(), seeds, t_big, [&](std::uint64_t sd) {
        return sample_ball(cfg.l_max, cfg.l_min, 0.5, sd);
      });
  rep["measure_support"] = mu.support.size();
  rep["measure_excluded"] = mu.excluded;

  bool invariance_ok = true;
  json inv_rows = json::array();
  json table = json::array();
  for (const auto& named : obs) {
    const double mean = mu.mean_observable(named.fn);
    table.push_back({{"name", named.name}, {"mean", mean}});
    for (double ss : {0.25, 0.5}) {
      const InvarianceCheck inv =
          invariance_check(r.engine(), mu, named.fn, ss, r.exp_int("invariance_inner", 4),
                           derive_seed(cfg.seed, StreamPurpose::measure, 777));
      inv_rows.push_back({{"name", named.name},
                          {"s", ss},
                          {"direct", inv.direct},
                          {"evolved", inv.evolved},
                          {"diff_stderr", inv.diff_stderr},
                          {"pass", inv.pass_3sigma}});
      invariance_ok = invariance_ok && inv.pass_3sigma;
    }
  }
  rep["observables"] = table;
  rep["invariance"] = inv_rows;

  SpectralField dir = sample_ball(cfg.l_max, cfg.l_min, 1.0,
                                  derive_seed(cfg.seed, StreamPurpose::init, 2));
  const auto feller = feller_probe(r.engine(), obs[0].fn, r.exp_num("feller_t", 0.25), x, dir,
                                   r.exp_list("eps_list", {0.1, 0.01, 0.001}),
                                   r.exp_int("feller_samples", 200),
                                   derive_seed(cfg.seed, StreamPurpose::measure, 5));
  bool feller_ok = true;
  json fel = json::array();
  for (std::size_t k = 0; k < feller.size(); ++k) {
    fel.push_back({{"eps", feller[k].eps},
                   {"diff", feller[k].diff_mean},
                   {"stderr", feller[k].diff_stderr}});
    if (k > 0) {
      feller_ok = feller_ok &&
                  feller[k].diff_mean <= feller[k - 1].diff_mean +
                                             2.0 * (feller[k].diff_stderr +
                                                    feller[k - 1].diff_stderr);
    }
  }
  rep["feller"] = fel;

  {
    auto os = r.open_artifact("support_norms.csv");
    os << "member,h_norm,v_norm\n";
    char buf[256];
    for (std::size_t i = 0; i < mu.support.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g", i, h_norm(mu.support[i]),
                    v_norm(mu.support[i], cfg.spectrum));
      os << buf << "\n";
    }
  }

  const bool ok = ck.pass_3sigma && invariance_ok && feller_ok;
  rep["pass"] = ok;
  r.finish(rep, "measure.json");
  std::cout << "measure: CK " << (ck.pass_3sigma ? "pass" : "FAIL") << ", invariance "
            << (invariance_ok ? "pass" : "FAIL") << ", Feller trend "
            << (feller_ok ? "pass" : "FAIL") << "\n";
  if (2 * mu.excluded > n_seeds) return kExitBlowup;
  return ok ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral simulator for the stochastic Navier-Stokes equations on the rotating "
               "unit sphere with symmetric beta-stable Levy noise"};
  app.require_subcommand(1);

  Cli cli;
  app.add_option("--config", cli.config_path, "JSON config file (defaults when omitted)");
  app.add_option("--out", cli.out_dir, "output directory");
  auto* seed_opt = app.add_option("--seed", cli.seed, "base seed override");
  app.add_option("--threads", cli.threads, "OpenMP thread count");

  auto* c_sim = app.add_subcommand("simulate", "forward trajectory with energy ledger");
  auto* c_pull = app.add_subcommand("pullback", "pullback ensemble and Hausdorff trace");
  auto* c_attr = app.add_subcommand("attractor", "pullback attractor estimate with radii");
  bool estimate_constants = false;
  auto* c_ou = app.add_subcommand("ou-stats", "OU moments, alpha certificate, growth");
  c_ou->add_flag("--estimate-constants", estimate_constants,
                 "re-estimate delta and c_B at this truncation");
  auto* c_ver = app.add_subcommand("verify", "Gronwall/absorption verification ensemble");
  auto* c_mea = app.add_subcommand("measure", "invariant measure, Feller and semigroup checks");
  auto* c_coc = app.add_subcommand("cocycle", "cocycle identity residuals");
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);
  cli.seed_set = seed_opt->count() > 0;

  try {
    if (c_sim->parsed()) {
      Runner r(cli, "simulate");
      return cmd_simulate(r);
    }
    if (c_pull->parsed()) {
      Runner r(cli, "pullback");
      return cmd_pullback(r, false);
    }
    if (c_attr->parsed()) {
      Runner r(cli, "attractor");
      return cmd_pullback(r, true);
    }
    if (c_ou->parsed()) {
      Runner r(cli, "ou-stats");
      return cmd_ou_stats(r, estimate_constants);
    }
    if (c_ver->parsed()) {
      Runner r(cli, "verify");
      return cmd_verify(r);
    }
    if (c_mea->parsed()) {
      Runner r(cli, "measure");
      return cmd_measure(r);
    }
    if (c_coc->parsed()) {
      Runner r(cli, "cocycle");
      return cmd_cocycle(r);
    }
  } catch (int code) {
    return code;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
