// Feller Markov machinery: empirical invariant measures via pullback limits,
// Monte Carlo transition estimates P_t f, Feller-continuity probes and the
// Chapman-Kolmogorov identity check.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "snse/flow.hpp"

namespace snse {

using Observable = std::function<double(const SpectralField&)>;

struct NamedObservable {
  std::string name;
  Observable fn;
};

// Bounded test dictionary: exp(-|u|^2), a smoothed mode-amplitude indicator
// and 1/(1 + enstrophy). Stable noise makes high moments infinite, so
// unbounded observables stay out of the defaults.
std::vector<NamedObservable> default_observables(int l_ref = 2);

struct EmpiricalMeasure {
  std::vector<SpectralField> support;  // uniform weights
  int excluded = 0;                    // blow-up members

  double mean_observable(const Observable& f) const;
};

// One sample phi(t_big, theta_{-t_big} omega_i) x_i per seed; pooled over
// seeds this estimates rho = E mu_omega. Keeping one omega fixed and varying
// x_i only estimates mu_omega.
EmpiricalMeasure pullback_measure(const FlowEngine& engine,
                                  const std::vector<std::uint64_t>& path_seeds, double t_big,
                                  const std::function<SpectralField(std::uint64_t)>& init_sampler);

struct MCEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  int n = 0;
};

// Monte Carlo estimate of (P_t f)(x) over fresh independent paths.
MCEstimate transition_estimate(const FlowEngine& engine, const Observable& f, double t,
                               const SpectralField& x, int n_samples, std::uint64_t seed);

struct FellerPoint {
  double eps = 0.0;
  double diff_mean = 0.0;   // E |f(phi(t)(x + eps e)) - f(phi(t) x)|, common paths
  double diff_stderr = 0.0;
};

// Common-random-path differences |P_t f(x + eps e) - P_t f(x)| along a
// decreasing eps list.
std::vector<FellerPoint> feller_probe(const FlowEngine& engine, const Observable& f, double t,
                                      const SpectralField& x, const SpectralField& direction,
                                      const std::vector<double>& eps_list, int n_samples,
                                      std::uint64_t seed);

struct InvarianceCheck {
  double direct = 0.0;        // int f dmu
  double evolved = 0.0;       // int P_s f dmu
  double diff = 0.0;          // evolved - direct
  double diff_stderr = 0.0;   // paired-difference stderr over the support
  bool pass_3sigma = false;
};

// |int P_s f dmu - int f dmu| against the paired-difference Monte Carlo
// error: each support point contributes P_s f(u_k) - f(u_k) with fresh paths.
InvarianceCheck invariance_check(const FlowEngine& engine, const EmpiricalMeasure& mu,
                                 const Observable& f, double s, int n_inner,
                                 std::uint64_t seed);

struct ChapmanKolmogorov {
  MCEstimate lhs;  // P_{t+s} f (x)
  MCEstimate rhs;  // P_t (P_s f) (x), nested
  double combined_stderr = 0.0;
  bool pass_3sigma = false;
};

// Nested Monte Carlo check of P_{t+s} = P_t P_s at x.
ChapmanKolmogorov chapman_kolmogorov_check(const FlowEngine& engine, const Observable& f,
                                           double t, double s, const SpectralField& x,
                                           int n_lhs, int n_outer, int n_inner,
                                           std::uint64_t seed);

}  // namespace snse
