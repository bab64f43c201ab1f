// Pullback experiments, Omega-limit estimation, Hausdorff semi-distance and
// the absorbing radii r_1^2, c_1..c_5, r_2^2 with their verification data.
#pragma once

#include <vector>

#include "snse/flow.hpp"

namespace snse {

using Cloud = std::vector<SpectralField>;

// Brute-force O(|A||B|) Hausdorff semi-distance in the H norm.
double hausdorff_semidist(const Cloud& a, const Cloud& b);
double hausdorff_dist(const Cloud& a, const Cloud& b);

// Uniformly random direction in the retained modes, scaled to |u|_H = rho.
SpectralField sample_ball(int l_max, int l_min, double rho, std::uint64_t seed);

struct AttractorEstimate {
  std::vector<double> t0_schedule;             // pullback start times, decreasing
  std::vector<Cloud> clouds;                   // states at t = 0 per t0
  std::vector<double> hausdorff_trace;         // rho(cloud_k, cloud_{k+1})
  std::vector<int> excluded;                   // blow-up members per t0
  std::vector<std::vector<double>> v_at_minus1_h2;  // |v(-1)|^2 per member per t0
  std::uint64_t path_seed = 0;
};

// Transports the same sampled ball of initial conditions along the same
// noise realization from every t0 in the schedule to time 0.
AttractorEstimate pullback_ensemble(const FlowEngine& engine, const NoisePath& path,
                                    const std::vector<double>& t0_schedule, double rho,
                                    int n_samples, std::uint64_t init_seed);

struct AbsorbingRadii {
  double r1_sq = 0.0;
  double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0, c5 = 0.0;
  double r2_sq = 0.0;
  // ingredients
  double sup_pullback_term = 0.0;  // sup_{t0} e^{int_{t0}^{-1} gamma} |z(t0)|^2
  double int_exp_2p = 0.0;         // int_{T}^{-1} e^{int_s^{-1} gamma} 2p ds
  double int_gamma_raw = 0.0;      // int_{-1}^{0} gamma (logged, can be negative)
  double int_gamma_pos = 0.0;      // int_{-1}^{0} max(gamma, 0)
  double int_2p_unit = 0.0;        // int_{-1}^{0} 2p
  double int_2q_unit = 0.0;        // int_{-1}^{0} 2q
  double int_z_v2_unit = 0.0;      // int_{-1}^{0} |z|_V^2
  double sup_z_h2 = 0.0;           // sup_{[-1,0]} |z|^2
  double sup_z = 0.0;              // sup_{[-1,0]} |z|
  double sup_az = 0.0;             // sup_{[-1,0]} |Az|
  double z0_v2 = 0.0;              // |z(0)|_V^2
};

// Evaluates the radii with integrals truncated to the computed window
// [min t0, 0] and sups over the schedule; c_2 uses the positive part of
// int gamma (the raw value is logged alongside).
AbsorbingRadii absorbing_radii(const FlowEngine& engine, const NoisePath& path,
                               const std::vector<double>& t0_schedule);

struct OmegaLimit {
  Cloud cloud;
  bool converged = false;
  double final_trace = 0.0;
};

// Cloud of the largest |t0| with its convergence certificate; flagged
// not-converged (but still returned) when the trace tail exceeds tol.
OmegaLimit omega_limit_estimate(const AttractorEstimate& est, double tol);

}  // namespace snse
