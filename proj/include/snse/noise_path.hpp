// Stored two-sided multi-mode stable Levy paths and the shift theta_t.
//
// A path is kept as per-step increments, never as values: the shift is then
// an exact relabeling of the time origin, and path values follow by signed
// cumulative sums with L(0) = 0 exactly.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "snse/stable.hpp"

namespace snse {

class NoisePath {
 public:
  // Increments at generation time are S_beta(sigma_l h^(1/beta), delta, 0).
  NoisePath(std::vector<StableParams> mode_params, double h, double t_min, double t_max,
            std::uint64_t seed);

  // Path from explicit per-mode increment arrays (import, crafted test paths,
  // consistent refinements). Array lengths must all equal round((t_max-t_min)/h).
  static NoisePath from_increments(std::vector<StableParams> mode_params, double h, double t_min,
                                   std::vector<std::vector<double>> increments);

  int modes() const { return static_cast<int>(mode_params_.size()); }
  double step() const { return h_; }
  double t_min() const { return t_min_; }
  double t_max() const { return t_max_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t n_steps() const { return n_steps_; }
  const std::vector<StableParams>& mode_params() const { return mode_params_; }

  // Grid index of a time; throws on off-grid or out-of-range queries.
  std::size_t grid_index(double t) const;
  bool on_grid(double t) const;

  // Increment of mode l over [t, t+h] where t = t_min + k h.
  double increment(int mode, std::size_t k) const { return increments_[mode][k]; }

  // L_l(t) for grid-aligned t, as the cumulative sum anchored at L(0) = 0.
  double value(int mode, double t) const;

  // theta_s: value(result, t) = value(*this, t+s) - value(*this, s) exactly.
  // s must be grid aligned and keep a nonempty window; no resampling happens.
  NoisePath shifted(double s) const;

  void write_binary(std::ostream& os) const;
  static NoisePath read_binary(std::istream& is);
  void write_binary_file(const std::string& filename) const;
  static NoisePath read_binary_file(const std::string& filename);

  // Columns t, L_1..L_m.
  void write_csv(std::ostream& os) const;

 private:
  NoisePath() = default;

  std::vector<StableParams> mode_params_;
  double h_ = 0.0;
  double t_min_ = 0.0;
  double t_max_ = 0.0;
  std::uint64_t seed_ = 0;
  std::size_t n_steps_ = 0;
  std::size_t origin_ = 0;  // grid index of t = 0
  std::vector<std::vector<double>> increments_;
};

}  // namespace snse
