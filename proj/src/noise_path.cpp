#include "snse/noise_path.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace snse {

namespace {

constexpr char kMagic[8] = {'S', 'N', 'S', 'E', 'P', 'A', 'T', 'H'};
constexpr std::uint32_t kVersion = 1;

// Grid times are addressed by rounding; the tolerance is relative to h so a
// chain of t = t_min + k*h evaluations can never drift off the grid.
bool aligned(double x, double h, std::int64_t& k_out) {
  const double k = x / h;
  const double kr = std::round(k);
  if (std::abs(k - kr) > 1e-6 * std::max(1.0, std::abs(k))) return false;
  k_out = static_cast<std::int64_t>(kr);
  return true;
}

template <typename T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

}  // namespace

NoisePath::NoisePath(std::vector<StableParams> mode_params, double h, double t_min, double t_max,
                     std::uint64_t seed)
    : mode_params_(std::move(mode_params)), h_(h), t_min_(t_min), t_max_(t_max), seed_(seed) {
  if (!(h > 0.0)) throw std::invalid_argument("NoisePath: step h must be positive");
  if (!(t_min <= 0.0 && 0.0 <= t_max)) {
    throw std::invalid_argument("NoisePath: window must satisfy t_min <= 0 <= t_max");
  }
  if (mode_params_.empty()) throw std::invalid_argument("NoisePath: needs at least one mode");
  for (const auto& p : mode_params_) p.validate();

  std::int64_t k_lo = 0, k_hi = 0;
  if (!aligned(t_min, h, k_lo) || !aligned(t_max, h, k_hi)) {
    throw std::invalid_argument("NoisePath: h must divide |t_min| and t_max");
  }
  n_steps_ = static_cast<std::size_t>(k_hi - k_lo);
  origin_ = static_cast<std::size_t>(-k_lo);

  increments_.resize(mode_params_.size());
  for (int l = 0; l < modes(); ++l) {
    auto& inc = increments_[l];
    inc.resize(n_steps_);
    StableParams p = mode_params_[l];
    p.scale = p.scale * std::pow(h_, 1.0 / p.beta);
    const CounterRng rng(derive_seed(seed_, StreamPurpose::path, static_cast<std::uint64_t>(l)));
    // Counters are global step indices so regenerating a wider window around
    // the same seed reproduces the overlap bit-exactly.
    const std::uint64_t base = static_cast<std::uint64_t>(1) << 62;  // keeps k_lo + j >= 0
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < static_cast<std::int64_t>(n_steps_); ++j) {
      inc[static_cast<std::size_t>(j)] =
          sample_stable_at(p, rng, base + static_cast<std::uint64_t>(k_lo + j));
    }
  }
}

NoisePath NoisePath::from_increments(std::vector<StableParams> mode_params, double h, double t_min,
                                     std::vector<std::vector<double>> increments) {
  if (!(h > 0.0)) throw std::invalid_argument("NoisePath: step h must be positive");
  if (increments.empty() || increments.size() != mode_params.size()) {
    throw std::invalid_argument("NoisePath::from_increments: mode count mismatch");
  }
  const std::size_t n = increments.front().size();
  for (const auto& inc : increments) {
    if (inc.size() != n) {
      throw std::invalid_argument("NoisePath::from_increments: ragged increment arrays");
    }
  }
  std::int64_t k_lo = 0;
  if (!aligned(t_min, h, k_lo) || k_lo > 0) {
    throw std::invalid_argument("NoisePath::from_increments: t_min must be grid aligned and <= 0");
  }
  NoisePath out;
  out.mode_params_ = std::move(mode_params);
  out.h_ = h;
  out.t_min_ = t_min;
  out.t_max_ = t_min + static_cast<double>(n) * h;
  out.seed_ = 0;
  out.n_steps_ = n;
  out.origin_ = static_cast<std::size_t>(-k_lo);
  if (out.origin_ > n) {
    throw std::invalid_argument("NoisePath::from_increments: window must contain t = 0");
  }
  out.increments_ = std::move(increments);
  return out;
}

bool NoisePath::on_grid(double t) const {
  std::int64_t k = 0;
  if (!aligned(t - t_min_, h_, k)) return false;
  return k >= 0 && static_cast<std::size_t>(k) <= n_steps_;
}

std::size_t NoisePath::grid_index(double t) const {
  std::int64_t k = 0;
  if (!aligned(t - t_min_, h_, k)) {
    throw std::invalid_argument("NoisePath: time " + std::to_string(t) + " is off the step grid");
  }
  if (k < 0 || static_cast<std::size_t>(k) > n_steps_) {
    throw std::out_of_range("NoisePath: time " + std::to_string(t) + " outside stored window [" +
                            std::to_string(t_min_) + ", " + std::to_string(t_max_) + "]");
  }
  return static_cast<std::size_t>(k);
}

double NoisePath::value(int mode, double t) const {
  const std::size_t i = grid_index(t);
  const auto& inc = increments_[mode];
  double s = 0.0;
  if (i >= origin_) {
    for (std::size_t k = origin_; k < i; ++k) s += inc[k];
  } else {
    for (std::size_t k = i; k < origin_; ++k) s += inc[k];
    s = -s;
  }
  return s;
}

NoisePath NoisePath::shifted(double s) const {
  std::int64_t j = 0;
  if (!aligned(s, h_, j)) {
    throw std::invalid_argument("NoisePath::shifted: s must be a multiple of the step");
  }
  const std::int64_t new_origin = static_cast<std::int64_t>(origin_) + j;
  if (new_origin < 0 || new_origin > static_cast<std::int64_t>(n_steps_)) {
    throw std::out_of_range("NoisePath::shifted: shifted origin leaves the stored window");
  }
  NoisePath out;
  out.mode_params_ = mode_params_;
  out.h_ = h_;
  out.t_min_ = t_min_ - static_cast<double>(j) * h_;
  out.t_max_ = t_max_ - static_cast<double>(j) * h_;
  out.seed_ = seed_;
  out.n_steps_ = n_steps_;
  out.origin_ = static_cast<std::size_t>(new_origin);
  out.increments_ = increments_;
  return out;
}

void NoisePath::write_binary(std::ostream& os) const {
  os.write(kMagic, sizeof(kMagic));
  put(os, kVersion);
  put(os, static_cast<std::uint32_t>(modes()));
  put(os, static_cast<std::uint64_t>(n_steps_));
  put(os, static_cast<std::uint64_t>(origin_));
  put(os, h_);
  put(os, t_min_);
  put(os, t_max_);
  put(os, seed_);
  for (const auto& p : mode_params_) put(os, p.beta);
  for (const auto& p : mode_params_) put(os, p.scale);
  for (const auto& inc : increments_) {
    os.write(reinterpret_cast<const char*>(inc.data()),
             static_cast<std::streamsize>(inc.size() * sizeof(double)));
  }
}

NoisePath NoisePath::read_binary(std::istream& is) {
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("NoisePath: bad magic, not a SNSEPATH container");
  }
  const auto version = get<std::uint32_t>(is);
  if (version != kVersion) {
    throw std::runtime_error("NoisePath: unsupported container version " + std::to_string(version));
  }
  NoisePath out;
  const auto m = get<std::uint32_t>(is);
  out.n_steps_ = get<std::uint64_t>(is);
  out.origin_ = get<std::uint64_t>(is);
  out.h_ = get<double>(is);
  out.t_min_ = get<double>(is);
  out.t_max_ = get<double>(is);
  out.seed_ = get<std::uint64_t>(is);
  out.mode_params_.resize(m);
  for (auto& p : out.mode_params_) p.beta = get<double>(is);
  for (auto& p : out.mode_params_) p.scale = get<double>(is);
  out.increments_.resize(m);
  for (auto& inc : out.increments_) {
    inc.resize(out.n_steps_);
    is.read(reinterpret_cast<char*>(inc.data()),
            static_cast<std::streamsize>(inc.size() * sizeof(double)));
  }
  if (!is) throw std::runtime_error("NoisePath: truncated container");
  return out;
}

void NoisePath::write_binary_file(const std::string& filename) const {
  std::ofstream os(filename, std::ios::binary);
  if (!os) throw std::runtime_error("NoisePath: cannot open " + filename + " for writing");
  write_binary(os);
}

NoisePath NoisePath::read_binary_file(const std::string& filename) {
  std::ifstream is(filename, std::ios::binary);
  if (!is) throw std::runtime_error("NoisePath: cannot open " + filename);
  return read_binary(is);
}

void NoisePath::write_csv(std::ostream& os) const {
  os << "t";
  for (int l = 1; l <= modes(); ++l) os << ",L_" << l;
  os << "\n";
  // Values anchored at L(0) = 0: accumulate leftward and rightward from the
  // origin so the anchor holds exactly.
  const std::size_t m = static_cast<std::size_t>(modes());
  std::vector<std::vector<double>> vals(m, std::vector<double>(n_steps_ + 1, 0.0));
  for (std::size_t l = 0; l < m; ++l) {
    for (std::size_t k = origin_; k < n_steps_; ++k) {
      vals[l][k + 1] = vals[l][k] + increments_[l][k];
    }
    for (std::size_t k = origin_; k-- > 0;) {
      vals[l][k] = vals[l][k + 1] - increments_[l][k];
    }
  }
  char buf[32];
  for (std::size_t k = 0; k <= n_steps_; ++k) {
    std::snprintf(buf, sizeof(buf), "%.17g", t_min_ + static_cast<double>(k) * h_);
    os << buf;
    for (std::size_t l = 0; l < m; ++l) {
      std::snprintf(buf, sizeof(buf), "%.17g", vals[l][k]);
      os << ',' << buf;
    }
    os << "\n";
  }
}

}  // namespace snse
