#include "snse/spectral_field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace snse {

double stokes_eig(int l, StokesSpectrum spectrum, int l_min) {
  if (l < l_min) {
    throw std::domain_error("stokes_eig: degree " + std::to_string(l) +
                            " below working floor l_min=" + std::to_string(l_min));
  }
  const double ll1 = static_cast<double>(l) * (l + 1);
  return spectrum == StokesSpectrum::stokes ? ll1 - 2.0 : ll1;
}

SpectralField::SpectralField(int l_max, int l_min) : l_max_(l_max), l_min_(l_min) {
  if (l_max < 1 || l_min < 1 || l_min > l_max) {
    throw std::invalid_argument("SpectralField: need 1 <= l_min <= l_max");
  }
  c_.assign(static_cast<std::size_t>(l_max + 1) * (l_max + 2) / 2, {0.0, 0.0});
}

std::size_t SpectralField::index(int l, int m) const {
  const std::size_t L = static_cast<std::size_t>(l_max_);
  const std::size_t mm = static_cast<std::size_t>(m);
  return mm * (L + 1) - mm * (mm - 1) / 2 + static_cast<std::size_t>(l - m);
}

void SpectralField::project() {
  for (int m = 0; m <= l_max_; ++m) {
    for (int l = m; l <= l_max_ && l < l_min_; ++l) c_[index(l, m)] = {0.0, 0.0};
  }
  for (int l = 0; l <= l_max_; ++l) {
    if (l >= l_min_) c_[index(l, 0)].imag(0.0);
  }
}

SpectralField& SpectralField::operator+=(const SpectralField& rhs) {
  if (!same_shape(rhs)) throw std::invalid_argument("SpectralField: truncation mismatch");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += rhs.c_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& rhs) {
  if (!same_shape(rhs)) throw std::invalid_argument("SpectralField: truncation mismatch");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= rhs.c_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& v : c_) v *= s;
  return *this;
}

SpectralField SpectralField::unit_mode(int l, int m, int l_max, int l_min) {
  if (l < l_min || l > l_max || m < 0 || m > l) {
    throw std::invalid_argument("SpectralField::unit_mode: mode outside truncation");
  }
  SpectralField f(l_max, l_min);
  const double ll1 = static_cast<double>(l) * (l + 1);
  f.at(l, m) = (m == 0) ? std::sqrt(ll1) : std::sqrt(ll1 / 2.0);
  return f;
}

namespace {

template <typename Fn>
double mode_sum(const SpectralField& f, Fn&& weight) {
  double acc = 0.0;
  for (int m = 0; m <= f.l_max(); ++m) {
    for (int l = std::max(m, f.l_min()); l <= f.l_max(); ++l) {
      const double mag2 = std::norm(f.at(l, m));
      acc += (m == 0 ? 1.0 : 2.0) * weight(l) * mag2;
    }
  }
  return acc;
}

}  // namespace

double h_norm2(const SpectralField& f, StokesSpectrum) {
  return mode_sum(f, [](int l) { return 1.0 / (static_cast<double>(l) * (l + 1)); });
}

double v_norm2(const SpectralField& f, StokesSpectrum spectrum) {
  return mode_sum(f, [&](int l) {
    return stokes_eig(l, spectrum, f.l_min()) / (static_cast<double>(l) * (l + 1));
  });
}

double a_norm2(const SpectralField& f, StokesSpectrum spectrum) {
  return mode_sum(f, [&](int l) {
    const double lam = stokes_eig(l, spectrum, f.l_min());
    return lam * lam / (static_cast<double>(l) * (l + 1));
  });
}

double h_norm(const SpectralField& f) { return std::sqrt(h_norm2(f)); }
double v_norm(const SpectralField& f, StokesSpectrum s) { return std::sqrt(v_norm2(f, s)); }
double a_norm(const SpectralField& f, StokesSpectrum s) { return std::sqrt(a_norm2(f, s)); }

double inner_h(const SpectralField& a, const SpectralField& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("inner_h: truncation mismatch");
  double acc = 0.0;
  for (int m = 0; m <= a.l_max(); ++m) {
    for (int l = std::max(m, a.l_min()); l <= a.l_max(); ++l) {
      const double re = a.at(l, m).real() * b.at(l, m).real() +
                        a.at(l, m).imag() * b.at(l, m).imag();
      acc += (m == 0 ? 1.0 : 2.0) * re / (static_cast<double>(l) * (l + 1));
    }
  }
  return acc;
}

double energy(const SpectralField& f) { return 0.5 * h_norm2(f); }

double enstrophy(const SpectralField& f) {
  return 0.5 * mode_sum(f, [](int) { return 1.0; });
}

namespace {

const char kB64[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::string b64_encode(const unsigned char* data, std::size_t n) {
  std::string out;
  out.reserve((n + 2) / 3 * 4);
  for (std::size_t i = 0; i < n; i += 3) {
    const unsigned b0 = data[i];
    const unsigned b1 = i + 1 < n ? data[i + 1] : 0;
    const unsigned b2 = i + 2 < n ? data[i + 2] : 0;
    out.push_back(kB64[b0 >> 2]);
    out.push_back(kB64[((b0 & 0x3) << 4) | (b1 >> 4)]);
    out.push_back(i + 1 < n ? kB64[((b1 & 0xF) << 2) | (b2 >> 6)] : '=');
    out.push_back(i + 2 < n ? kB64[b2 & 0x3F] : '=');
  }
  return out;
}

std::vector<unsigned char> b64_decode(const std::string& s) {
  auto val = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
  };
  std::vector<unsigned char> out;
  int buf = 0, bits = 0;
  for (char c : s) {
    if (c == '=') break;
    const int v = val(c);
    if (v < 0) continue;
    buf = (buf << 6) | v;
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back(static_cast<unsigned char>((buf >> bits) & 0xFF));
    }
  }
  return out;
}

}  // namespace

void write_snapshot(std::ostream& os, const SpectralField& f, double time) {
  nlohmann::json j;
  j["l_max"] = f.l_max();
  j["l_min"] = f.l_min();
  j["time"] = time;
  j["tag"] = f.tag();
  j["encoding"] = "base64/f64le";
  const auto* raw = reinterpret_cast<const unsigned char*>(f.data());
  j["data"] = b64_encode(raw, f.coeff_count() * sizeof(std::complex<double>));
  os << j.dump(2) << "\n";
}

SpectralField read_snapshot(std::istream& is, double* time_out) {
  nlohmann::json j;
  is >> j;
  SpectralField f(j.at("l_max").get<int>(), j.at("l_min").get<int>());
  const auto bytes = b64_decode(j.at("data").get<std::string>());
  if (bytes.size() != f.coeff_count() * sizeof(std::complex<double>)) {
    throw std::runtime_error("read_snapshot: coefficient payload size mismatch");
  }
  std::memcpy(f.data(), bytes.data(), bytes.size());
  if (time_out != nullptr) *time_out = j.at("time").get<double>();
  return f;
}

void write_spectral_csv(std::ostream& os, const SpectralField& f) {
  os << "l,m_z,re,im\n";
  char buf[64];
  for (int l = f.l_min(); l <= f.l_max(); ++l) {
    for (int m = 0; m <= l; ++m) {
      const auto& v = f.at(l, m);
      std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%.17g", l, m, v.real(), v.imag());
      os << buf << "\n";
    }
  }
}

}  // namespace snse
