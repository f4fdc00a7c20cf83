#pragma once

// Seeded random inputs for the property tests.

#include "evfi/events.hpp"
#include "evfi/flow_mask.hpp"
#include "evfi/types.hpp"

#include <algorithm>
#include <cstdint>
#include <random>

namespace gen {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  bool coin() { return integer(0, 1) == 1; }
  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

inline evfi::Frame frame(Rng& r, int w, int h, double lo = 0.0, double hi = 1.0) {
  evfi::Frame f(h, w);
  for (Eigen::Index i = 0; i < f.size(); ++i) f(i) = r.uniform(lo, hi);
  return f;
}

/// Values on the 8-bit grid, so they survive PGM quantization.
inline evfi::Frame frame8(Rng& r, int w, int h) {
  evfi::Frame f(h, w);
  for (Eigen::Index i = 0; i < f.size(); ++i) f(i) = r.integer(0, 255) / 255.0;
  return f;
}

inline evfi::FlowField flow(Rng& r, int w, int h, double mag) {
  evfi::FlowField f(w, h);
  for (Eigen::Index i = 0; i < f.u.size(); ++i) {
    f.u(i) = r.uniform(-mag, mag);
    f.v(i) = r.uniform(-mag, mag);
  }
  return f;
}

inline evfi::FlowMask mask(Rng& r, int w, int h, double tau) {
  evfi::FlowMask m;
  m.tau = tau;
  for (auto* p : {&m.omega_0t_u, &m.omega_0t_v, &m.omega_1t_u, &m.omega_1t_v}) {
    p->resize(h, w);
    for (Eigen::Index i = 0; i < p->size(); ++i) (*p)(i) = r.uniform();
  }
  return m;
}

/// Sorted stream with n events inside (t_start, t_end].
inline evfi::EventStream stream(Rng& r, int w, int h, int n, double t_start = 0.0, double t_end = 1.0) {
  evfi::EventStream s{w, h, t_start, t_end, {}};
  for (int k = 0; k < n; ++k) {
    evfi::Event e;
    e.x = std::uint16_t(r.integer(0, w - 1));
    e.y = std::uint16_t(r.integer(0, h - 1));
    e.t = std::max(std::nextafter(t_start, t_end), r.uniform(t_start, t_end));
    e.polarity = r.coin() ? 1 : -1;
    s.events.push_back(e);
  }
  s.sort();
  return s;
}

}  // namespace gen
