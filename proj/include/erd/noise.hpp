// Copyright 2026 The ERD Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "erd/dense.hpp"
#include "erd/dfs.hpp"
#include "erd/errors.hpp"
#include "erd/sequence.hpp"

namespace erd {

/// Classical Gaussian dephasing noise with one-sided power spectral density
/// S(w) = amplitude^2 / w^alpha on [omega_min, omega_max], so that
/// <xi^2> = integral of S over the band.
struct SpectralNoise {
  double alpha = 1.0;
  double omega_min = 1.0;
  double omega_max = 10.0;
  double amplitude = 0.0;
  std::size_t n_harmonics = 256;
  std::uint64_t seed = 1;

  void validate() const {
    if (!(omega_min > 0.0 && omega_min < omega_max))
      throw DomainError("SpectralNoise: need 0 < omega_min < omega_max");
    if (n_harmonics < 8) throw DomainError("SpectralNoise: n_harmonics must be >= 8");
    if (!(amplitude >= 0.0)) throw DomainError("SpectralNoise: amplitude must be >= 0");
  }

  double psd(double w) const {
    if (w < omega_min || w > omega_max) return 0.0;
    return amplitude * amplitude / std::pow(w, alpha);
  }
};

/// SplitMix64 finaliser.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of trajectory `index` under `master`; independent of scheduling.
inline std::uint64_t trajectory_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

/**
 * One draw of the sum-of-harmonics process: log-uniform frequencies,
 * Gaussian amplitudes a_k with <a_k^2> = 2 S(w_k) dw_k, uniform phases.
 */
class NoiseRealization {
 public:
  NoiseRealization(const SpectralNoise& s, std::mt19937_64& rng) {
    s.validate();
    const double span = std::log(s.omega_max / s.omega_min);
    const std::size_t n = s.n_harmonics;
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    freq_.resize(n);
    amp_.resize(n);
    phase_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double w = s.omega_min * std::exp(span * u01(rng));
      const double dw = w * span / double(n);
      freq_[k] = w;
      amp_[k] = gauss(rng) * std::sqrt(2.0 * s.psd(w) * dw);
      phase_[k] = 2.0 * M_PI * u01(rng);
    }
  }

  double value(double t) const {
    double v = 0.0;
    for (std::size_t k = 0; k < freq_.size(); ++k)
      v += amp_[k] * std::cos(freq_[k] * t + phase_[k]);
    return v;
  }

  /// Values at t0 + j h for j < count, by phasor recurrence.
  std::vector<double> grid(double t0, double h, std::size_t count) const {
    std::vector<double> out(count, 0.0);
    const std::size_t n = freq_.size();
    std::vector<cplx> z(n), step(n);
    for (std::size_t k = 0; k < n; ++k) {
      z[k] = std::polar(1.0, freq_[k] * t0 + phase_[k]);
      step[k] = std::polar(1.0, freq_[k] * h);
    }
    for (std::size_t j = 0; j < count; ++j) {
      if (j % 4096 == 4095) {
        for (std::size_t k = 0; k < n; ++k)
          z[k] = std::polar(1.0, freq_[k] * (t0 + double(j) * h) + phase_[k]);
      }
      double v = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        v += amp_[k] * z[k].real();
        z[k] *= step[k];
      }
      out[j] = v;
    }
    return out;
  }

  /// Integrals of the process over [j h, (j+1) h] for j < count.
  std::vector<double> integrals(double h, std::size_t count) const {
    std::vector<double> out(count, 0.0);
    const std::size_t n = freq_.size();
    std::vector<cplx> z(n), step(n);
    for (std::size_t k = 0; k < n; ++k) {
      z[k] = std::polar(1.0, phase_[k]);
      step[k] = std::polar(1.0, freq_[k] * h);
    }
    for (std::size_t j = 0; j < count; ++j) {
      double v = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const cplx next = (j % 4096 == 4095)
                              ? std::polar(1.0, freq_[k] * double(j + 1) * h + phase_[k])
                              : z[k] * step[k];
        v += amp_[k] * (next.imag() - z[k].imag()) / freq_[k];
        z[k] = next;
      }
      out[j] = v;
    }
    return out;
  }

  const std::vector<double>& frequencies() const { return freq_; }

 private:
  std::vector<double> freq_, amp_, phase_;
};

/// Samples at t = j dt, j < horizon/dt, from the trajectory-0 stream of s.seed.
inline std::vector<double> sample_1f_trajectory(const SpectralNoise& s,
                                                double horizon, double dt_sample,
                                                std::uint64_t index = 0) {
  s.validate();
  if (!(dt_sample > 0.0) || !(dt_sample < M_PI / s.omega_max))
    throw DomainError("sample_1f_trajectory: dt_sample must be below pi/omega_max");
  if (!(horizon > 0.0)) throw DomainError("sample_1f_trajectory: horizon must be > 0");
  std::mt19937_64 rng(trajectory_seed(s.seed, index));
  const NoiseRealization r(s, rng);
  return r.grid(0.0, dt_sample, static_cast<std::size_t>(horizon / dt_sample));
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw DomainError("loglog_slope: need matching vectors of length >= 2");
  double mx = 0, my = 0;
  const double n = double(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] > 0.0) || !(y[k] > 0.0))
      throw DomainError("loglog_slope: values must be positive");
    mx += std::log(x[k]) / n;
    my += std::log(y[k]) / n;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double dx = std::log(x[k]) - mx;
    sxy += dx * (std::log(y[k]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

/**
 * Log-log slope of the Hann-windowed periodogram between w_lo and w_hi
 * (rad per unit time), after averaging into `bins` logarithmic bins.
 */
inline double psd_slope(const std::vector<double>& x, double dt, double w_lo,
                        double w_hi, std::size_t bins = 16) {
  const std::size_t n = x.size();
  if (n < 16) throw DomainError("psd_slope: series too short");
  std::vector<double> xw(n);
  double mean = 0;
  for (double v : x) mean += v / double(n);
  for (std::size_t j = 0; j < n; ++j)
    xw[j] = (x[j] - mean) * 0.5 * (1.0 - std::cos(2.0 * M_PI * double(j) / double(n - 1)));
  const double dw = 2.0 * M_PI / (double(n) * dt);
  std::vector<double> sum(bins, 0.0), cnt(bins, 0.0), wsum(bins, 0.0);
  const double span = std::log(w_hi / w_lo);
  for (std::size_t m = 1; m < n / 2; ++m) {
    const double w = dw * double(m);
    if (w < w_lo || w >= w_hi) continue;
    const auto b = static_cast<std::size_t>(std::log(w / w_lo) / span * double(bins));
    if (b >= bins) continue;
    const cplx step = std::polar(1.0, -w * dt);
    cplx z = 1.0, acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      acc += xw[j] * z;
      z *= step;
    }
    sum[b] += std::norm(acc);
    cnt[b] += 1.0;
    wsum[b] += w;
  }
  std::vector<double> ws, ps;
  for (std::size_t b = 0; b < bins; ++b) {
    if (cnt[b] == 0.0) continue;
    ws.push_back(wsum[b] / cnt[b]);
    ps.push_back(sum[b] / cnt[b]);
  }
  return loglog_slope(ws, ps);
}

enum class NoiseMode { Collective, Differential, Independent };

inline std::string mode_name(NoiseMode m) {
  switch (m) {
    case NoiseMode::Collective:
      return "collective";
    case NoiseMode::Differential:
      return "differential";
    case NoiseMode::Independent:
      return "independent";
  }
  return "?";
}

inline NoiseMode parse_mode(const std::string& s) {
  if (s == "collective") return NoiseMode::Collective;
  if (s == "differential") return NoiseMode::Differential;
  if (s == "independent") return NoiseMode::Independent;
  throw DomainError("unknown noise mode '" + s + "'");
}

struct DephasingOptions {
  NoiseMode mode = NoiseMode::Differential;
  std::size_t n_traj = 100;
  std::size_t min_traj = 1;
  double horizon = 10.0;     ///< initial simulated time
  double max_horizon = 0.0;  ///< horizon doubling cap while no 1/e crossing
  unsigned jobs = 1;
};

struct DephasingResult {
  std::vector<double> times;
  std::vector<double> coherence;
  double t2 = std::numeric_limits<double>::infinity();
  bool crossed = false;
};

/// First crossing below 1/e, linearly interpolated.
inline std::optional<double> first_crossing(const std::vector<double>& t,
                                            const std::vector<double>& c,
                                            double level = std::exp(-1.0)) {
  for (std::size_t k = 1; k < c.size(); ++k) {
    if (c[k] < level) {
      const double f = (c[k - 1] - level) / (c[k - 1] - c[k]);
      return t[k - 1] + f * (t[k] - t[k - 1]);
    }
  }
  return std::nullopt;
}

namespace detail {

/// Largest step of which every free interval is an integer multiple.
inline double common_step(const PulseSequence& seq) {
  double h = 0.0;
  for (const auto& e : seq.events())
    if (const auto* f = std::get_if<Free>(&e); f && f->tau > 0.0)
      h = h == 0.0 ? f->tau : std::min(h, f->tau);
  if (h == 0.0) throw DomainError("dephasing_run: sequence has no free evolution");
  for (const auto& e : seq.events()) {
    if (const auto* f = std::get_if<Free>(&e); f && f->tau > 0.0) {
      const double r = f->tau / h;
      if (std::abs(r - std::round(r)) > 1e-9 * r)
        throw DomainError("dephasing_run: free intervals must be multiples of the shortest");
    }
  }
  return h;
}

template <class F>
void parallel_for(std::size_t n, unsigned jobs, F&& body) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errs(jobs);
  for (unsigned w = 0; w < jobs; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += jobs) body(i);
      } catch (...) {
        errs[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

}  // namespace detail

/**
 * Logical coherence of |+_L> on a two-ion pair under classical dephasing
 * H(t) = b1(t) Z_1 + b2(t) Z_2 and the pulses of `seq`, repeated until the
 * horizon. Free evolution is diagonal, so each interval is propagated
 * exactly from the integrated noise. Coherence 2|rho_01| is averaged over trajectories and recorded
 * at cycle boundaries.
 */
inline DephasingResult dephasing_run(const PulseSequence& seq,
                                     const SpectralNoise& s,
                                     const DephasingOptions& o) {
  s.validate();
  if (o.n_traj < o.min_traj || o.n_traj == 0)
    throw DomainError("dephasing_run: " + std::to_string(o.n_traj) +
                      " trajectories, at least " +
                      std::to_string(std::max<std::size_t>(o.min_traj, 1)) +
                      " required");
  if (!(o.horizon > 0.0)) throw DomainError("dephasing_run: horizon must be > 0");
  const double h = detail::common_step(seq);
  const double cycle = seq.cycle_time();

  // Per-event action on the 4-dim register: number of noise steps, or a pulse.
  struct Step {
    std::size_t free_steps = 0;
    Matrix pulse;
  };
  std::vector<Step> program;
  for (const auto& e : seq.events()) {
    if (const auto* f = std::get_if<Free>(&e)) {
      program.push_back({static_cast<std::size_t>(std::llround(f->tau / h)), {}});
    } else if (const auto* p = std::get_if<Pulse>(&e)) {
      program.push_back({0, pulse_unitary(*p, 2)});
    } else {
      throw DomainError("dephasing_run: drive segments are not supported");
    }
  }
  // Written order: the last event acts first.
  std::reverse(program.begin(), program.end());
  std::size_t steps_per_cycle = 0;
  for (const auto& st : program) steps_per_cycle += st.free_steps;

  const DfsRegister reg({IonPair{0, 1}}, 2);
  const Index i0 = reg.physical_index(0), i1 = reg.physical_index(1);
  // Z eigenvalues of qubits 0 and 1 on each basis state (bit 0 is +1).
  const double z0[4] = {1, 1, -1, -1}, z1[4] = {1, -1, 1, -1};

  double horizon = o.horizon;
  const double cap = std::max(o.max_horizon, o.horizon);
  DephasingResult res;
  for (;;) {
    const auto cycles = static_cast<std::size_t>(std::max(1.0, std::floor(horizon / cycle + 1e-9)));
    const std::size_t total_steps = cycles * steps_per_cycle;
    std::vector<std::vector<cplx>> rho01(o.n_traj, std::vector<cplx>(cycles + 1));
    detail::parallel_for(o.n_traj, o.jobs, [&](std::size_t idx) {
      std::mt19937_64 rng(trajectory_seed(s.seed, idx));
      const NoiseRealization r1(s, rng);
      std::vector<double> xa = r1.integrals(h, total_steps), xb;
      if (o.mode == NoiseMode::Independent) {
        const NoiseRealization r2(s, rng);
        xb = r2.integrals(h, total_steps);
      }
      Vector psi = Vector::Zero(4);
      psi(i0) = psi(i1) = 1.0 / std::sqrt(2.0);
      auto& out = rho01[idx];
      out[0] = psi(i0) * std::conj(psi(i1));
      std::size_t j = 0;
      for (std::size_t c = 1; c <= cycles; ++c) {
        for (const auto& st : program) {
          if (st.free_steps == 0) {
            if (st.pulse.size() != 0) psi = st.pulse * psi;
            continue;
          }
          // Free evolution is diagonal: only the integrated noise matters.
          double s1 = 0.0, s2 = 0.0;
          for (std::size_t k = 0; k < st.free_steps; ++k, ++j) {
            s1 += xa[j];
            s2 += o.mode == NoiseMode::Independent ? xb[j] : xa[j];
          }
          if (o.mode == NoiseMode::Differential) s2 = -s2;
          for (int q = 0; q < 4; ++q)
            psi(q) *= std::polar(1.0, -(s1 * z0[q] + s2 * z1[q]));
        }
        out[c] = psi(i0) * std::conj(psi(i1));
      }
    });
    res.times.assign(cycles + 1, 0.0);
    res.coherence.assign(cycles + 1, 0.0);
    for (std::size_t c = 0; c <= cycles; ++c) {
      cplx acc = 0.0;
      for (std::size_t idx = 0; idx < o.n_traj; ++idx) acc += rho01[idx][c];
      res.times[c] = double(c) * cycle;
      res.coherence[c] = 2.0 * std::abs(acc) / double(o.n_traj);
    }
    if (auto t2 = first_crossing(res.times, res.coherence)) {
      res.t2 = *t2;
      res.crossed = true;
      return res;
    }
    if (horizon * 2.0 > cap * (1.0 + 1e-12)) return res;
    horizon *= 2.0;
  }
}

struct ScanRow {
  double dt = 0.0;
  double t2_base = 0.0;
  double t2_pulsed = 0.0;
  double gain = 0.0;
  std::size_t n_traj = 0;
  std::uint64_t seed = 0;
};

/**
 * T2 with the sequence family versus plain free evolution, per grid point.
 * Both see the same noise trajectories. The baseline is sampled every
 * `base_step` (every dt when 0).
 */
inline std::vector<ScanRow> suppression_scan(
    const std::function<PulseSequence(double)>& family,
    const std::vector<double>& dt_grid, const SpectralNoise& s,
    const DephasingOptions& o, double base_step = 0.0) {
  if (dt_grid.size() < 4) throw DomainError("suppression_scan: grid needs >= 4 points");
  for (double dt : dt_grid)
    if (!(dt > 0.0)) throw DomainError("suppression_scan: dt must be > 0");
  std::optional<double> shared_base;
  if (base_step > 0.0)
    shared_base = dephasing_run(PulseSequence({Free{base_step}}), s, o).t2;
  std::vector<ScanRow> rows;
  for (double dt : dt_grid) {
    const double t2_base = shared_base
                               ? *shared_base
                               : dephasing_run(PulseSequence({Free{dt}}), s, o).t2;
    const double t2_pulsed = dephasing_run(family(dt), s, o).t2;
    rows.push_back({dt, t2_base, t2_pulsed, t2_pulsed / t2_base, o.n_traj, s.seed});
  }
  return rows;
}

inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string scan_csv(const std::vector<ScanRow>& rows) {
  std::string out = "dt,t2_base,t2_pulsed,gain,n_traj,seed\n";
  for (const auto& r : rows) {
    out += format_g17(r.dt) + "," + format_g17(r.t2_base) + "," +
           format_g17(r.t2_pulsed) + "," + format_g17(r.gain) + "," +
           std::to_string(r.n_traj) + "," + std::to_string(r.seed) + "\n";
  }
  return out;
}

}  // namespace erd
