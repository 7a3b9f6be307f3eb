#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "ringscan/aimsim.hpp"
#include "ringscan/rng.hpp"
#include "ringscan/scene.hpp"
#include "fft.hpp"

namespace ringscan {

double NoiseVisConfig::wavelength_m() const { return kSpeedOfLight / carrier_hz; }

void NoiseVisConfig::validate() const {
  if (tx_positions_m.empty())
    throw std::invalid_argument("noise sim: at least one transmitter is required");
  for (const auto& p : tx_positions_m)
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw std::invalid_argument("noise sim: transmitter positions must be finite");
  if (!(rx_separation_m > 0.0))
    throw std::invalid_argument("noise sim: receiver separation must be > 0");
  if (!(carrier_hz > 0.0)) throw std::invalid_argument("noise sim: carrier must be > 0");
  if (!(noise_bandwidth_hz > 0.0))
    throw std::invalid_argument("noise sim: noise bandwidth must be > 0");
  if (!(sample_rate_hz >= noise_bandwidth_hz))
    throw std::invalid_argument("noise sim: sample rate must cover the noise bandwidth");
  if (samples_per_dwell < 2)
    throw std::invalid_argument("noise sim: at least two samples per dwell");
  if (std::isnan(snr_db)) throw std::invalid_argument("noise sim: snr_db must not be NaN");
}

namespace {

void check_scatterers(std::span<const Scatterer> scatterers) {
  if (scatterers.empty()) throw std::invalid_argument("noise sim: no scatterers");
  for (const auto& s : scatterers) {
    if (!std::isfinite(s.l) || !std::isfinite(s.m) || !std::isfinite(s.reflectivity))
      throw std::invalid_argument("noise sim: scatterer fields must be finite");
    if (std::abs(s.l) > 1.0 || std::abs(s.m) > 1.0)
      throw std::invalid_argument("noise sim: direction cosines must lie in [-1, 1]");
    if (s.reflectivity < 0.0)
      throw std::invalid_argument("noise sim: reflectivity must be >= 0");
  }
}

// Frequency response (unnormalized DFT) of a power-preserving low-pass filter:
// Hamming-windowed sinc with normalized cutoff fc, zero-phase placement,
// taps scaled so the sum of squares is 1 (white noise keeps unit power).
std::vector<cplx> lowpass_response(std::size_t n, double fc) {
  std::size_t taps = 129;
  if (taps > n) taps = (n % 2 == 0) ? n - 1 : n;  // largest odd count that fits
  const auto m = static_cast<double>((taps - 1) / 2);

  std::vector<double> h(taps);
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < taps; ++i) {
    const double t = static_cast<double>(i) - m;
    const double x = 2.0 * std::numbers::pi * fc * t;
    const double sinc = t == 0.0 ? 1.0 : std::sin(x) / x;
    const double window =
        0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                               static_cast<double>(taps - 1));
    h[i] = sinc * window;
    sum_sq += h[i] * h[i];
  }
  const double scale = 1.0 / std::sqrt(sum_sq);

  std::vector<cplx> padded(n, cplx{0.0, 0.0});
  for (std::size_t i = 0; i < taps; ++i) {
    const auto shifted = (i + n - static_cast<std::size_t>(m)) % n;
    padded[shifted] = cplx{h[i] * scale, 0.0};
  }
  detail::dft1d_inplace(padded, -1);
  return padded;
}

void bandlimit_inplace(std::vector<cplx>& x, const std::vector<cplx>& response) {
  const auto n = x.size();
  detail::dft1d_inplace(x, -1);
  for (std::size_t i = 0; i < n; ++i) x[i] *= response[i] / static_cast<double>(n);
  detail::dft1d_inplace(x, +1);
}

}  // namespace

DwellSignals simulate_dwell(const NoiseVisConfig& config, std::span<const Scatterer> scatterers,
                            double angle_rad, std::mt19937_64& engine) {
  config.validate();
  check_scatterers(scatterers);

  const double lambda = config.wavelength_m();
  const double half = 0.5 * config.rx_separation_m;
  const Vec2 rx1{config.rx_centroid_m.x + half * std::sin(angle_rad),
                 config.rx_centroid_m.y + half * std::cos(angle_rad)};
  const Vec2 rx2{config.rx_centroid_m.x - half * std::sin(angle_rad),
                 config.rx_centroid_m.y - half * std::cos(angle_rad)};

  // Geometric gain of each transmitter as seen by each receiver: the coherent
  // sum over scatterers of sqrt(reflectivity) times the carrier phase accrued
  // on the tx->scatterer and scatterer->rx legs.
  const auto path_gain = [&](const Vec2& tx, const Vec2& rx) {
    cplx g{0.0, 0.0};
    for (const auto& s : scatterers) {
      const double phase =
          2.0 * std::numbers::pi * ((tx.x + rx.x) * s.l + (tx.y + rx.y) * s.m) / lambda;
      g += std::sqrt(s.reflectivity) * std::polar(1.0, phase);
    }
    return g;
  };
  const auto n_tx = config.tx_positions_m.size();
  std::vector<cplx> gain1(n_tx), gain2(n_tx);
  for (std::size_t t = 0; t < n_tx; ++t) {
    gain1[t] = path_gain(config.tx_positions_m[t], rx1);
    gain2[t] = path_gain(config.tx_positions_m[t], rx2);
  }

  const std::size_t n = config.samples_per_dwell;
  std::normal_distribution<double> unit_component(0.0, std::numbers::sqrt2 / 2.0);
  const auto draw_stream = [&] {
    std::vector<cplx> s(n);
    for (auto& v : s) {
      const double re = unit_component(engine);
      const double im = unit_component(engine);
      v = cplx{re, im};
    }
    return s;
  };

  const std::vector<cplx> response =
      lowpass_response(n, 0.5 * config.noise_bandwidth_hz / config.sample_rate_hz);

  DwellSignals out;
  out.rx1.assign(n, cplx{0.0, 0.0});
  out.rx2.assign(n, cplx{0.0, 0.0});
  for (std::size_t t = 0; t < n_tx; ++t) {
    std::vector<cplx> waveform = draw_stream();
    bandlimit_inplace(waveform, response);
    for (std::size_t i = 0; i < n; ++i) {
      out.rx1[i] += waveform[i] * gain1[t];
      out.rx2[i] += waveform[i] * gain2[t];
    }
  }

  if (std::isfinite(config.snr_db)) {
    const auto add_noise = [&](std::vector<cplx>& rx, const std::vector<cplx>& gains) {
      double power = 0.0;
      for (const auto& g : gains) power += std::norm(g);
      if (power == 0.0) power = 1.0;  // empty scene: anchor the level at unity
      const double sigma =
          std::sqrt(power * std::pow(10.0, -config.snr_db / 10.0)) * std::numbers::sqrt2 / 2.0;
      std::normal_distribution<double> component(0.0, sigma);
      for (auto& v : rx) {
        const double re = component(engine);
        const double im = component(engine);
        v += cplx{re, im};
      }
    };
    add_noise(out.rx1, gain1);
    add_noise(out.rx2, gain2);
  }
  return out;
}

cplx correlate(const DwellSignals& signals) {
  if (signals.rx1.size() != signals.rx2.size() || signals.rx1.empty())
    throw std::invalid_argument("correlate: receiver streams must be non-empty and equal length");
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < signals.rx1.size(); ++i)
    acc += signals.rx1[i] * std::conj(signals.rx2[i]);
  return acc / static_cast<double>(signals.rx1.size());
}

RingSampleSet measure_ring(const NoiseVisConfig& config, std::span<const Scatterer> scatterers,
                           const RingConfig& ring, std::uint64_t master_seed) {
  config.validate();
  ring.validate();
  if (ring.baselines_lambda.size() != 1)
    throw std::invalid_argument("measure_ring: exactly one baseline is driven by one rx pair");
  const double want = ring.baselines_lambda.front();
  const double have = config.baseline_lambda();
  if (std::abs(want - have) > 1e-6 * std::max(std::abs(want), std::abs(have))) {
    std::ostringstream msg;
    msg << "measure_ring: ring baseline " << want << " lambda does not match the receiver pair ("
        << have << " lambda)";
    throw std::invalid_argument(msg.str());
  }

  RingSampleSet set;
  const int k_count = ring.samples_per_ring();
  set.entries.reserve(static_cast<std::size_t>(k_count));
  for (int k = 0; k < k_count; ++k) {
    const double angle = ring.start_angle_rad + static_cast<double>(k) * ring.step_rad;
    auto engine = make_engine(master_seed, static_cast<std::uint64_t>(k));
    const DwellSignals signals = simulate_dwell(config, scatterers, angle, engine);
    RingSample sample;
    sample.k = k;
    sample.angle_rad = angle;
    sample.baseline_lambda = have;
    sample.u = have * std::sin(angle);
    sample.v = have * std::cos(angle);
    sample.value = correlate(signals);
    set.entries.push_back(sample);
  }
  return set;
}

}  // namespace ringscan
