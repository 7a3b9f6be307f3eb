#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "ringscan/dynarray.hpp"
#include "ringscan/grid.hpp"

namespace ringscan {

/// A point reflector located at direction cosines (l, m) with a non-negative
/// power reflectivity.
struct Scatterer {
  double l = 0.0;
  double m = 0.0;
  double reflectivity = 1.0;
};

/// Configuration of the active noise-illumination measurement: a set of fixed
/// transmitters floodlight the target with independent band-limited noise, and
/// two receivers on a rotating baseline cross-correlate what bounces back.
///
/// One transmitter is permitted but degenerate: the illumination is then fully
/// mutually coherent across the target, which is exactly the condition under
/// which the correlation stops tracking the spatial Fourier transform. Tests
/// use that regime as a negative control; operational setups use two or more.
struct NoiseVisConfig {
  std::vector<Vec2> tx_positions_m;   // fixed transmitter positions, meters
  double rx_separation_m = 0.30779;   // receiver pair baseline length, meters
  Vec2 rx_centroid_m{0.0, 0.0};       // rotation centre of the receiver pair
  double carrier_hz = 75e9;
  double noise_bandwidth_hz = 1e9;    // two-sided bandwidth of the tx noise
  double sample_rate_hz = 2e9;        // complex baseband rate, >= bandwidth
  std::size_t samples_per_dwell = 4096;
  // Per-receiver SNR in dB relative to the total scattered power arriving at
  // that receiver. +infinity disables receiver noise.
  double snr_db = std::numeric_limits<double>::infinity();

  double wavelength_m() const;
  double baseline_lambda() const { return rx_separation_m / wavelength_m(); }
  void validate() const;
};

/// Complex baseband sample streams captured by the two receivers over one
/// dwell at a fixed rotation angle.
struct DwellSignals {
  std::vector<cplx> rx1;
  std::vector<cplx> rx2;
};

/// Simulates one dwell. The receivers sit at
///   centroid +/- (separation / 2) * (sin(angle), cos(angle)),
/// with rx1 on the + side, so the angle convention matches the ring sampler
/// (angle measured from the +v axis toward +u).
///
/// Every transmitter emits an independent unit-power complex Gaussian noise
/// waveform, low-pass filtered to the configured bandwidth by a power-
/// preserving Hamming-windowed-sinc filter (circular convolution). Propagation
/// is narrowband: each transmitter-scatterer-receiver path applies only the
/// carrier phase accrued along the transverse geometry, 2*pi*(x*l + y*m) per
/// leg divided by the wavelength, times sqrt(reflectivity). Receiver noise is
/// white complex Gaussian at `snr_db` below the scattered power.
///
/// Draw order from `engine` is fixed: each transmitter's waveform in turn
/// (real/imag interleaved per sample), then receiver 1 noise, then receiver 2
/// noise (only when snr_db is finite).
DwellSignals simulate_dwell(const NoiseVisConfig& config, std::span<const Scatterer> scatterers,
                            double angle_rad, std::mt19937_64& engine);

/// Time-averaged cross-correlation of the two receiver streams:
/// mean over samples of rx1 * conj(rx2). With incoherent illumination this
/// estimates the scene's spatial Fourier transform at the baseline's (u, v),
/// scaled by the transmitter count.
cplx correlate(const DwellSignals& signals);

/// Runs a full ring of dwells following `ring` (whose single baseline must
/// match the configured receiver separation) and returns one correlated value
/// per angle. Each dwell uses an engine seeded from hash(master_seed, k), so
/// any dwell can be reproduced in isolation.
RingSampleSet measure_ring(const NoiseVisConfig& config, std::span<const Scatterer> scatterers,
                           const RingConfig& ring, std::uint64_t master_seed);

}  // namespace ringscan
