#ifndef PNSIM_SYNTH_HPP
#define PNSIM_SYNTH_HPP

#include <cstddef>
#include <vector>

#include "pnsim/psd.hpp"
#include "pnsim/rng.hpp"

namespace pnsim {

/// Discrete-time phase trajectory phi[n] in radians at a fixed sample rate.
struct PhaseNoiseRealization {
    std::vector<double> samples;
    double sample_rate_hz = 0.0;
};

/// Draws one realization whose ensemble spectrum matches the target PSD.
///
/// Frequency-domain shaping: a circular complex Gaussian spectrum is drawn on
/// the DFT grid, bin k weighted so that E|A_k|^2 = n*fs*S_phi(f_k)/2 on each
/// of the +/-k pair (half the one-sided bin power per twin; the Nyquist bin,
/// when present, is real and carries the full bin power). The DC bin's random
/// component is zero: the absolute phase reference is arbitrary. The inverse
/// DFT then yields real phi[n].
///
/// Offsets below the grid resolution fs/n are not represented; since the
/// zero-pole PSD is flat near DC the resulting variance deficit versus the
/// [0, B/2] integral is bounded by s0*fs/n.
///
/// Deterministic for a fixed (psd, n_samples, sample_rate, seed).
PhaseNoiseRealization synthesize(const PhaseNoisePsd& psd, std::size_t n_samples,
                                 double sample_rate_hz, SeedSpec seed);

/// Population variance (mean squared deviation from the sample mean).
double empirical_variance(const PhaseNoiseRealization& r);

/// Element-wise sum of two equal-length, equal-rate realizations.
PhaseNoiseRealization sum_realizations(const PhaseNoiseRealization& a,
                                       const PhaseNoiseRealization& b);

}  // namespace pnsim

#endif
