#ifndef PNSIM_OFDM_HPP
#define PNSIM_OFDM_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pnsim/rng.hpp"
#include "pnsim/synth.hpp"

namespace pnsim {

using cdouble = std::complex<double>;

/// Square QAM alphabet with Gray-coded bit labels, normalized to unit average
/// energy. Order must be an even power of two (4, 16, 64, 256, ...). The
/// point table is indexed by the bit label: the high half of the label Gray-
/// codes the I level, the low half the Q level, so lattice neighbors differ
/// in exactly one bit.
class QamConstellation {
  public:
    explicit QamConstellation(std::size_t order);

    std::size_t order() const { return order_; }
    std::size_t bits_per_symbol() const { return bits_per_symbol_; }
    const std::vector<cdouble>& points() const { return points_; }

    cdouble map(std::size_t label) const { return points_[label]; }

    /// Hard-decision nearest-neighbor label (per-axis quantization, exact for
    /// the square lattice).
    std::size_t demap(cdouble y) const;

  private:
    std::size_t order_;
    std::size_t bits_per_symbol_;
    std::size_t levels_per_axis_;
    double scale_;  // lattice step from unit-energy normalization
    std::vector<cdouble> points_;
};

/// OFDM numerology: N subcarriers at delta_f spacing, cyclic prefix, pilot
/// set, constellation order. sample_rate = N*delta_f, T_sym = 1/delta_f,
/// N_sample = N + cp_len.
struct OfdmNumerology {
    std::size_t n_subcarriers = 0;
    std::size_t cp_len = 0;
    double delta_f_hz = 0.0;
    double pilot_fraction = 0.0;
    std::size_t qam_order = 64;
    std::vector<std::size_t> pilot_indices;  // uniformly spaced from 0
    std::vector<std::size_t> data_indices;

    /// Validates and derives the pilot/data index sets. pilot_fraction must
    /// divide N into an integer pilot count with integer spacing.
    static OfdmNumerology make(std::size_t n_subcarriers, std::size_t cp_len,
                               double delta_f_hz, double pilot_fraction,
                               std::size_t qam_order);

    /// 256 subcarriers, CP = N/16, 240 kHz spacing, 1/4 pilots, 64-QAM.
    static OfdmNumerology table_default();

    double sample_rate_hz() const { return static_cast<double>(n_subcarriers) * delta_f_hz; }
    double symbol_duration_s() const { return 1.0 / delta_f_hz; }
    std::size_t samples_per_symbol() const { return n_subcarriers + cp_len; }
    std::size_t n_pilots() const { return pilot_indices.size(); }
    std::size_t n_data() const { return data_indices.size(); }
};

/// CPE/ICI split of a phase trajectory over one CP-stripped symbol:
/// cpe = (1/N) sum e^{j phi[n]}; ici_power = 1 - |cpe|^2 is the average
/// leaked power under unit-power uncorrelated data (clamped at 0 against
/// last-ulp negatives).
struct CpeIciDiagnostic {
    cdouble cpe;
    double ici_power;
};

/// Maps a bit stream (values 0/1) onto constellation symbols. The bit count
/// must divide evenly into labels.
std::vector<cdouble> qam_map(std::span<const std::uint8_t> bits,
                             const QamConstellation& c);

/// Hard-decision demap back to bits.
std::vector<std::uint8_t> qam_demap(std::span<const cdouble> symbols,
                                    const QamConstellation& c);

/// Unitary inverse DFT (1/sqrt(N)) of the length-N frame with the last
/// cp_len samples prepended; output length N + cp_len.
std::vector<cdouble> ofdm_modulate(const std::vector<cdouble>& frame,
                                   const OfdmNumerology& num);

/// Strips the cyclic prefix and applies the unitary forward DFT.
std::vector<cdouble> ofdm_demodulate(const std::vector<cdouble>& samples,
                                     const OfdmNumerology& num);

/// Sample-wise rotation s[n] * e^{j phi[n]}; magnitudes are preserved.
std::vector<cdouble> apply_phase_noise(const std::vector<cdouble>& samples,
                                       std::span<const double> phase_rad);
std::vector<cdouble> apply_phase_noise(const std::vector<cdouble>& samples,
                                       const PhaseNoiseRealization& pn);

/// Adds circular complex Gaussian noise at the given per-sample Es/N0. The
/// signal power is measured over samples[skip_prefix..] (the CP-stripped
/// portion); the prefix still receives noise. snr_db = +inf leaves the
/// samples untouched.
void add_awgn_inplace(std::vector<cdouble>& samples, double snr_db,
                      Xoshiro256ss& rng, std::size_t skip_prefix = 0);
std::vector<cdouble> add_awgn(const std::vector<cdouble>& samples, double snr_db,
                              SeedSpec seed, std::size_t skip_prefix = 0);

/// Pilot-averaged CPE estimate: angle of (1/Np) sum Y_k * conj(X_k) over the
/// pilot set, in (-pi, pi].
double estimate_cpe(std::span<const cdouble> rx,
                    std::span<const std::size_t> pilot_indices,
                    std::span<const cdouble> pilot_symbols);

/// Uniform derotation Y_k * e^{-j phi_hat} of the whole frame.
std::vector<cdouble> apply_cpe_correction(const std::vector<cdouble>& rx,
                                          double phi_hat_rad);

/// RMS error vector magnitude in percent:
/// 100 * sqrt(sum|rx-ref|^2 / sum|ref|^2).
double compute_evm_percent(std::span<const cdouble> rx,
                           std::span<const cdouble> ref);

/// Bit error rate: Hamming distance / length.
double compute_ber(std::span<const std::uint8_t> tx_bits,
                   std::span<const std::uint8_t> rx_bits);

CpeIciDiagnostic decompose_cpe_ici(std::span<const double> phase_rad);

/// Fixed pseudorandom QPSK pilot pattern of unit magnitude; the same pattern
/// is used for every symbol of a run.
std::vector<cdouble> make_pilot_symbols(std::size_t count);

}  // namespace pnsim

#endif
