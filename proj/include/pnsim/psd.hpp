#ifndef PNSIM_PSD_HPP
#define PNSIM_PSD_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace pnsim {

/// One noise-shaping stage of the zero-pole oscillator spectrum. Both corner
/// frequencies are offsets from the carrier, in Hz, and must be positive.
struct ZeroPoleStage {
    double f_zero_hz;
    double f_pole_hz;
};

/// Single-sideband phase-noise PSD
///
///   S_phi(f_m) = s0 * prod_n (1 + (f_m/f_zero_n)^2) / (1 + (f_m/f_pole_n)^2)
///
/// s0 is the one-sided low-offset level in linear rad^2/Hz; the parameters are
/// anchored at base_carrier_hz. Retuning to another carrier scales s0
/// quadratically and every corner linearly (see scale_to_carrier). Values are
/// immutable after construction and safe to share across threads.
class PhaseNoisePsd {
  public:
    PhaseNoisePsd(double s0_rad2_hz, double base_carrier_hz,
                  std::vector<ZeroPoleStage> stages = {});

    /// s0 given as a dBc/Hz level: s0 = 10^(value/10).
    static PhaseNoisePsd from_dbchz(double s0_dbchz, double base_carrier_hz,
                                    std::vector<ZeroPoleStage> stages = {});

    double s0() const { return s0_; }
    double base_carrier_hz() const { return base_carrier_hz_; }
    const std::vector<ZeroPoleStage>& stages() const { return stages_; }

  private:
    double s0_;
    double base_carrier_hz_;
    std::vector<ZeroPoleStage> stages_;
};

enum class VarianceMethod {
    numerical_integral,  // quadrature of the PSD over [0, B/2]
    analytic_approx,     // N_sample * 2*pi*df * S0 * (f_c/f_base)^2
};

const char* to_string(VarianceMethod m);

struct VarianceEstimate {
    double value_rad2;
    VarianceMethod method;
};

/// Evaluates the PSD at offset f_m >= 0. Throws std::domain_error for
/// negative offsets and std::runtime_error if the product overflows.
double psd_eval(const PhaseNoisePsd& psd, double f_m_hz);

/// Retunes the model to carrier f_c: s0' = s0*(f_c/f_base)^2, corners scale
/// by f_c/f_base, and the result is anchored at f_c. Identity when
/// f_c == f_base.
PhaseNoisePsd scale_to_carrier(const PhaseNoisePsd& psd, double f_c_hz);

/// Ideal frequency multiplier of order n: level rises by 20*log10(n) dB and
/// all corners shift up by n. Equivalent to retuning to n * base_carrier.
PhaseNoisePsd apply_multiplier(const PhaseNoisePsd& psd, unsigned n_mult);

/// Accumulated phase variance over one symbol: quadrature of S_phi over
/// [0, B/2]. Composite adaptive Simpson on log-spaced panels from
/// f_low = max(B/2 * 1e-9, 1 mHz) up to B/2, plus the flat rectangle
/// s0 * f_low for [0, f_low].
VarianceEstimate integrate_variance(const PhaseNoisePsd& psd, double bandwidth_hz);

/// Closed-form variance of an oscillator at f_c derived from a reference
/// level S0 at f_base:  N_sample * 2*pi*delta_f * S0 * (f_c/f_base)^2.
VarianceEstimate analytic_variance(double s0_rad2_hz, double delta_f_hz,
                                   std::size_t n_sample, double f_c_hz,
                                   double f_base_hz);

}  // namespace pnsim

#endif
