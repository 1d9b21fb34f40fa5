#ifndef PNSIM_FREQ_PLAN_HPP
#define PNSIM_FREQ_PLAN_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "pnsim/psd.hpp"
#include "pnsim/rng.hpp"
#include "pnsim/synth.hpp"

namespace pnsim {

struct OfdmNumerology;  // ofdm.hpp

enum class PlanKind { homodyne, heterodyne };

/// Oscillator arrangement of the transceiver. Homodyne: one LO at the RF
/// carrier. Heterodyne: an IF oscillator at f_if plus an RF LO at
/// f_rf - f_if, with 0 < f_if < f_rf.
class FrequencyPlan {
  public:
    static FrequencyPlan homodyne(double f_rf_hz);
    static FrequencyPlan heterodyne(double f_rf_hz, double f_if_hz);

    PlanKind kind() const { return kind_; }
    double f_rf_hz() const { return f_rf_hz_; }
    double f_if_hz() const { return f_if_hz_; }
    double f_rflo_hz() const { return f_rf_hz_ - f_if_hz_; }

    /// Carrier frequency of each independent oscillator in the plan.
    std::vector<double> oscillator_frequencies() const;

    /// Stable label for CSV output, e.g. "homodyne_140GHz",
    /// "heterodyne_70+70GHz".
    std::string label() const;

  private:
    FrequencyPlan(PlanKind kind, double f_rf_hz, double f_if_hz)
        : kind_(kind), f_rf_hz_(f_rf_hz), f_if_hz_(f_if_hz) {}
    PlanKind kind_;
    double f_rf_hz_;
    double f_if_hz_;  // 0 for homodyne
};

/// IF sweep of the total heterodyne variance, with the located minimum.
struct IfSweepResult {
    std::vector<double> grid_hz;
    std::vector<double> variance_rad2;
    double argmin_if_hz = 0.0;
    VarianceMethod method = VarianceMethod::analytic_approx;
};

/// Total accumulated phase-noise variance of a plan: homodyne contributes
/// sigma^2(f_rf); heterodyne contributes sigma^2(f_if) + sigma^2(f_rf - f_if),
/// each oscillator derived from ref_psd scaled to its own frequency
/// (independent processes add in variance). The numerical method integrates
/// over the occupied bandwidth B = N * delta_f.
double plan_variance(const FrequencyPlan& plan, const PhaseNoisePsd& ref_psd,
                     const OfdmNumerology& numerology, VarianceMethod method);

/// Evaluates the heterodyne variance on a uniform IF grid over
/// [0.001*f_rf, 0.999*f_rf]; exact endpoints are excluded because f_if = 0 is
/// not a valid heterodyne plan. Grid points are independent and evaluated in
/// parallel; assembly order is deterministic. Ties in the minimum resolve to
/// the lowest IF.
IfSweepResult sweep_if(double f_rf_hz, const PhaseNoisePsd& ref_psd,
                       const OfdmNumerology& numerology, std::size_t grid_points,
                       VarianceMethod method);

/// Variance reduction factor gamma = (f_if/f_rf)^2 of the IF oscillator
/// relative to a homodyne LO at f_rf.
double variance_reduction_gamma(double f_if_hz, double f_rf_hz);

/// Phase trajectory of the whole plan: one synthesized process per
/// oscillator, independent sub-seeds derived per oscillator index, summed
/// sample-wise.
PhaseNoiseRealization plan_phase_process(const FrequencyPlan& plan,
                                         const PhaseNoisePsd& ref_psd,
                                         std::size_t n_samples,
                                         double sample_rate_hz, SeedSpec seed);

}  // namespace pnsim

#endif
