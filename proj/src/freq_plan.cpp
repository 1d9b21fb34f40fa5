#include "pnsim/freq_plan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "pnsim/ofdm.hpp"

namespace pnsim {

namespace {

std::string ghz(double f_hz) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", f_hz / 1e9);
    return buf;
}

}  // namespace

FrequencyPlan FrequencyPlan::homodyne(double f_rf_hz) {
    if (!(f_rf_hz > 0.0)) {
        throw std::invalid_argument("FrequencyPlan: f_rf must be positive");
    }
    return FrequencyPlan(PlanKind::homodyne, f_rf_hz, 0.0);
}

FrequencyPlan FrequencyPlan::heterodyne(double f_rf_hz, double f_if_hz) {
    if (!(f_rf_hz > 0.0)) {
        throw std::invalid_argument("FrequencyPlan: f_rf must be positive");
    }
    if (!(f_if_hz > 0.0) || !(f_if_hz < f_rf_hz)) {
        throw std::invalid_argument(
            "FrequencyPlan: heterodyne requires 0 < f_if < f_rf");
    }
    return FrequencyPlan(PlanKind::heterodyne, f_rf_hz, f_if_hz);
}

std::vector<double> FrequencyPlan::oscillator_frequencies() const {
    if (kind_ == PlanKind::homodyne) return {f_rf_hz_};
    return {f_if_hz_, f_rf_hz_ - f_if_hz_};
}

std::string FrequencyPlan::label() const {
    if (kind_ == PlanKind::homodyne) return "homodyne_" + ghz(f_rf_hz_) + "GHz";
    return "heterodyne_" + ghz(f_if_hz_) + "+" + ghz(f_rflo_hz()) + "GHz";
}

double plan_variance(const FrequencyPlan& plan, const PhaseNoisePsd& ref_psd,
                     const OfdmNumerology& numerology, VarianceMethod method) {
    double total = 0.0;
    for (double f_osc : plan.oscillator_frequencies()) {
        if (method == VarianceMethod::analytic_approx) {
            total += analytic_variance(ref_psd.s0(), numerology.delta_f_hz,
                                       numerology.samples_per_symbol(), f_osc,
                                       ref_psd.base_carrier_hz())
                         .value_rad2;
        } else {
            const double bandwidth =
                static_cast<double>(numerology.n_subcarriers) * numerology.delta_f_hz;
            total += integrate_variance(scale_to_carrier(ref_psd, f_osc), bandwidth)
                         .value_rad2;
        }
    }
    return total;
}

IfSweepResult sweep_if(double f_rf_hz, const PhaseNoisePsd& ref_psd,
                       const OfdmNumerology& numerology, std::size_t grid_points,
                       VarianceMethod method) {
    if (!(f_rf_hz > 0.0)) throw std::domain_error("sweep_if: f_rf must be positive");
    if (grid_points < 3) throw std::invalid_argument("sweep_if: need >= 3 grid points");

    IfSweepResult result;
    result.method = method;
    result.grid_hz.resize(grid_points);
    result.variance_rad2.resize(grid_points);

    const double lo = 1e-3 * f_rf_hz;
    const double hi = f_rf_hz - lo;
    const double step = (hi - lo) / static_cast<double>(grid_points - 1);
    for (std::size_t i = 0; i < grid_points; ++i) {
        result.grid_hz[i] = lo + static_cast<double>(i) * step;
    }

    const auto n = static_cast<std::ptrdiff_t>(grid_points);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        result.variance_rad2[i] =
            plan_variance(FrequencyPlan::heterodyne(f_rf_hz, result.grid_hz[i]),
                          ref_psd, numerology, method);
    }

    const auto it =
        std::min_element(result.variance_rad2.begin(), result.variance_rad2.end());
    result.argmin_if_hz =
        result.grid_hz[static_cast<std::size_t>(it - result.variance_rad2.begin())];
    return result;
}

double variance_reduction_gamma(double f_if_hz, double f_rf_hz) {
    if (!(f_rf_hz > 0.0) || !(f_if_hz > 0.0) || f_if_hz > f_rf_hz) {
        throw std::domain_error(
            "variance_reduction_gamma: require 0 < f_if <= f_rf");
    }
    const double r = f_if_hz / f_rf_hz;
    return r * r;
}

PhaseNoiseRealization plan_phase_process(const FrequencyPlan& plan,
                                         const PhaseNoisePsd& ref_psd,
                                         std::size_t n_samples,
                                         double sample_rate_hz, SeedSpec seed) {
    const auto freqs = plan.oscillator_frequencies();
    PhaseNoiseRealization total =
        synthesize(scale_to_carrier(ref_psd, freqs[0]), n_samples, sample_rate_hz,
                   derive_stream(seed, 0));
    for (std::size_t i = 1; i < freqs.size(); ++i) {
        total = sum_realizations(
            total, synthesize(scale_to_carrier(ref_psd, freqs[i]), n_samples,
                              sample_rate_hz, derive_stream(seed, i)));
    }
    return total;
}

}  // namespace pnsim
