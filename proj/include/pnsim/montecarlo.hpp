#ifndef PNSIM_MONTECARLO_HPP
#define PNSIM_MONTECARLO_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pnsim/freq_plan.hpp"
#include "pnsim/ofdm.hpp"
#include "pnsim/psd.hpp"

namespace pnsim {

/// Full description of one BER/EVM experiment.
struct ExperimentConfig {
    FrequencyPlan plan = FrequencyPlan::homodyne(140e9);
    PhaseNoisePsd ref_psd{1e-12, 15e9};
    OfdmNumerology numerology = OfdmNumerology::table_default();
    std::vector<double> snr_grid_db;
    std::size_t n_symbols_per_run = 1000;
    std::size_t n_mc_runs = 200;
    bool cpe_correction = false;
    std::uint64_t master_seed = 1;
    /// Regenerate phi per symbol instead of one continuous trajectory per
    /// run (sensitivity mode; continuous is the default).
    bool pn_per_symbol = false;
};

/// Raw accumulators of one (snr, mc_run) cell.
struct CellMetrics {
    std::uint64_t bit_errors = 0;
    std::uint64_t bits = 0;
    double evm_num = 0.0;  // sum |rx - ref|^2 over data subcarriers
    double evm_den = 0.0;  // sum |ref|^2
    double evm_percent() const;
};

/// Per-SNR aggregates of a whole experiment.
struct MetricSeries {
    std::string plan_label;
    bool cpe_correction = false;
    std::size_t runs = 0;
    std::vector<double> snr_db;
    std::vector<double> ber_mean;
    std::vector<double> ber_ci_halfwidth;  // 1.96*sqrt(p(1-p)/bits)
    std::vector<double> evm_rms_percent;
    std::vector<std::uint64_t> bits;
    std::map<std::string, std::string> metadata;
};

/// Worker count for the parallel runner: PNSIM_MAX_WORKERS caps the OpenMP
/// default; always at least 1.
unsigned resolve_worker_count();

/// Simulates every (snr, mc_run) cell, snr-major order. Cells draw their
/// streams from seed_combine(snr_index, mc_run) with distinct stream ids for
/// phase noise, data bits and AWGN, so results are independent of execution
/// order and of the plan under test (paired draws across plans).
std::vector<CellMetrics> run_cells(const ExperimentConfig& cfg, unsigned workers = 0);

/// Reference implementation: identical cell math in a plain loop. run_cells
/// must match it bit for bit at any worker count.
std::vector<CellMetrics> run_cells_serial(const ExperimentConfig& cfg);

/// Folds cells into per-SNR means, confidence half-widths and metadata.
/// Throws std::runtime_error naming the offending cell on non-finite values.
MetricSeries aggregate_metrics(const ExperimentConfig& cfg,
                               const std::vector<CellMetrics>& cells);

MetricSeries run_experiment(const ExperimentConfig& cfg);
MetricSeries run_experiment_serial(const ExperimentConfig& cfg);

/// Cartesian product plans x cpe_modes, every entry reusing the same master
/// seed so data and noise draws are paired across architectures.
std::vector<MetricSeries> compare_architectures(const ExperimentConfig& base,
                                                const std::vector<FrequencyPlan>& plans,
                                                const std::vector<bool>& cpe_modes);

/// Debug taps for the CLI dump flags: phase trajectory and first received
/// (post-correction) frame of cell (snr_index 0, run 0), computed exactly as
/// the experiment computes them.
struct CellDebugDump {
    PhaseNoiseRealization pn;
    std::vector<cdouble> first_rx_frame;
};
CellDebugDump debug_first_cell(const ExperimentConfig& cfg);

}  // namespace pnsim

#endif
