#ifndef PNSIM_IO_HPP
#define PNSIM_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "pnsim/freq_plan.hpp"
#include "pnsim/montecarlo.hpp"

namespace pnsim::io {

/// Locale-independent shortest-roundtrip formatting; CSV output is byte
/// stable for identical inputs.
std::string format_double(double v);

/// Writes the metadata sidecar (resolved config echo, RNG id, conventions).
/// Call before writing any CSV into the directory.
void write_metadata(const std::filesystem::path& dir,
                    const nlohmann::ordered_json& resolved_config,
                    const std::string& command);

/// `f_m_hz,psd_dbchz` rows.
void write_psd_csv(const std::filesystem::path& file,
                   const std::vector<double>& f_m_hz,
                   const std::vector<double>& psd_dbchz);

/// `f_if_hz,sigma2_rad2,method` rows; one block per sweep.
void write_sweep_csv(const std::filesystem::path& file,
                     const std::vector<IfSweepResult>& sweeps);

/// `plan,cpe,snr_db,ber,ber_ci,evm_pct,runs,bits` rows for every series.
void write_results_csv(const std::filesystem::path& file,
                       const std::vector<MetricSeries>& series);

/// `sample_index,phase_rad` rows.
void write_pn_csv(const std::filesystem::path& file,
                  const PhaseNoiseRealization& pn);

/// `k,re_y,im_y` rows of one received frame.
void write_constellation_csv(const std::filesystem::path& file,
                             const std::vector<cdouble>& frame);

/// Standalone gnuplot scripts next to the CSVs.
void write_sweep_plot_script(const std::filesystem::path& dir,
                             const std::vector<IfSweepResult>& sweeps);
void write_metric_plot_scripts(const std::filesystem::path& dir,
                               const std::vector<MetricSeries>& series);

}  // namespace pnsim::io

#endif
