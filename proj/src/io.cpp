#include "pnsim/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "pnsim/rng.hpp"

namespace pnsim::io {

namespace {

std::ofstream open_out(const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary);  // fixed '\n' line endings
    if (!out) throw std::runtime_error("cannot open for writing: " + file.string());
    return out;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_metadata(const std::filesystem::path& dir,
                    const nlohmann::ordered_json& resolved_config,
                    const std::string& command) {
    nlohmann::ordered_json meta;
    meta["command"] = command;
    meta["rng"] = kRngId;
    meta["snr_definition"] = "Es/N0 per time-domain sample over the CP-stripped portion";
    meta["dft_convention"] = "unitary in both directions";
    meta["psd_convention"] = "one-sided phase PSD in rad^2/Hz; dBc/Hz inputs as 10^(value/10)";
    meta["config"] = resolved_config;
    auto out = open_out(dir / "metadata.json");
    out << meta.dump(2) << "\n";
}

void write_psd_csv(const std::filesystem::path& file,
                   const std::vector<double>& f_m_hz,
                   const std::vector<double>& psd_dbchz) {
    auto out = open_out(file);
    out << "f_m_hz,psd_dbchz\n";
    for (std::size_t i = 0; i < f_m_hz.size(); ++i) {
        out << format_double(f_m_hz[i]) << "," << format_double(psd_dbchz[i]) << "\n";
    }
}

void write_sweep_csv(const std::filesystem::path& file,
                     const std::vector<IfSweepResult>& sweeps) {
    auto out = open_out(file);
    out << "f_if_hz,sigma2_rad2,method\n";
    for (const auto& sweep : sweeps) {
        for (std::size_t i = 0; i < sweep.grid_hz.size(); ++i) {
            out << format_double(sweep.grid_hz[i]) << ","
                << format_double(sweep.variance_rad2[i]) << ","
                << to_string(sweep.method) << "\n";
        }
    }
}

void write_results_csv(const std::filesystem::path& file,
                       const std::vector<MetricSeries>& series) {
    auto out = open_out(file);
    out << "plan,cpe,snr_db,ber,ber_ci,evm_pct,runs,bits\n";
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.snr_db.size(); ++i) {
            out << s.plan_label << "," << (s.cpe_correction ? "on" : "off") << ","
                << format_double(s.snr_db[i]) << "," << format_double(s.ber_mean[i])
                << "," << format_double(s.ber_ci_halfwidth[i]) << ","
                << format_double(s.evm_rms_percent[i]) << "," << s.runs << ","
                << s.bits[i] << "\n";
        }
    }
}

void write_pn_csv(const std::filesystem::path& file, const PhaseNoiseRealization& pn) {
    auto out = open_out(file);
    out << "sample_index,phase_rad\n";
    for (std::size_t i = 0; i < pn.samples.size(); ++i) {
        out << i << "," << format_double(pn.samples[i]) << "\n";
    }
}

void write_constellation_csv(const std::filesystem::path& file,
                             const std::vector<cdouble>& frame) {
    auto out = open_out(file);
    out << "k,re_y,im_y\n";
    for (std::size_t k = 0; k < frame.size(); ++k) {
        out << k << "," << format_double(frame[k].real()) << ","
            << format_double(frame[k].imag()) << "\n";
    }
}

void write_sweep_plot_script(const std::filesystem::path& dir,
                             const std::vector<IfSweepResult>& sweeps) {
    auto out = open_out(dir / "plot_sweep.gp");
    out << "set datafile separator ','\n"
        << "set xlabel 'IF frequency (Hz)'\n"
        << "set ylabel 'total phase noise variance (rad^2)'\n"
        << "set grid\n"
        << "set key top center\n";
    for (const auto& sweep : sweeps) {
        out << "# method " << to_string(sweep.method) << ": minimum at f_IF = "
            << format_double(sweep.argmin_if_hz) << " Hz\n";
    }
    out << "plot";
    bool first = true;
    for (const auto& sweep : sweeps) {
        if (!first) out << ",";
        first = false;
        out << " '< grep \"" << to_string(sweep.method)
            << "\" sweep.csv' using 1:2 with lines title '" << to_string(sweep.method)
            << "'";
    }
    out << "\n";
}

void write_metric_plot_scripts(const std::filesystem::path& dir,
                               const std::vector<MetricSeries>& series) {
    {
        auto out = open_out(dir / "plot_ber.gp");
        out << "set datafile separator ','\n"
            << "set xlabel 'SNR (dB)'\n"
            << "set ylabel 'BER'\n"
            << "set logscale y\n"
            << "set grid\n"
            << "plot";
        bool first = true;
        for (const auto& s : series) {
            const std::string tag = s.plan_label + "," + (s.cpe_correction ? "on" : "off");
            if (!first) out << ",";
            first = false;
            out << " '< grep \"^" << tag << ",\" results.csv' using 3:4 with linespoints title '"
                << s.plan_label << " cpe=" << (s.cpe_correction ? "on" : "off") << "'";
        }
        out << "\n";
    }
    {
        auto out = open_out(dir / "plot_evm.gp");
        out << "set datafile separator ','\n"
            << "set xlabel 'SNR (dB)'\n"
            << "set ylabel 'EVM (%)'\n"
            << "set grid\n"
            << "plot";
        bool first = true;
        for (const auto& s : series) {
            const std::string tag = s.plan_label + "," + (s.cpe_correction ? "on" : "off");
            if (!first) out << ",";
            first = false;
            out << " '< grep \"^" << tag << ",\" results.csv' using 3:6 with linespoints title '"
                << s.plan_label << " cpe=" << (s.cpe_correction ? "on" : "off") << "'";
        }
        out << "\n";
    }
}

}  // namespace pnsim::io
