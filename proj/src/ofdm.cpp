#include "pnsim/ofdm.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pnsim/fft.hpp"

namespace pnsim {

namespace {

std::size_t gray_encode(std::size_t b) { return b ^ (b >> 1); }

std::size_t gray_decode(std::size_t g) {
    std::size_t b = g;
    while (g >>= 1) b ^= g;
    return b;
}

}  // namespace

QamConstellation::QamConstellation(std::size_t order) : order_(order) {
    if (order < 4 || !std::has_single_bit(order) ||
        (std::countr_zero(order) % 2) != 0) {
        throw std::invalid_argument(
            "QamConstellation: order must be an even power of 2 (4, 16, 64, ...)");
    }
    bits_per_symbol_ = static_cast<std::size_t>(std::countr_zero(order));
    levels_per_axis_ = std::size_t{1} << (bits_per_symbol_ / 2);
    const double m = static_cast<double>(levels_per_axis_);
    // Odd-integer lattice +/-1, +/-3, ... normalized to unit average energy.
    scale_ = std::sqrt(3.0 / (2.0 * (m * m - 1.0)));

    points_.resize(order_);
    const std::size_t half_bits = bits_per_symbol_ / 2;
    const std::size_t q_mask = levels_per_axis_ - 1;
    for (std::size_t label = 0; label < order_; ++label) {
        const std::size_t li = gray_decode(label >> half_bits);
        const std::size_t lq = gray_decode(label & q_mask);
        const double re = (2.0 * static_cast<double>(li) - (m - 1.0)) * scale_;
        const double im = (2.0 * static_cast<double>(lq) - (m - 1.0)) * scale_;
        points_[label] = {re, im};
    }
}

std::size_t QamConstellation::demap(cdouble y) const {
    const double m = static_cast<double>(levels_per_axis_);
    const auto quantize = [&](double x) -> std::size_t {
        const double level = std::round(0.5 * (x / scale_ + (m - 1.0)));
        const double clamped = std::clamp(level, 0.0, m - 1.0);
        return static_cast<std::size_t>(clamped);
    };
    const std::size_t half_bits = bits_per_symbol_ / 2;
    return (gray_encode(quantize(y.real())) << half_bits) |
           gray_encode(quantize(y.imag()));
}

OfdmNumerology OfdmNumerology::make(std::size_t n_subcarriers, std::size_t cp_len,
                                    double delta_f_hz, double pilot_fraction,
                                    std::size_t qam_order) {
    if (n_subcarriers == 0) {
        throw std::invalid_argument("OfdmNumerology: n_subcarriers must be > 0");
    }
    if (cp_len >= n_subcarriers) {
        throw std::invalid_argument("OfdmNumerology: cp_len must be < N");
    }
    if (!(delta_f_hz > 0.0)) {
        throw std::invalid_argument("OfdmNumerology: delta_f must be positive");
    }
    if (pilot_fraction < 0.0 || pilot_fraction >= 1.0) {
        throw std::invalid_argument("OfdmNumerology: pilot_fraction must be in [0, 1)");
    }
    QamConstellation check(qam_order);  // validates the order

    OfdmNumerology num;
    num.n_subcarriers = n_subcarriers;
    num.cp_len = cp_len;
    num.delta_f_hz = delta_f_hz;
    num.pilot_fraction = pilot_fraction;
    num.qam_order = qam_order;

    const double exact_count = static_cast<double>(n_subcarriers) * pilot_fraction;
    const auto n_pilots = static_cast<std::size_t>(std::llround(exact_count));
    if (std::abs(exact_count - static_cast<double>(n_pilots)) > 1e-9) {
        throw std::invalid_argument(
            "OfdmNumerology: N * pilot_fraction must be an integer");
    }
    if (n_pilots > 0) {
        if (n_subcarriers % n_pilots != 0) {
            throw std::invalid_argument(
                "OfdmNumerology: pilot spacing N / (N*fraction) must be an integer");
        }
        const std::size_t spacing = n_subcarriers / n_pilots;
        for (std::size_t k = 0; k < n_subcarriers; k += spacing) {
            num.pilot_indices.push_back(k);
        }
    }
    std::size_t next_pilot = 0;
    for (std::size_t k = 0; k < n_subcarriers; ++k) {
        if (next_pilot < num.pilot_indices.size() &&
            num.pilot_indices[next_pilot] == k) {
            ++next_pilot;
        } else {
            num.data_indices.push_back(k);
        }
    }
    return num;
}

OfdmNumerology OfdmNumerology::table_default() {
    return make(256, 16, 240e3, 0.25, 64);
}

std::vector<cdouble> qam_map(std::span<const std::uint8_t> bits,
                             const QamConstellation& c) {
    const std::size_t bps = c.bits_per_symbol();
    if (bits.size() % bps != 0) {
        throw std::invalid_argument("qam_map: bit count not divisible by bits/symbol");
    }
    std::vector<cdouble> out;
    out.reserve(bits.size() / bps);
    for (std::size_t i = 0; i < bits.size(); i += bps) {
        std::size_t label = 0;
        for (std::size_t j = 0; j < bps; ++j) {
            label = (label << 1) | (bits[i + j] & 1u);
        }
        out.push_back(c.map(label));
    }
    return out;
}

std::vector<std::uint8_t> qam_demap(std::span<const cdouble> symbols,
                                    const QamConstellation& c) {
    const std::size_t bps = c.bits_per_symbol();
    std::vector<std::uint8_t> bits(symbols.size() * bps);
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        const std::size_t label = c.demap(symbols[i]);
        for (std::size_t j = 0; j < bps; ++j) {
            bits[i * bps + j] =
                static_cast<std::uint8_t>((label >> (bps - 1 - j)) & 1u);
        }
    }
    return bits;
}

std::vector<cdouble> ofdm_modulate(const std::vector<cdouble>& frame,
                                   const OfdmNumerology& num) {
    if (frame.size() != num.n_subcarriers) {
        throw std::invalid_argument("ofdm_modulate: frame length != N");
    }
    auto time = fft::dft(frame, /*inverse=*/true);
    const double norm = 1.0 / std::sqrt(static_cast<double>(num.n_subcarriers));
    for (auto& v : time) v *= norm;

    std::vector<cdouble> out;
    out.reserve(num.samples_per_symbol());
    out.insert(out.end(), time.end() - static_cast<std::ptrdiff_t>(num.cp_len),
               time.end());
    out.insert(out.end(), time.begin(), time.end());
    return out;
}

std::vector<cdouble> ofdm_demodulate(const std::vector<cdouble>& samples,
                                     const OfdmNumerology& num) {
    if (samples.size() != num.samples_per_symbol()) {
        throw std::invalid_argument("ofdm_demodulate: sample count != N + cp_len");
    }
    std::vector<cdouble> body(samples.begin() + static_cast<std::ptrdiff_t>(num.cp_len),
                              samples.end());
    auto freq = fft::dft(body, /*inverse=*/false);
    const double norm = 1.0 / std::sqrt(static_cast<double>(num.n_subcarriers));
    for (auto& v : freq) v *= norm;
    return freq;
}

std::vector<cdouble> apply_phase_noise(const std::vector<cdouble>& samples,
                                       std::span<const double> phase_rad) {
    if (samples.size() != phase_rad.size()) {
        throw std::invalid_argument("apply_phase_noise: length mismatch");
    }
    std::vector<cdouble> out(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        out[i] = samples[i] * std::polar(1.0, phase_rad[i]);
    }
    return out;
}

std::vector<cdouble> apply_phase_noise(const std::vector<cdouble>& samples,
                                       const PhaseNoiseRealization& pn) {
    return apply_phase_noise(samples, std::span<const double>(pn.samples));
}

void add_awgn_inplace(std::vector<cdouble>& samples, double snr_db,
                      Xoshiro256ss& rng, std::size_t skip_prefix) {
    if (std::isinf(snr_db) && snr_db > 0.0) return;  // noise-free flag
    if (skip_prefix >= samples.size()) {
        throw std::invalid_argument("add_awgn: prefix covers the whole signal");
    }
    double power = 0.0;
    for (std::size_t i = skip_prefix; i < samples.size(); ++i) {
        power += std::norm(samples[i]);
    }
    power /= static_cast<double>(samples.size() - skip_prefix);
    const double noise_var = power / std::pow(10.0, snr_db / 10.0);
    const double comp_std = std::sqrt(0.5 * noise_var);
    for (auto& s : samples) {
        const auto [a, b] = rng.gaussian_pair();
        s += cdouble{comp_std * a, comp_std * b};
    }
}

std::vector<cdouble> add_awgn(const std::vector<cdouble>& samples, double snr_db,
                              SeedSpec seed, std::size_t skip_prefix) {
    std::vector<cdouble> out = samples;
    Xoshiro256ss rng(seed);
    add_awgn_inplace(out, snr_db, rng, skip_prefix);
    return out;
}

double estimate_cpe(std::span<const cdouble> rx,
                    std::span<const std::size_t> pilot_indices,
                    std::span<const cdouble> pilot_symbols) {
    if (pilot_indices.empty() || pilot_indices.size() != pilot_symbols.size()) {
        throw std::invalid_argument("estimate_cpe: invalid pilot set");
    }
    cdouble acc{0.0, 0.0};
    for (std::size_t i = 0; i < pilot_indices.size(); ++i) {
        const std::size_t k = pilot_indices[i];
        if (k >= rx.size()) {
            throw std::invalid_argument("estimate_cpe: pilot index out of range");
        }
        if (std::norm(pilot_symbols[i]) == 0.0) {
            throw std::invalid_argument("estimate_cpe: zero pilot symbol");
        }
        acc += rx[k] * std::conj(pilot_symbols[i]);
    }
    acc /= static_cast<double>(pilot_indices.size());
    return std::arg(acc);
}

std::vector<cdouble> apply_cpe_correction(const std::vector<cdouble>& rx,
                                          double phi_hat_rad) {
    const cdouble rot = std::polar(1.0, -phi_hat_rad);
    std::vector<cdouble> out(rx.size());
    for (std::size_t i = 0; i < rx.size(); ++i) out[i] = rx[i] * rot;
    return out;
}

double compute_evm_percent(std::span<const cdouble> rx,
                           std::span<const cdouble> ref) {
    if (rx.size() != ref.size()) {
        throw std::invalid_argument("compute_evm: length mismatch");
    }
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        num += std::norm(rx[i] - ref[i]);
        den += std::norm(ref[i]);
    }
    if (den <= 0.0) {
        throw std::invalid_argument("compute_evm: zero reference power");
    }
    return 100.0 * std::sqrt(num / den);
}

double compute_ber(std::span<const std::uint8_t> tx_bits,
                   std::span<const std::uint8_t> rx_bits) {
    if (tx_bits.size() != rx_bits.size() || tx_bits.empty()) {
        throw std::invalid_argument("compute_ber: length mismatch or empty");
    }
    std::size_t errors = 0;
    for (std::size_t i = 0; i < tx_bits.size(); ++i) {
        errors += (tx_bits[i] != rx_bits[i]) ? 1u : 0u;
    }
    return static_cast<double>(errors) / static_cast<double>(tx_bits.size());
}

CpeIciDiagnostic decompose_cpe_ici(std::span<const double> phase_rad) {
    if (phase_rad.empty()) {
        throw std::invalid_argument("decompose_cpe_ici: empty phase sequence");
    }
    // Pairwise summation: exact for constant sequences of power-of-two length
    // and better conditioned in general.
    std::vector<cdouble> acc(phase_rad.size());
    for (std::size_t i = 0; i < phase_rad.size(); ++i) {
        acc[i] = std::polar(1.0, phase_rad[i]);
    }
    std::size_t m = acc.size();
    while (m > 1) {
        std::size_t h = m / 2;
        for (std::size_t i = 0; i < h; ++i) acc[i] = acc[2 * i] + acc[2 * i + 1];
        if (m % 2 == 1) {
            acc[h] = acc[m - 1];
            ++h;
        }
        m = h;
    }
    CpeIciDiagnostic d;
    d.cpe = acc[0] / static_cast<double>(phase_rad.size());
    d.ici_power = std::max(0.0, 1.0 - std::norm(d.cpe));
    return d;
}

std::vector<cdouble> make_pilot_symbols(std::size_t count) {
    static const cdouble kQpsk[4] = {{M_SQRT1_2, M_SQRT1_2},
                                     {-M_SQRT1_2, M_SQRT1_2},
                                     {-M_SQRT1_2, -M_SQRT1_2},
                                     {M_SQRT1_2, -M_SQRT1_2}};
    Xoshiro256ss rng(SeedSpec{0x70696c6f74ULL, 0});  // fixed pattern
    std::vector<cdouble> out(count);
    for (auto& p : out) p = kQpsk[rng.next() & 3u];
    return out;
}

}  // namespace pnsim
