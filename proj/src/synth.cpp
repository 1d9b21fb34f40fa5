#include "pnsim/synth.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "pnsim/fft.hpp"

namespace pnsim {

PhaseNoiseRealization synthesize(const PhaseNoisePsd& psd, std::size_t n_samples,
                                 double sample_rate_hz, SeedSpec seed) {
    if (n_samples < 2) {
        throw std::domain_error("synthesize: need at least 2 samples");
    }
    if (!(sample_rate_hz > 0.0)) {
        throw std::domain_error("synthesize: sample rate must be positive");
    }

    const std::size_t n = n_samples;
    const double df = sample_rate_hz / static_cast<double>(n);
    Xoshiro256ss rng(seed);

    std::vector<std::complex<double>> spectrum(n, {0.0, 0.0});
    // Bins below Nyquist: E|A_k|^2 = n*fs*S(f_k)/2 on each of the +/-k twins,
    // i.e. half the one-sided bin power per twin.
    for (std::size_t k = 1; 2 * k < n; ++k) {
        const auto [a, b] = rng.gaussian_pair();
        const double w =
            std::sqrt(0.5 * psd_eval(psd, static_cast<double>(k) * df) *
                      sample_rate_hz * static_cast<double>(n)) *
            M_SQRT1_2;
        spectrum[k] = {w * a, w * b};
        spectrum[n - k] = std::conj(spectrum[k]);
    }
    if (n % 2 == 0) {
        // Real Nyquist bin carrying the full bin power.
        const auto [a, b] = rng.gaussian_pair();
        (void)b;
        const double w = std::sqrt(psd_eval(psd, 0.5 * sample_rate_hz) *
                                   sample_rate_hz * static_cast<double>(n));
        spectrum[n / 2] = {w * a, 0.0};
    }

    auto time = fft::dft(spectrum, /*inverse=*/true);
    PhaseNoiseRealization out;
    out.sample_rate_hz = sample_rate_hz;
    out.samples.resize(n);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.samples[i] = time[i].real() * inv_n;
    }
    return out;
}

double empirical_variance(const PhaseNoiseRealization& r) {
    if (r.samples.size() < 2) {
        throw std::domain_error("empirical_variance: need at least 2 samples");
    }
    double mean = 0.0;
    for (double v : r.samples) mean += v;
    mean /= static_cast<double>(r.samples.size());
    double acc = 0.0;
    for (double v : r.samples) {
        const double d = v - mean;
        acc += d * d;
    }
    return acc / static_cast<double>(r.samples.size());
}

PhaseNoiseRealization sum_realizations(const PhaseNoiseRealization& a,
                                       const PhaseNoiseRealization& b) {
    if (a.samples.size() != b.samples.size()) {
        throw std::invalid_argument("sum_realizations: length mismatch");
    }
    if (a.sample_rate_hz != b.sample_rate_hz) {
        throw std::invalid_argument("sum_realizations: sample rate mismatch");
    }
    PhaseNoiseRealization out;
    out.sample_rate_hz = a.sample_rate_hz;
    out.samples.resize(a.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        out.samples[i] = a.samples[i] + b.samples[i];
    }
    return out;
}

}  // namespace pnsim
