#ifndef PNSIM_FFT_HPP
#define PNSIM_FFT_HPP

#include <complex>
#include <vector>

namespace pnsim::fft {

/// Unscaled complex DFT (forward: e^{-j2pi kn/N}, inverse: e^{+j2pi kn/N}).
/// Callers apply their own normalization. Plans are cached per size and
/// created with FFTW_ESTIMATE, so results depend only on the input;
/// execution is thread-safe.
std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& in,
                                      bool inverse);

}  // namespace pnsim::fft

#endif
