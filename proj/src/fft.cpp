#include "pnsim/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace pnsim::fft {

namespace {

// Plan creation is not thread-safe in FFTW; executing a plan on fresh arrays
// is. Plans are cached per (size, direction), created once under a lock with
// FFTW_ESTIMATE | FFTW_UNALIGNED so any caller buffer is acceptable and the
// chosen algorithm depends only on the size.
class PlanCache {
  public:
    fftw_plan get(std::size_t n, int sign) {
        std::lock_guard<std::mutex> lock(mutex_);
        const auto key = std::make_pair(n, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<std::complex<double>> tmp_in(n), tmp_out(n);
        fftw_plan plan = fftw_plan_dft_1d(
            static_cast<int>(n), reinterpret_cast<fftw_complex*>(tmp_in.data()),
            reinterpret_cast<fftw_complex*>(tmp_out.data()), sign,
            FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (plan == nullptr) throw std::runtime_error("fftw plan creation failed");
        plans_.emplace(key, plan);
        return plan;
    }

  private:
    std::mutex mutex_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

}  // namespace

std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& in,
                                      bool inverse) {
    if (in.empty()) throw std::invalid_argument("dft: empty input");
    const int sign = inverse ? FFTW_BACKWARD : FFTW_FORWARD;
    fftw_plan plan = cache().get(in.size(), sign);
    std::vector<std::complex<double>> out(in.size());
    // in is untouched: FFTW only writes the output array for out-of-place c2c.
    fftw_execute_dft(plan,
                     reinterpret_cast<fftw_complex*>(
                         const_cast<std::complex<double>*>(in.data())),
                     reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

}  // namespace pnsim::fft
