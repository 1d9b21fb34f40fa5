#include "pnsim/psd.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pnsim {

namespace {

void check_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream msg;
        msg << name << " must be positive and finite, got " << v;
        throw std::domain_error(msg.str());
    }
}

}  // namespace

PhaseNoisePsd::PhaseNoisePsd(double s0_rad2_hz, double base_carrier_hz,
                             std::vector<ZeroPoleStage> stages)
    : s0_(s0_rad2_hz), base_carrier_hz_(base_carrier_hz), stages_(std::move(stages)) {
    check_positive(s0_, "s0");
    check_positive(base_carrier_hz_, "base_carrier_hz");
    for (const auto& st : stages_) {
        check_positive(st.f_zero_hz, "f_zero_hz");
        check_positive(st.f_pole_hz, "f_pole_hz");
    }
}

PhaseNoisePsd PhaseNoisePsd::from_dbchz(double s0_dbchz, double base_carrier_hz,
                                        std::vector<ZeroPoleStage> stages) {
    return PhaseNoisePsd(std::pow(10.0, s0_dbchz / 10.0), base_carrier_hz,
                         std::move(stages));
}

const char* to_string(VarianceMethod m) {
    switch (m) {
        case VarianceMethod::numerical_integral: return "numerical_integral";
        case VarianceMethod::analytic_approx: return "analytic_approx";
    }
    return "unknown";
}

double psd_eval(const PhaseNoisePsd& psd, double f_m_hz) {
    if (f_m_hz < 0.0 || std::isnan(f_m_hz)) {
        throw std::domain_error("psd_eval: offset frequency must be >= 0");
    }
    double v = psd.s0();
    for (const auto& st : psd.stages()) {
        const double zr = f_m_hz / st.f_zero_hz;
        const double pr = f_m_hz / st.f_pole_hz;
        v *= (1.0 + zr * zr) / (1.0 + pr * pr);
    }
    if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << "psd_eval: non-finite PSD value at offset " << f_m_hz << " Hz";
        throw std::runtime_error(msg.str());
    }
    return v;
}

PhaseNoisePsd scale_to_carrier(const PhaseNoisePsd& psd, double f_c_hz) {
    check_positive(f_c_hz, "f_c_hz");
    const double ratio = f_c_hz / psd.base_carrier_hz();
    std::vector<ZeroPoleStage> stages = psd.stages();
    for (auto& st : stages) {
        st.f_zero_hz *= ratio;
        st.f_pole_hz *= ratio;
    }
    return PhaseNoisePsd(psd.s0() * ratio * ratio, f_c_hz, std::move(stages));
}

PhaseNoisePsd apply_multiplier(const PhaseNoisePsd& psd, unsigned n_mult) {
    if (n_mult == 0) throw std::domain_error("apply_multiplier: order must be >= 1");
    const double n = static_cast<double>(n_mult);
    std::vector<ZeroPoleStage> stages = psd.stages();
    for (auto& st : stages) {
        st.f_zero_hz *= n;
        st.f_pole_hz *= n;
    }
    return PhaseNoisePsd(psd.s0() * n * n, psd.base_carrier_hz() * n,
                         std::move(stages));
}

namespace {

// Recursive adaptive Simpson on [a, b] with precomputed endpoint/midpoint
// values. whole = simpson(a, b).
double adaptive_simpson(const PhaseNoisePsd& psd, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = psd_eval(psd, lm);
    const double frm = psd_eval(psd, rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson(psd, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(psd, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate_panel(const PhaseNoisePsd& psd, double a, double b, double tol) {
    const double fa = psd_eval(psd, a);
    const double fb = psd_eval(psd, b);
    const double m = 0.5 * (a + b);
    const double fm = psd_eval(psd, m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(psd, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace

VarianceEstimate integrate_variance(const PhaseNoisePsd& psd, double bandwidth_hz) {
    check_positive(bandwidth_hz, "bandwidth_hz");
    const double f_hi = 0.5 * bandwidth_hz;
    const double f_low = std::max(f_hi * 1e-9, 1e-3);

    // The PSD is flat below every corner; [0, f_low] contributes the exact
    // rectangle s0 * f_low.
    double total = psd.s0() * std::min(f_low, f_hi);
    if (f_low >= f_hi) {
        return {total, VarianceMethod::numerical_integral};
    }

    // Log-spaced panels so corners spread over decades get equal attention.
    const int decades = static_cast<int>(std::ceil(std::log10(f_hi / f_low)));
    const int panels = std::max(4 * decades, 8);
    const double log_lo = std::log(f_low);
    const double step = (std::log(f_hi) - log_lo) / panels;

    // Crude scale estimate to turn the relative tolerance into an absolute
    // per-panel budget.
    double scale = 0.0;
    for (int i = 0; i <= panels; ++i) {
        scale = std::max(scale, psd_eval(psd, std::exp(log_lo + i * step)));
    }
    const double abs_tol = std::max(scale * f_hi * 1e-12, 1e-300);

    for (int i = 0; i < panels; ++i) {
        const double a = (i == 0) ? f_low : std::exp(log_lo + i * step);
        const double b = (i == panels - 1) ? f_hi : std::exp(log_lo + (i + 1) * step);
        total += integrate_panel(psd, a, b, abs_tol / panels);
    }
    if (!std::isfinite(total)) {
        throw std::runtime_error("integrate_variance: non-finite accumulated value");
    }
    return {total, VarianceMethod::numerical_integral};
}

VarianceEstimate analytic_variance(double s0_rad2_hz, double delta_f_hz,
                                   std::size_t n_sample, double f_c_hz,
                                   double f_base_hz) {
    check_positive(s0_rad2_hz, "s0_rad2_hz");
    check_positive(delta_f_hz, "delta_f_hz");
    check_positive(f_c_hz, "f_c_hz");
    check_positive(f_base_hz, "f_base_hz");
    if (n_sample == 0) throw std::domain_error("analytic_variance: n_sample must be > 0");
    const double ratio = f_c_hz / f_base_hz;
    const double value = static_cast<double>(n_sample) * 2.0 * M_PI * delta_f_hz *
                         s0_rad2_hz * ratio * ratio;
    return {value, VarianceMethod::analytic_approx};
}

}  // namespace pnsim
