#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "spindyn/trace.hpp"

namespace spindyn {

// X_k = sum_n x_n exp(-2 pi i k n / M), no forward normalization; the
// inverse carries 1/M. omega_k = 2 pi k / (M dt).
struct Spectrum {
    std::vector<double> omega;
    std::vector<std::complex<double>> x;
    double resolution = 0.0;  // omega step actually achieved
    int padded_size = 0;

    std::vector<double> abs() const;
};

// zero_pad >= 1 multiplies the transform length (zeros appended) to refine
// the frequency grid.
Spectrum dft(const std::vector<double>& samples, double dt, int zero_pad = 1);
Spectrum dft(const std::vector<std::complex<double>>& samples, double dt, int zero_pad = 1);

// Inverse of the stated sum: x_n = (1/M) sum_k X_k exp(+2 pi i k n / M).
std::vector<std::complex<double>> idft(const std::vector<std::complex<double>>& x);

// |sx + i sy|: magnitude of the complex transverse polarization.
std::vector<double> envelope(const FidTrace& trace);

// First time the envelope falls below rel_threshold * envelope(0), refined
// by a parabolic fit around the local minimum that follows the crossing.
// Empty when no crossing occurs within the trace.
std::optional<double> first_zero(const std::vector<double>& env, const std::vector<double>& t,
                                 double rel_threshold = 1e-2);

// First local minimum of the envelope below rel_ceiling * envelope(0),
// parabola-refined. Finite spin counts leave a residual transverse
// polarization of a few percent, which hides the first beat from the
// threshold detector above; this one finds it regardless of depth.
std::optional<double> first_minimum(const std::vector<double>& env, const std::vector<double>& t,
                                    double rel_ceiling = 0.3);

// f(t) = A exp(-a^2 t^2 / 2) sin(bt)/(bt), fitted to |envelope| by
// Nelder-Mead least squares from the deterministic start
// (A0, a0, b0) = (env(0), 1/(2 t*), pi/(2 t*)).
struct AbragamFit {
    double amplitude = 0.0;  // A
    double gauss_rate = 0.0;  // a
    double sinc_rate = 0.0;   // b
    double residual_rms = 0.0;
    double window_lo = 0.0;
    double window_hi = 0.0;
    bool converged = false;
};

double abragam(double t, double amplitude, double gauss_rate, double sinc_rate);

AbragamFit fit_abragam(const std::vector<double>& env, const std::vector<double>& t,
                       double window_lo, double window_hi);

// Divergence report between two traces on a common grid (B is linearly
// resampled onto A's grid). The split time defaults to first_zero of A.
struct CompareReport {
    double t_split = 0.0;
    double max_before = 0.0, rms_before = 0.0;
    double max_after = 0.0, rms_after = 0.0;
    double width_a = 0.0, width_b = 0.0;  // spectral FWHM near omega = 1
};

CompareReport compare(const FidTrace& a, const FidTrace& b, int zero_pad = 8);

// Peak structure of |X(omega)| in the window around the Larmor line.
struct DoubletInfo {
    double peak_lo_omega = 0.0, peak_lo_height = 0.0;  // highest peak below center
    double peak_hi_omega = 0.0, peak_hi_height = 0.0;  // highest peak above center
    double fwhm = 0.0;  // full width at half the taller peak
};

DoubletInfo doublet_info(const Spectrum& spec, double center = 1.0, double half_window = 0.5);

}  // namespace spindyn
