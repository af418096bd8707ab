#include "spindyn/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace spindyn {

double elliptic_k(double m) {
    if (m < 0.0 || m >= 1.0)
        throw std::domain_error("elliptic_k: parameter m must be in [0, 1); got " +
                                std::to_string(m));
    double a = 1.0, b = std::sqrt(1.0 - m);
    for (int it = 0; it < 64 && std::abs(a - b) > 1e-15 * a; ++it) {
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return M_PI / (2.0 * a);
}

double jacobi_sn(double u, double m) {
    if (m < 0.0 || m > 1.0)
        throw std::domain_error("jacobi_sn: parameter m must be in [0, 1]; got " +
                                std::to_string(m));
    if (m < 1e-14) return std::sin(u);
    if (1.0 - m < 1e-14) return std::tanh(u);

    // ascending AGM scale, then descend through the amplitude recursion
    constexpr int kMax = 32;
    double a[kMax], c[kMax];
    a[0] = 1.0;
    c[0] = std::sqrt(m);
    double b = std::sqrt(1.0 - m);
    int nlev = 0;
    for (int i = 1; i < kMax; ++i) {
        a[i] = 0.5 * (a[i - 1] + b);
        c[i] = 0.5 * (a[i - 1] - b);
        b = std::sqrt(a[i - 1] * b);
        nlev = i;
        if (std::abs(c[i]) < 1e-16 * a[i]) break;
    }
    double phi = std::ldexp(a[nlev] * u, nlev);  // 2^n a_n u
    for (int i = nlev; i >= 1; --i) {
        const double s = std::clamp(c[i] * std::sin(phi) / a[i], -1.0, 1.0);
        phi = 0.5 * (std::asin(s) + phi);
    }
    return std::sin(phi);
}

}  // namespace spindyn
