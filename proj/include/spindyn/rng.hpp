#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

namespace spindyn {

// mt19937_64 core with hand-rolled variate transforms. The standard
// distributions are implementation-defined, so seeded streams would not be
// reproducible across standard libraries; these are.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t raw() { return eng_(); }

    // uniform in [0, 1), 53-bit resolution
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // unbiased integer in [0, n), n >= 1
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return x % n;
    }

    // uniform direction on the unit sphere (Marsaglia 1972)
    Eigen::Vector3d unit_vector() {
        double x1, x2, rsq;
        do {
            x1 = uniform(-1.0, 1.0);
            x2 = uniform(-1.0, 1.0);
            rsq = x1 * x1 + x2 * x2;
        } while (rsq >= 1.0);
        const double f = std::sqrt(1.0 - rsq);
        return {2.0 * x1 * f, 2.0 * x2 * f, 1.0 - 2.0 * rsq};
    }

    // standard normal, polar method
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = uniform(-1.0, 1.0);
            v = uniform(-1.0, 1.0);
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Fisher-Yates with Rng::below (std::shuffle is implementation-defined).
template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[rng.below(i)]);
}

}  // namespace spindyn
