#pragma once

#include <string>
#include <vector>

namespace spindyn {

// Uniform output grid t_m = m * dt, m = 0 .. samples-1.
struct TimeGrid {
    double dt = 0.5;
    int samples = 4000;

    double t(int m) const { return dt * m; }
    double t_last() const { return dt * (samples - 1); }

    static TimeGrid up_to(double t_max, double dt = 0.5) {
        return TimeGrid{dt, static_cast<int>(t_max / dt + 0.5)};
    }
};

// Uniformly sampled polarization components. For the quantum engine the
// columns are S^{x,y,z} per spin (initial S^x = 1); for the classical engine
// they are the mean unit-vector components e^{x,y,z}.
struct FidTrace {
    std::vector<double> t;
    std::vector<double> sx, sy, sz;
    std::string source;  // "quantum" | "classical"

    std::size_t size() const { return t.size(); }
    double dt() const { return t.size() > 1 ? t[1] - t[0] : 0.0; }
};

}  // namespace spindyn
