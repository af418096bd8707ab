#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "spindyn/classical.hpp"
#include "spindyn/geometry.hpp"

namespace spindyn {

// Disturbance vectors co-integrated with the nonlinear trajectory, with the
// running sum of log rescale factors for the Lyapunov estimate.
struct TangentState {
    std::vector<Eigen::Vector3d> f;
    double log_norm_accum = 0.0;
    double last_rescale_time = 0.0;

    double norm() const;
};

// Random direction in the 3N-dimensional tangent space, unit total norm.
TangentState random_tangent(int n, std::uint64_t seed);

// Exact linearization of the classical right-hand side around e:
//   df_k/dt = f_k x (z_hat + p_d H[e]_k) + p_d e_k x H[f]_k
// where H[.] is the (linear) local field map of the chosen frame.
void tangent_rhs(const SpinGeometry& g, const PairCoefficients& pc, Frame frame, double p_d,
                 const std::vector<Eigen::Vector3d>& e, const std::vector<Eigen::Vector3d>& f,
                 std::vector<Eigen::Vector3d>& df);

struct LyapunovOptions {
    double t_end = 70000.0;
    double transient_cutoff = 1000.0;  // T: the [0, T] segment is discarded
    double rescale_interval = 10.0;
    double sample_interval = 100.0;
    Frame frame = Frame::lab;
    IntegrateControls controls;
};

struct LyapunovSeries {
    std::vector<double> t;  // sample times > T
    std::vector<double> L;  // L(t) = [log growth between T and t] / (t - T)
    double transient_cutoff = 0.0;
    double L_final = 0.0;
    ode::Stats stats;
};

// Co-integrates the nonlinear system and its linearization, rescaling the
// tangent vector to unit norm every rescale_interval and accumulating logs.
LyapunovSeries lyapunov(const SpinGeometry& g, ClassicalState initial, TangentState tangent,
                        double p_d, const LyapunovOptions& opt = {});

}  // namespace spindyn
