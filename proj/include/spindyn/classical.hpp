#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "spindyn/geometry.hpp"
#include "spindyn/ode.hpp"
#include "spindyn/trace.hpp"

namespace spindyn {

// N classical unit spin vectors and the simulation clock.
struct ClassicalState {
    std::vector<Eigen::Vector3d> e;
    double t = 0.0;

    int size() const { return static_cast<int>(e.size()); }
    Eigen::Vector3d mean() const;
};

enum class Frame {
    lab,               // full equations, Larmor term included
    lab_secular,       // Larmor term plus the a-coefficient (secular) couplings only
    rotating_secular,  // secular couplings only, Larmor term removed
};

// All spins along +x or -x; round(N(1+s)/2) of them along +x, the sites
// chosen by a seeded shuffle.
ClassicalState init_linear(const SpinGeometry& g, double s, std::uint64_t seed);

// Each spin drawn from the maximum-entropy tilted distribution about +x
// (density ~ exp(kappa e^x), Langevin(kappa) = s); whole configurations are
// resampled until |<e^x> - s| <= 1e-3. |s| = 1 falls back to init_linear.
ClassicalState init_random(const SpinGeometry& g, double s, std::uint64_t seed);

// Rotate every spin by an independent random transverse angle of size eps.
ClassicalState perturb(const ClassicalState& state, double eps, std::uint64_t seed);

// Local dimensionless dipolar field H_k = sum_{l != k} [3 r (e_l . r)/r^5 - e_l/r^3],
// summed over ascending l. For the secular frames the a-coefficient field
// (a_kl/2 x_l, a_kl/2 y_l, -a_kl z_l) is used instead.
void dipolar_fields(const SpinGeometry& g, const std::vector<Eigen::Vector3d>& e,
                    std::vector<Eigen::Vector3d>& h);
void secular_fields(const PairCoefficients& pc, const std::vector<Eigen::Vector3d>& e,
                    std::vector<Eigen::Vector3d>& h);

// de_k/dt = e_k x (z_hat + p_d H_k) (z_hat dropped in the rotating frame).
void classical_rhs(const SpinGeometry& g, const PairCoefficients& pc, Frame frame, double p_d,
                   const std::vector<Eigen::Vector3d>& e, std::vector<Eigen::Vector3d>& fields_buf,
                   std::vector<Eigen::Vector3d>& de);

// The same right-hand side written out through the pair coefficients
// (a, b^x, b^y, c^x, c^y); kept as an independent algebraic route for
// cross-checks, not used by the integrator.
void classical_rhs_coeff(const PairCoefficients& pc, double p_d,
                         const std::vector<Eigen::Vector3d>& e,
                         std::vector<Eigen::Vector3d>& de);

struct IntegrateControls {
    double tol = 1e-8;       // local error tolerance of the embedded pair
    double norm_tol = 1e-8;  // max allowed per-step spin length deviation
    double h_init = 1e-2;
    double h_min = 1e-12;
    double h_max = 1.0;
};

struct ClassicalFidResult {
    FidTrace trace;
    ode::Stats stats;
    ClassicalState final_state;
};

// Integrate the spin system over the output grid. Steps whose error exceeds
// tol are retried; steps that move any spin length off 1 by more than
// norm_tol are halved; after acceptance every spin is renormalized.
ClassicalFidResult integrate(const SpinGeometry& g, ClassicalState state, double p_d,
                             const TimeGrid& grid, Frame frame = Frame::lab,
                             const IntegrateControls& controls = {});

}  // namespace spindyn
