#pragma once

#include <array>

#include <Eigen/Core>

namespace spindyn::twospin {

// FID splitting factor of the z-axis pair: the computed spectrum gives
// S^x(t) = cos(t) cos(alpha p_d t) with alpha = 3/2, not the 1 printed in
// the source two-spin formulas. two_spin_eigs() recomputes it from scratch.
inline constexpr double kAlpha = 1.5;

// Closed-form two-spin FID, cos(t) cos(alpha p_d t).
double quantum_sx(double t, double p_d, double alpha = kAlpha);

struct PairEigs {
    std::array<double, 4> computed;  // ascending, from the 4x4 diagonalization
    std::array<double, 4> printed;   // the published closed-form values, same order
    double e_aligned_up;             // computed energy of |up,up>
    double e_symmetric;              // computed energy of (|ud>+|du>)/sqrt(2)
    double e_antisymmetric;          // computed energy of (|ud>-|du>)/sqrt(2)
    double alpha;                    // (e_symmetric - e_aligned_up - 1)/p_d
};

// Diagonalize the z-axis pair directly and report the convention factor
// between the computed spectrum and the published closed form
// {-1-p_d, 2p_d, 0, 1-p_d}.
PairEigs two_spin_eigs(double p_d);

// Reduced rotating-frame variables of the z-axis pair: polar angles and the
// azimuthal difference, evolving in slow time tau = p_d t.
struct ReducedState {
    double theta1;
    double theta2;
    double phi;  // phi_1 - phi_2
};

// d(theta1, theta2, Phi)/dtau. Throws std::domain_error at the
// cotangent poles (sin theta = 0).
std::array<double, 3> reduced_rhs(const ReducedState& s);

double reduced_m(const ReducedState& s);  // cos t1 + cos t2, conserved
double reduced_e(const ReducedState& s);  // sin t1 sin t2 cos Phi - 2 cos t1 cos t2, conserved

// M = 0 branch closed form: c^2(tau) oscillating in [E-1, (1+E)/3],
// valid for E in [1, 2].
double c_squared(double e_dip, double tau, double tau0);

// Oscillation period of c(tau): 2 K(m) / sqrt(1+E) with m = 2(2-E)/(E+1),
// E in (1, 2]. pi/sqrt(3) at E = 2, divergent as E -> 1.
double period(double e_dip);

// Homoclinic orbit at E = 1: sqrt(2/3) sech(sqrt(2) (tau - tau0)).
double homoclinic_c(double tau, double tau0);

// Integrate the reduced system (fixed-tolerance RK) and return the state at
// tau_end; used by tests and the CLI oracle.
ReducedState integrate_reduced(ReducedState s, double tau_end, double tol = 1e-12);

}  // namespace spindyn::twospin
