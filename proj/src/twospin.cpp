#include "spindyn/twospin.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "spindyn/elliptic.hpp"
#include "spindyn/geometry.hpp"
#include "spindyn/ode.hpp"
#include "spindyn/quantum.hpp"

namespace spindyn::twospin {

double quantum_sx(double t, double p_d, double alpha) {
    return std::cos(t) * std::cos(alpha * p_d * t);
}

PairEigs two_spin_eigs(double p_d) {
    if (p_d <= 0.0) throw std::invalid_argument("p_d must be positive");
    const SpinGeometry g = SpinGeometry::from_sites({{0, 0, 0}, {0, 0, 1}});
    const EigenSystem es = diagonalize(build_hamiltonian(g, p_d));

    PairEigs out{};
    for (int i = 0; i < 4; ++i) out.computed[i] = es.energies()(i);

    // published closed form, ascending for small p_d: {-1-p, 0, 2p, 1-p}
    out.printed = {-1.0 - p_d, 0.0, 2.0 * p_d, 1.0 - p_d};

    auto energy_of = [&](const Eigen::Vector4cd& v) {
        double best = 0.0, best_ov = -1.0;
        for (int i = 0; i < 4; ++i) {
            const double ov = std::abs(es.vectors().col(i).dot(v));
            if (ov > best_ov) {
                best_ov = ov;
                best = es.energies()(i);
            }
        }
        return best;
    };
    const double inv = 1.0 / std::sqrt(2.0);
    out.e_aligned_up = energy_of(Eigen::Vector4cd(1, 0, 0, 0));
    out.e_symmetric = energy_of(Eigen::Vector4cd(0, inv, inv, 0));
    out.e_antisymmetric = energy_of(Eigen::Vector4cd(0, -inv, inv, 0));
    out.alpha = (out.e_symmetric - out.e_aligned_up - 1.0) / p_d;
    return out;
}

std::array<double, 3> reduced_rhs(const ReducedState& s) {
    const double s1 = std::sin(s.theta1), s2 = std::sin(s.theta2);
    if (std::abs(s1) < 1e-12 || std::abs(s2) < 1e-12)
        throw std::domain_error("reduced_rhs: cotangent pole at theta = 0 or pi");
    const double c1 = std::cos(s.theta1), c2 = std::cos(s.theta2);
    const double sp = std::sin(s.phi), cp = std::cos(s.phi);
    return {-s2 * sp, s1 * sp, 2.0 * (c1 - c2) + (s1 * c2 / s2 - s2 * c1 / s1) * cp};
}

double reduced_m(const ReducedState& s) { return std::cos(s.theta1) + std::cos(s.theta2); }

double reduced_e(const ReducedState& s) {
    return std::sin(s.theta1) * std::sin(s.theta2) * std::cos(s.phi) -
           2.0 * std::cos(s.theta1) * std::cos(s.theta2);
}

double c_squared(double e_dip, double tau, double tau0) {
    if (e_dip < 1.0 || e_dip > 2.0)
        throw std::domain_error("c_squared: oscillatory branch needs E in [1, 2]; got " +
                                std::to_string(e_dip));
    const double m = 2.0 * (2.0 - e_dip) / (e_dip + 1.0);
    const double sn = jacobi_sn(std::sqrt(1.0 + e_dip) * (tau - tau0), m);
    return (1.0 + e_dip) / 3.0 - (2.0 * (2.0 - e_dip) / 3.0) * sn * sn;
}

double period(double e_dip) {
    if (e_dip <= 1.0 || e_dip > 2.0)
        throw std::domain_error("period: finite period needs E in (1, 2]; got " +
                                std::to_string(e_dip));
    const double m = 2.0 * (2.0 - e_dip) / (e_dip + 1.0);
    return 2.0 * elliptic_k(m) / std::sqrt(1.0 + e_dip);
}

double homoclinic_c(double tau, double tau0) {
    return std::sqrt(2.0 / 3.0) / std::cosh(std::sqrt(2.0) * (tau - tau0));
}

ReducedState integrate_reduced(ReducedState s, double tau_end, double tol) {
    Eigen::VectorXd y(3);
    y << s.theta1, s.theta2, s.phi;
    ode::Controls ctl;
    ctl.tol = tol;
    ctl.h_init = 1e-3;
    ctl.h_max = 0.05;
    ode::Dp5 stepper(
        y, 0.0,
        [](double, const Eigen::VectorXd& yy, Eigen::VectorXd& dy) {
            const auto d = reduced_rhs({yy(0), yy(1), yy(2)});
            dy << d[0], d[1], d[2];
        },
        ctl);
    stepper.advance_to(tau_end);
    return {stepper.state()(0), stepper.state()(1), stepper.state()(2)};
}

}  // namespace spindyn::twospin
