#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "spindyn/classical.hpp"
#include "spindyn/elliptic.hpp"
#include "spindyn/geometry.hpp"
#include "spindyn/twospin.hpp"

using namespace spindyn;
namespace ts = spindyn::twospin;

namespace {

constexpr double kPi = M_PI;

ts::ReducedState max_turning_state(double e_dip) {
    // c = c_max, M = 0, Phi = pi
    const double c = std::sqrt((1.0 + e_dip) / 3.0);
    return {std::acos(c), std::acos(-c), kPi};
}

}  // namespace

TEST_CASE("elliptic K and sn against reference values") {
    CHECK(elliptic_k(0.0) == doctest::Approx(kPi / 2).epsilon(1e-15));
    CHECK(elliptic_k(0.5) == doctest::Approx(1.8540746773013719).epsilon(1e-14));
    CHECK(elliptic_k(0.4) == doctest::Approx(1.7775193714912534).epsilon(1e-14));
    CHECK(elliptic_k(0.9) == doctest::Approx(2.5780921133481733).epsilon(1e-14));
    CHECK_THROWS_AS(elliptic_k(1.0), std::domain_error);
    CHECK_THROWS_AS(elliptic_k(-0.1), std::domain_error);

    for (double u : {-2.0, -0.3, 0.0, 0.4, 1.1, 3.0})
        CHECK(jacobi_sn(u, 0.0) == doctest::Approx(std::sin(u)).epsilon(1e-14));
    for (double u : {-2.0, 0.5, 2.5})
        CHECK(jacobi_sn(u, 1.0) == doctest::Approx(std::tanh(u)).epsilon(1e-14));

    CHECK(jacobi_sn(0.7, 0.3) == doctest::Approx(0.6323047763108646).epsilon(1e-12));
    CHECK(jacobi_sn(2.5, 0.8) == doctest::Approx(0.9940180192187144).epsilon(1e-12));
    CHECK(jacobi_sn(13.7, 0.64) == doctest::Approx(-0.9869891330415438).epsilon(1e-11));
    CHECK(jacobi_sn(-1.3, 0.2) == doctest::Approx(-0.9482820608663488).epsilon(1e-12));

    // periodicity: sn(u + 4K) = sn(u)
    const double m = 0.6, K = elliptic_k(m);
    CHECK(jacobi_sn(0.9 + 4 * K, m) == doctest::Approx(jacobi_sn(0.9, m)).epsilon(1e-10));
}

TEST_CASE("pair FID closed form") {
    CHECK(ts::quantum_sx(0.0, 0.01) == 1.0);
    CHECK(ts::quantum_sx(kPi, 0.01) ==
          doctest::Approx(-std::cos(ts::kAlpha * 0.01 * kPi)).epsilon(1e-15));
}

TEST_CASE("pair eigenstructure and convention factor") {
    const auto eigs = ts::two_spin_eigs(0.01);
    CHECK(eigs.alpha == doctest::Approx(1.5).epsilon(1e-9));
    // direct evaluation: {-1-p/2, 0, p, 1-p/2}
    CHECK(eigs.computed[0] == doctest::Approx(-1.005).epsilon(1e-12));
    CHECK(eigs.computed[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(eigs.computed[2] == doctest::Approx(0.01).epsilon(1e-10));
    CHECK(eigs.computed[3] == doctest::Approx(0.995).epsilon(1e-12));
    CHECK(eigs.e_antisymmetric == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(eigs.e_symmetric == doctest::Approx(0.01).epsilon(1e-10));

    const auto small = ts::two_spin_eigs(1e-9);
    CHECK(small.computed[0] == doctest::Approx(-1.0).epsilon(1e-8));
    CHECK(small.computed[3] == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("reduced system right-hand sides") {
    // stationary solution c = 0
    const auto d0 = ts::reduced_rhs({kPi / 2, kPi / 2, 0.0});
    CHECK(std::abs(d0[0]) < 1e-15);
    CHECK(std::abs(d0[1]) < 1e-15);
    CHECK(std::abs(d0[2]) < 1e-15);

    // sin(Phi) factor kills the theta equations
    const auto d1 = ts::reduced_rhs({0.7, 1.9, 0.0});
    CHECK(d1[0] == 0.0);
    CHECK(d1[1] == 0.0);

    CHECK_THROWS_AS(ts::reduced_rhs({0.0, 1.0, 0.3}), std::domain_error);
    CHECK_THROWS_AS(ts::reduced_rhs({1.0, kPi, 0.3}), std::domain_error);
}

TEST_CASE("M and E are conserved along the reduced flow") {
    // directional derivative of each integral along the rhs vanishes
    const double h = 1e-6;
    for (const auto& s0 : {ts::ReducedState{0.9, 2.0, 0.7}, ts::ReducedState{1.4, 1.1, -2.2},
                           ts::ReducedState{2.4, 0.6, 1.9}}) {
        const auto d = ts::reduced_rhs(s0);
        auto shift = [&](double eps) {
            return ts::ReducedState{s0.theta1 + eps * d[0], s0.theta2 + eps * d[1],
                                    s0.phi + eps * d[2]};
        };
        const double dM = (ts::reduced_m(shift(h)) - ts::reduced_m(shift(-h))) / (2 * h);
        const double dE = (ts::reduced_e(shift(h)) - ts::reduced_e(shift(-h))) / (2 * h);
        CHECK(std::abs(dM) < 1e-9);
        CHECK(std::abs(dE) < 1e-9);
    }
}

TEST_CASE("c_squared formula against the integrated reduced system") {
    const double E = 1.5;
    const auto s0 = max_turning_state(E);
    REQUIRE(ts::reduced_m(s0) == doctest::Approx(0.0).epsilon(1e-15));
    REQUIRE(ts::reduced_e(s0) == doctest::Approx(E).epsilon(1e-13));

    CHECK(ts::c_squared(E, 0.0, 0.0) == doctest::Approx((1.0 + E) / 3.0).epsilon(1e-14));

    for (double tau : {0.2, 0.5, 0.9, 1.3, 1.9, 2.6}) {
        const auto s = ts::integrate_reduced(s0, tau);
        const double c2 = std::cos(s.theta1) * std::cos(s.theta1);
        CHECK(std::abs(c2 - ts::c_squared(E, tau, 0.0)) < 1e-8);
    }

    // oscillation window [E-1, (1+E)/3]
    for (double tau = 0.0; tau < 5.0; tau += 0.05) {
        const double c2 = ts::c_squared(E, tau, 0.0);
        CHECK(c2 > E - 1.0 - 1e-12);
        CHECK(c2 < (1.0 + E) / 3.0 + 1e-12);
    }

    CHECK_THROWS_AS(ts::c_squared(0.8, 0.1, 0.0), std::domain_error);
    CHECK_THROWS_AS(ts::c_squared(2.3, 0.1, 0.0), std::domain_error);
}

TEST_CASE("E = 2 - eps expansion") {
    // c^2 ~ 1 - (eps/3)[2 - cos(2 sqrt(3) tau)], error O(eps^2)
    auto max_diff = [](double eps) {
        double worst = 0.0;
        for (double tau = 0.0; tau <= 4.0; tau += 0.01) {
            const double exact = ts::c_squared(2.0 - eps, tau, 0.0);
            const double approx =
                1.0 - (eps / 3.0) * (2.0 - std::cos(2.0 * std::sqrt(3.0) * tau));
            worst = std::max(worst, std::abs(exact - approx));
        }
        return worst;
    };
    const double d1 = max_diff(0.01), d2 = max_diff(0.02);
    CHECK(d1 < 5.0 * 0.01 * 0.01);
    CHECK(d2 < 5.0 * 0.02 * 0.02);
    // quadratic scaling in eps
    CHECK(d2 / d1 > 2.5);
    CHECK(d2 / d1 < 5.5);
}

TEST_CASE("period of the M = 0 oscillation") {
    CHECK(ts::period(2.0) == doctest::Approx(kPi / std::sqrt(3.0)).epsilon(1e-12));
    CHECK(ts::period(1.5) == doctest::Approx(2.2484039195933314).epsilon(1e-13));
    CHECK(ts::period(1.0001) > ts::period(1.01));
    CHECK(ts::period(1.01) > ts::period(1.5));
    CHECK_THROWS_AS(ts::period(1.0), std::domain_error);
    CHECK_THROWS_AS(ts::period(0.5), std::domain_error);

    // measured period of the integrated system at E = 1.5: parabolic vertex
    // fit of c^2 around the expected next maximum
    const double E = 1.5, T = ts::period(E);
    const auto s0 = max_turning_state(E);
    const double dt = 2e-4;
    double best_t = 0.0, best_v = -1e9, prev_v = -1e9, prev_prev = -1e9, prev_t = 0.0;
    for (double tau = T - 0.02; tau <= T + 0.02; tau += dt) {
        const auto s = ts::integrate_reduced(s0, tau);
        const double v = std::cos(s.theta1) * std::cos(s.theta1);
        if (prev_v > prev_prev && prev_v >= v && prev_prev > -1e8) {
            const double denom = prev_prev - 2 * prev_v + v;
            best_t = prev_t + (denom != 0 ? 0.5 * (prev_prev - v) / denom * dt : 0.0);
            best_v = prev_v;
            break;
        }
        prev_prev = prev_v;
        prev_v = v;
        prev_t = tau;
    }
    REQUIRE(best_v > 0.0);
    CHECK(std::abs(best_t - T) / T < 1e-6);
}

TEST_CASE("homoclinic orbit at E = 1") {
    CHECK(ts::homoclinic_c(0.0, 0.0) == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-15));
    CHECK(ts::homoclinic_c(10.0, 0.0) < 1e-5);
    CHECK(ts::homoclinic_c(-10.0, 0.0) < 1e-5);
    // matches c_squared at E = 1 (sech^2 limit of the sn form)
    for (double tau : {0.0, 0.3, 1.0, 2.0}) {
        const double c = ts::homoclinic_c(tau, 0.0);
        CHECK(c * c == doctest::Approx(ts::c_squared(1.0, tau, 0.0)).epsilon(1e-12));
    }

    // a 1e-6 disturbance off the stationary point escapes to the
    // sqrt(2/3)-scale excursion and comes back
    const double eps = 1e-6;
    const ts::ReducedState s0{kPi / 2 + eps, kPi / 2 - eps, 0.0};
    double c_max = 0.0;
    bool returned = false;
    for (double tau = 0.5; tau <= 25.0; tau += 0.5) {
        const auto s = ts::integrate_reduced(s0, tau);
        const double c = std::abs(std::cos(s.theta1));
        c_max = std::max(c_max, c);
        if (tau > 15.0 && c < 0.01) returned = true;
    }
    CHECK(c_max > 0.7);
    CHECK(c_max < 0.9);
    CHECK(returned);
}

TEST_CASE("full classical pair satisfies the reduced equations") {
    // run the lab-frame engine on the z-axis pair, transform to rotating
    // angles, compare d(theta)/dtau against the reduced rhs
    const auto g = SpinGeometry::from_sites({{0, 0, 0}, {0, 0, 1}});
    const double p_d = 0.01;
    ClassicalState st;
    const double delta = 0.4;
    st.e = {Eigen::Vector3d(std::cos(delta), 0.1, -std::sin(delta)).normalized(),
            Eigen::Vector3d(std::cos(delta), -0.2, std::sin(delta)).normalized()};

    const PairCoefficients pc(g);
    IntegrateControls ctl;
    for (double t_end : {0.0, 7.3, 31.4, 140.0}) {
        ClassicalState at = st;
        if (t_end > 0.0) {
            TimeGrid grid{t_end, 2};
            at = integrate(g, st, p_d, grid, Frame::lab, ctl).final_state;
        }
        const double t = at.t;
        double theta[2], phi[2];
        for (int i = 0; i < 2; ++i) {
            const double x = at.e[i].x(), y = at.e[i].y();
            const double X = x * std::cos(t) - y * std::sin(t);
            const double Y = y * std::cos(t) + x * std::sin(t);
            theta[i] = std::acos(at.e[i].z());
            phi[i] = std::atan2(Y, X);
        }
        const ts::ReducedState rs{theta[0], theta[1], phi[0] - phi[1]};
        const auto dr = ts::reduced_rhs(rs);

        std::vector<Eigen::Vector3d> hbuf, de;
        classical_rhs(g, pc, Frame::lab, p_d, at.e, hbuf, de);
        for (int i = 0; i < 2; ++i) {
            const double dtheta_dt = -de[i].z() / std::sin(theta[i]);
            CHECK(std::abs(dtheta_dt / p_d - dr[i]) < 1e-6);
        }
    }
}

TEST_CASE("pair envelope modulation period matches T(E)/p_d") {
    const auto g = SpinGeometry::from_sites({{0, 0, 0}, {0, 0, 1}});
    const double p_d = 0.01;
    const double target = 0.9999;
    const double delta = std::acos(target);
    ClassicalState st;
    st.e = {Eigen::Vector3d(std::cos(delta), 0.0, -std::sin(delta)),
            Eigen::Vector3d(std::cos(delta), 0.0, std::sin(delta))};

    const double E = 1.0 + std::sin(delta) * std::sin(delta);
    const double expected = ts::period(E) / p_d;

    TimeGrid grid{0.5, 2800};
    const auto res = integrate(g, st, p_d, grid);
    std::vector<double> env(res.trace.size());
    for (std::size_t i = 0; i < env.size(); ++i)
        env[i] = std::hypot(res.trace.sx[i], res.trace.sy[i]);

    // minima of the slow modulation
    std::vector<double> minima;
    for (std::size_t i = 1; i + 1 < env.size(); ++i)
        if (env[i] < 0.5 && env[i] < env[i - 1] && env[i] <= env[i + 1])
            minima.push_back(res.trace.t[i]);
    REQUIRE(minima.size() >= 2);
    const double spacing = minima[1] - minima[0];
    CHECK(std::abs(spacing - expected) / expected < 0.05);
}
