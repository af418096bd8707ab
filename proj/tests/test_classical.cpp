#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "spindyn/classical.hpp"
#include "spindyn/errors.hpp"
#include "spindyn/geometry.hpp"
#include "spindyn/rng.hpp"

using namespace spindyn;

namespace {

std::vector<Eigen::Vector3d> random_spins(int n, Rng& rng) {
    std::vector<Eigen::Vector3d> e(n);
    for (auto& v : e) v = rng.unit_vector();
    return e;
}

int count_plus_x(const ClassicalState& st) {
    int n = 0;
    for (const auto& e : st.e)
        if (e.x() > 0) ++n;
    return n;
}

}  // namespace

TEST_CASE("linear initial distribution") {
    const auto g4 = SpinGeometry::cubic(4, 1, 1);
    const auto st4 = init_linear(g4, 0.5, 7);
    CHECK(count_plus_x(st4) == 3);
    CHECK(st4.mean().x() == doctest::Approx(0.5).epsilon(1e-15));
    for (const auto& e : st4.e) CHECK(std::abs(std::abs(e.x()) - 1.0) < 1e-15);

    const auto g125 = SpinGeometry::cubic(5, 5, 5);
    const auto st125 = init_linear(g125, 1.0, 7);
    CHECK(count_plus_x(st125) == 125);

    const auto g343 = SpinGeometry::cubic(7, 7, 7);
    const auto st343 = init_linear(g343, 0.5, 7);
    CHECK(count_plus_x(st343) == 257);
    CHECK(st343.mean().x() == doctest::Approx(171.0 / 343.0).epsilon(1e-15));

    // seeded shuffle: deterministic, seed-dependent
    const auto a = init_linear(g343, 0.5, 1), b = init_linear(g343, 0.5, 1),
               c = init_linear(g343, 0.5, 2);
    bool same_ab = true, same_ac = true;
    for (int i = 0; i < g343.size(); ++i) {
        same_ab = same_ab && a.e[i] == b.e[i];
        same_ac = same_ac && a.e[i] == c.e[i];
    }
    CHECK(same_ab);
    CHECK_FALSE(same_ac);

    CHECK_THROWS_AS(init_linear(g4, 1.5, 1), std::invalid_argument);
}

TEST_CASE("random initial distribution") {
    const auto g = SpinGeometry::cubic(7, 7, 7);
    const auto st = init_random(g, 0.5, 42);
    CHECK(std::abs(st.mean().x() - 0.5) <= 1e-3);
    for (const auto& e : st.e) CHECK(std::abs(e.norm() - 1.0) < 1e-14);

    // isotropic case: all components are O(1/sqrt(N)) small
    const auto iso = init_random(g, 0.0, 43);
    const auto m = iso.mean();
    const double bound = 3.0 / std::sqrt(static_cast<double>(g.size()));
    CHECK(std::abs(m.x()) < bound);
    CHECK(std::abs(m.y()) < bound);
    CHECK(std::abs(m.z()) < bound);

    // near-saturation polarization stays stable
    const auto hi = init_random(g, 0.9999, 44);
    CHECK(std::abs(hi.mean().x() - 0.9999) <= 1e-3);

    // |s| = 1 falls back to the linear initialization
    const auto sat = init_random(g, 1.0, 45);
    CHECK(count_plus_x(sat) == g.size());

    CHECK_THROWS_AS(init_random(g, -1.2, 1), std::invalid_argument);
}

TEST_CASE("dipolar field on axis pairs") {
    const auto g = SpinGeometry::from_sites({{0, 0, 0}, {0, 0, 1}});
    std::vector<Eigen::Vector3d> e = {Eigen::Vector3d::UnitZ(), Eigen::Vector3d::Zero()};
    std::vector<Eigen::Vector3d> h;
    // e_1 = z_hat: field at site 2 is +2 z_hat
    dipolar_fields(g, e, h);
    CHECK((h[1] - Eigen::Vector3d(0, 0, 2)).norm() < 1e-15);
    // e_1 = x_hat: field at site 2 is -x_hat
    e[0] = Eigen::Vector3d::UnitX();
    dipolar_fields(g, e, h);
    CHECK((h[1] + Eigen::Vector3d(1, 0, 0)).norm() < 1e-15);
}

TEST_CASE("rhs reduces to Larmor precession at p_d = 0") {
    Rng rng(5);
    const auto g = SpinGeometry::cubic(2, 2, 1);
    const PairCoefficients pc(g);
    const auto e = random_spins(g.size(), rng);
    std::vector<Eigen::Vector3d> h, de;
    classical_rhs(g, pc, Frame::lab, 0.0, e, h, de);
    for (int k = 0; k < g.size(); ++k) {
        CHECK(de[k].x() == doctest::Approx(e[k].y()).epsilon(1e-15));
        CHECK(de[k].y() == doctest::Approx(-e[k].x()).epsilon(1e-15));
        CHECK(de[k].z() == 0.0);
    }
}

TEST_CASE("single spin precesses exactly") {
    const auto g = SpinGeometry::from_sites({{0, 0, 0}});
    ClassicalState st;
    st.e = {Eigen::Vector3d::UnitX()};
    const TimeGrid grid{0.5, 4000};
    const auto res = integrate(g, st, 0.01, grid);
    double max_err = 0.0;
    for (std::size_t i = 0; i < res.trace.size(); ++i)
        max_err = std::max(max_err, std::abs(res.trace.sx[i] - std::cos(res.trace.t[i])));
    CHECK(max_err < 1e-6);
}

TEST_CASE("two z-axis spins match the published component equations") {
    // dx1/dt = y1 + p(2 y1 z2 + y2 z1) and cyclic partners
    const auto g = SpinGeometry::from_sites({{0, 0, 0}, {0, 0, 1}});
    const PairCoefficients pc(g);
    Rng rng(17);
    const double p = 0.01;
    for (int rep = 0; rep < 25; ++rep) {
        const auto e = random_spins(2, rng);
        std::vector<Eigen::Vector3d> h, de;
        classical_rhs(g, pc, Frame::lab, p, e, h, de);
        const double x1 = e[0].x(), y1 = e[0].y(), z1 = e[0].z();
        const double x2 = e[1].x(), y2 = e[1].y(), z2 = e[1].z();
        CHECK(de[0].x() == doctest::Approx(y1 + p * (2 * y1 * z2 + y2 * z1)).epsilon(1e-13));
        CHECK(de[0].y() == doctest::Approx(-x1 - p * (2 * x1 * z2 + x2 * z1)).epsilon(1e-13));
        CHECK(de[0].z() == doctest::Approx(p * (-x1 * y2 + y1 * x2)).epsilon(1e-13));
        CHECK(de[1].x() == doctest::Approx(y2 + p * (2 * y2 * z1 + y1 * z2)).epsilon(1e-13));
        CHECK(de[1].y() == doctest::Approx(-x2 - p * (2 * x2 * z1 + x1 * z2)).epsilon(1e-13));
        CHECK(de[1].z() == doctest::Approx(p * (-x2 * y1 + y2 * x1)).epsilon(1e-13));
    }
}

TEST_CASE("field form and coefficient form of the rhs agree") {
    Rng rng(23);
    for (int rep = 0; rep < 100; ++rep) {
        const int nx = 1 + static_cast<int>(rng.below(3));
        const int ny = 1 + static_cast<int>(rng.below(3));
        const int nz = 1 + static_cast<int>(rng.below(3));
        const auto g = SpinGeometry::cubic(nx, ny, nz);
        const PairCoefficients pc(g);
        const auto e = random_spins(g.size(), rng);
        const double p_d = rng.uniform(0.001, 0.1);
        std::vector<Eigen::Vector3d> h, de_field, de_coeff;
        classical_rhs(g, pc, Frame::lab, p_d, e, h, de_field);
        classical_rhs_coeff(pc, p_d, e, de_coeff);
        double scale = 1.0;
        for (int k = 0; k < g.size(); ++k) scale = std::max(scale, de_field[k].norm());
        for (int k = 0; k < g.size(); ++k)
            CHECK((de_field[k] - de_coeff[k]).cwiseAbs().maxCoeff() < 1e-12 * scale);
    }
}

TEST_CASE("rotating-frame pair matches the slow component equations") {
    // dX1/dt = p (2 Y1 z2 + Y2 z1), dY1/dt = -p (2 X1 z2 + X2 z1)
    const auto g = SpinGeometry::from_sites({{0, 0, 0}, {0, 0, 1}});
    const PairCoefficients pc(g);
    Rng rng(29);
    const double p = 0.02;
    const auto e = random_spins(2, rng);
    std::vector<Eigen::Vector3d> h, de;
    classical_rhs(g, pc, Frame::rotating_secular, p, e, h, de);
    const double X1 = e[0].x(), Y1 = e[0].y(), z1 = e[0].z();
    const double X2 = e[1].x(), Y2 = e[1].y(), z2 = e[1].z();
    CHECK(de[0].x() == doctest::Approx(p * (2 * Y1 * z2 + Y2 * z1)).epsilon(1e-13));
    CHECK(de[0].y() == doctest::Approx(-p * (2 * X1 * z2 + X2 * z1)).epsilon(1e-13));
    CHECK(de[0].z() == doctest::Approx(p * (-X1 * Y2 + Y1 * X2)).epsilon(1e-13));
    CHECK(de[1].x() == doctest::Approx(p * (2 * Y2 * z1 + Y1 * z2)).epsilon(1e-13));

    // p_d = 0 freezes everything in the rotating frame
    std::vector<Eigen::Vector3d> de0;
    classical_rhs(g, pc, Frame::rotating_secular, 0.0, e, h, de0);
    for (const auto& d : de0) CHECK(d.norm() == 0.0);
}

TEST_CASE("unit length conservation over long runs") {
    const auto g = SpinGeometry::cubic(3, 3, 3);
    auto st = init_random(g, 0.5, 11);
    const TimeGrid grid{10.0, 1001};  // t up to 1e4
    const auto res = integrate(g, std::move(st), 0.01, grid);
    CHECK(res.stats.max_constraint_dev <= 1e-8);
    for (const auto& e : res.final_state.e) CHECK(std::abs(e.norm() - 1.0) < 1e-12);
    CHECK(res.stats.accepted > 0);
}

TEST_CASE("two-spin integrals of motion drift below 1e-6 over t = 1e4") {
    const auto g = SpinGeometry::from_sites({{0, 0, 0}, {0, 0, 1}});
    ClassicalState st;
    st.e = {Eigen::Vector3d(0.8, 0.1, std::sqrt(1 - 0.64 - 0.01)),
            Eigen::Vector3d(0.3, -0.5, -std::sqrt(1 - 0.09 - 0.25))};
    const TimeGrid grid{2.0, 5001};  // rotating frame, t up to 1e4
    const auto res = integrate(g, st, 0.01, grid, Frame::rotating_secular);

    auto m_of = [](const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
        return a.z() + b.z();
    };
    auto e_of = [](const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
        return a.x() * b.x() + a.y() * b.y() - 2.0 * a.z() * b.z();
    };
    const double m0 = m_of(st.e[0], st.e[1]);
    const double e0 = e_of(st.e[0], st.e[1]);
    const double mf = m_of(res.final_state.e[0], res.final_state.e[1]);
    const double ef = e_of(res.final_state.e[0], res.final_state.e[1]);
    CHECK(std::abs(mf - m0) < 1e-6);
    CHECK(std::abs(ef - e0) < 1e-6);
}

TEST_CASE("lab secular envelope equals rotating-frame polarization") {
    const auto g = SpinGeometry::cubic(2, 2, 2);
    const double p_d = 0.001;
    auto st = init_random(g, 0.6, 3);
    const TimeGrid grid{0.5, 2000};
    const auto lab = integrate(g, st, p_d, grid, Frame::lab_secular);
    const auto rot = integrate(g, st, p_d, grid, Frame::rotating_secular);
    double worst = 0.0;
    for (std::size_t i = 0; i < lab.trace.size(); ++i) {
        const double env_lab = std::hypot(lab.trace.sx[i], lab.trace.sy[i]);
        const double env_rot = std::hypot(rot.trace.sx[i], rot.trace.sy[i]);
        worst = std::max(worst, std::abs(env_lab - env_rot));
    }
    CHECK(worst < 1e-3);
}

TEST_CASE("deterministic traces for identical seed and config") {
    const auto g = SpinGeometry::cubic(3, 3, 1);
    const TimeGrid grid{0.5, 200};
    const auto r1 = integrate(g, init_random(g, 0.5, 99), 0.01, grid);
    const auto r2 = integrate(g, init_random(g, 0.5, 99), 0.01, grid);
    for (std::size_t i = 0; i < r1.trace.size(); ++i) {
        CHECK(r1.trace.sx[i] == r2.trace.sx[i]);
        CHECK(r1.trace.sy[i] == r2.trace.sy[i]);
        CHECK(r1.trace.sz[i] == r2.trace.sz[i]);
    }
}

TEST_CASE("step underflow raises a numerical failure") {
    const auto g = SpinGeometry::from_sites({{0, 0, 0}, {0, 0, 1}});
    ClassicalState st;
    st.e = {Eigen::Vector3d::UnitX(), -Eigen::Vector3d::UnitX()};
    IntegrateControls ctl;
    ctl.tol = 1e-8;
    ctl.h_min = 0.5;  // halving cascade drops below h_min immediately
    ctl.h_init = 0.6;
    const TimeGrid grid{0.5, 10};
    CHECK_THROWS_AS(integrate(g, st, 0.01, grid, Frame::lab, ctl), numerical_error);
}

TEST_CASE("perturb moves every spin by eps and keeps unit norms") {
    const auto g = SpinGeometry::cubic(3, 3, 3);
    const auto base = init_linear(g, 1.0, 1);
    const auto pert = perturb(base, 1e-4, 5);
    for (int k = 0; k < g.size(); ++k) {
        const double d = (pert.e[k] - base.e[k]).norm();
        CHECK(d > 1e-5);
        CHECK(d < 2e-4);
        CHECK(std::abs(pert.e[k].norm() - 1.0) < 1e-14);
    }
}
