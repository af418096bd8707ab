#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "spindyn/classical.hpp"
#include "spindyn/geometry.hpp"
#include "spindyn/rng.hpp"

using namespace spindyn;

namespace {

// independent evaluation of the tensor entries straight from the formula
Eigen::Matrix3d brute_tensor(const Eigen::Vector3d& r) {
    Eigen::Matrix3d d;
    const double rn = r.norm();
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            d(a, b) = (a == b ? 1.0 : 0.0) / std::pow(rn, 3) -
                      3.0 * r(a) * r(b) / std::pow(rn, 5);
    return d;
}

std::vector<Eigen::Vector3d> random_spins(int n, Rng& rng) {
    std::vector<Eigen::Vector3d> e(n);
    for (auto& v : e) v = rng.unit_vector();
    return e;
}

}  // namespace

TEST_CASE("cubic builder") {
    const auto g = SpinGeometry::cubic(1, 1, 2);
    REQUIRE(g.size() == 2);
    CHECK(g.sites()[0] == Eigen::Vector3d(0, 0, 0));
    CHECK(g.sites()[1] == Eigen::Vector3d(0, 0, 1));

    const auto g2 = SpinGeometry::cubic(2, 1, 1);
    CHECK(g2.sites()[1] == Eigen::Vector3d(1, 0, 0));

    // row-major ordering, x fastest
    const auto g3 = SpinGeometry::cubic(3, 2, 2);
    CHECK(g3.sites()[1] == Eigen::Vector3d(1, 0, 0));
    CHECK(g3.sites()[3] == Eigen::Vector3d(0, 1, 0));
    CHECK(g3.sites()[6] == Eigen::Vector3d(0, 0, 1));

    CHECK_THROWS_AS(SpinGeometry::cubic(0, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(SpinGeometry::cubic(2, -1, 2), std::invalid_argument);
}

TEST_CASE("cubic 5x5x5 enumeration") {
    const auto g = SpinGeometry::cubic(5, 5, 5);
    REQUIRE(g.size() == 125);
    double maxd = 0.0;
    for (int k = 0; k < g.size(); ++k)
        for (int l = 0; l < g.size(); ++l)
            if (l != k) maxd = std::max(maxd, g.pair_distance(k, l));
    CHECK(maxd == doctest::Approx(std::sqrt(48.0)).epsilon(1e-14));
}

TEST_CASE("explicit site list") {
    const std::vector<std::array<int, 3>> fig3a = {
        {0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {1, 0, 0}, {0, 1, 1}};
    const auto g = SpinGeometry::from_sites(fig3a);
    REQUIRE(g.size() == 5);
    CHECK(g.pair_vector(0, 1) == Eigen::Vector3d(0, 0, 1));
    CHECK(g.pair_vector(1, 0) == Eigen::Vector3d(0, 0, -1));

    CHECK(SpinGeometry::from_sites({{3, 4, 5}}).size() == 1);
    CHECK_THROWS_AS(SpinGeometry::from_sites({{0, 0, 0}, {0, 0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(SpinGeometry::from_sites({}), std::invalid_argument);
}

TEST_CASE("dipolar tensor entries") {
    const auto g = SpinGeometry::from_sites({{0, 0, 0}, {0, 0, 1}});
    const DipolarTensors dt(g);
    const Eigen::Matrix3d expected = Eigen::Vector3d(1, 1, -2).asDiagonal();
    CHECK((dt.d(0, 1) - expected).cwiseAbs().maxCoeff() < 1e-15);

    const auto gx = SpinGeometry::from_sites({{0, 0, 0}, {1, 0, 0}});
    const Eigen::Matrix3d expected_x = Eigen::Vector3d(-2, 1, 1).asDiagonal();
    CHECK((DipolarTensors(gx).d(0, 1) - expected_x).cwiseAbs().maxCoeff() < 1e-15);

    const auto gd = SpinGeometry::from_sites({{0, 0, 0}, {1, 1, 0}});
    const Eigen::Matrix3d b = brute_tensor({1, 1, 0});
    CHECK((DipolarTensors(gd).d(0, 1) - b).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("tensor symmetry and trace") {
    const auto g = SpinGeometry::cubic(3, 2, 2);
    const DipolarTensors dt(g);
    for (int k = 0; k < g.size(); ++k) {
        for (int l = 0; l < g.size(); ++l) {
            if (l == k) continue;
            const auto& d = dt.d(k, l);
            CHECK((d - d.transpose()).cwiseAbs().maxCoeff() == 0.0);
            CHECK((d - dt.d(l, k)).cwiseAbs().maxCoeff() == 0.0);
            CHECK(std::abs(d.trace()) < 1e-14);
        }
    }
}

TEST_CASE("pair coefficients") {
    const auto gz = SpinGeometry::from_sites({{0, 0, 0}, {0, 0, 1}});
    const PairCoefficients pz(gz);
    CHECK(pz.a(0, 1) == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(pz.bx(0, 1) == 0.0);
    CHECK(pz.by(0, 1) == 0.0);
    CHECK(pz.cx(0, 1) == 0.0);
    CHECK(pz.cy(0, 1) == 0.0);

    const auto gx = SpinGeometry::from_sites({{0, 0, 0}, {1, 0, 0}});
    const PairCoefficients px(gx);
    CHECK(px.a(0, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(px.bx(0, 1) == doctest::Approx(-0.75).epsilon(1e-15));
    CHECK(px.by(0, 1) == 0.0);

    const auto gd = SpinGeometry::from_sites({{0, 0, 0}, {1, 1, 0}});
    const PairCoefficients pd(gd);
    CHECK(pd.a(0, 1) == doctest::Approx(1.0 / (2.0 * std::sqrt(2.0))).epsilon(1e-14));
    CHECK(pd.bx(0, 1) == doctest::Approx(0.0));
    CHECK(pd.by(0, 1) == doctest::Approx(3.0 / (8.0 * std::sqrt(2.0))).epsilon(1e-14));
    CHECK(pd.cx(0, 1) == 0.0);
    CHECK(pd.cy(0, 1) == 0.0);
}

TEST_CASE("coefficients symmetric under i<->j bitwise") {
    const auto g = SpinGeometry::cubic(3, 3, 2);
    const PairCoefficients pc(g);
    for (int i = 0; i < g.size(); ++i) {
        for (int j = 0; j < g.size(); ++j) {
            if (i == j) continue;
            CHECK(pc.a(i, j) == pc.a(j, i));
            CHECK(pc.bx(i, j) == pc.bx(j, i));
            CHECK(pc.by(i, j) == pc.by(j, i));
            CHECK(pc.cx(i, j) == pc.cx(j, i));
            CHECK(pc.cy(i, j) == pc.cy(j, i));
        }
    }
}

TEST_CASE("tensor field equals coefficient field on random states") {
    Rng rng(31415);
    const auto g = SpinGeometry::cubic(3, 3, 3);
    const DipolarTensors dt(g);
    for (int rep = 0; rep < 20; ++rep) {
        const auto e = random_spins(g.size(), rng);
        std::vector<Eigen::Vector3d> h;
        dipolar_fields(g, e, h);
        for (int k = 0; k < g.size(); ++k) {
            Eigen::Vector3d href = Eigen::Vector3d::Zero();
            for (int l = 0; l < g.size(); ++l)
                if (l != k) href -= dt.d(k, l) * e[l];
            CHECK((h[k] - href).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}
