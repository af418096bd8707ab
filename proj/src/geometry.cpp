#include "spindyn/geometry.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace spindyn {

SpinGeometry::SpinGeometry(std::vector<Eigen::Vector3d> sites)
    : n_(static_cast<int>(sites.size())), sites_(std::move(sites)) {
    const std::size_t nn = static_cast<std::size_t>(n_) * n_;
    rvec_.assign(nn, Eigen::Vector3d::Zero());
    dist_.assign(nn, 0.0);
    w3_.assign(nn, 0.0);
    w5_.assign(nn, 0.0);
    for (int k = 0; k < n_; ++k) {
        for (int l = 0; l < n_; ++l) {
            if (l == k) continue;
            const Eigen::Vector3d r = sites_[l] - sites_[k];
            const double d = r.norm();
            if (d <= 0.0)
                throw std::invalid_argument("coincident spin sites " + std::to_string(k) +
                                            " and " + std::to_string(l));
            const std::size_t i = idx(k, l);
            rvec_[i] = r;
            dist_[i] = d;
            w3_[i] = 1.0 / (d * d * d);
            w5_[i] = 3.0 * w3_[i] / (d * d);
        }
    }
}

SpinGeometry SpinGeometry::cubic(int nx, int ny, int nz) {
    if (nx < 1 || ny < 1 || nz < 1)
        throw std::invalid_argument("lattice dimensions must be >= 1");
    std::vector<Eigen::Vector3d> sites;
    sites.reserve(static_cast<std::size_t>(nx) * ny * nz);
    for (int z = 0; z < nz; ++z)
        for (int y = 0; y < ny; ++y)
            for (int x = 0; x < nx; ++x)
                sites.emplace_back(x, y, z);
    return SpinGeometry(std::move(sites));
}

SpinGeometry SpinGeometry::from_sites(const std::vector<std::array<int, 3>>& coords) {
    if (coords.empty())
        throw std::invalid_argument("site list is empty");
    std::set<std::array<int, 3>> seen;
    std::vector<Eigen::Vector3d> sites;
    sites.reserve(coords.size());
    for (const auto& c : coords) {
        if (!seen.insert(c).second)
            throw std::invalid_argument("duplicate site [" + std::to_string(c[0]) + "," +
                                        std::to_string(c[1]) + "," + std::to_string(c[2]) + "]");
        sites.emplace_back(c[0], c[1], c[2]);
    }
    return SpinGeometry(std::move(sites));
}

DipolarTensors::DipolarTensors(const SpinGeometry& g) : n_(g.size()) {
    d_.assign(static_cast<std::size_t>(n_) * n_, Eigen::Matrix3d::Zero());
    for (int k = 0; k < n_; ++k) {
        for (int l = 0; l < n_; ++l) {
            if (l == k) continue;
            const Eigen::Vector3d& r = g.pair_vector(k, l);
            const double w3 = g.inv_r3(k, l);
            const double w5 = g.three_over_r5(k, l);
            d_[static_cast<std::size_t>(k) * n_ + l] =
                w3 * Eigen::Matrix3d::Identity() - w5 * (r * r.transpose());
        }
    }
}

PairCoefficients::PairCoefficients(const SpinGeometry& g) : n_(g.size()) {
    const std::size_t nn = static_cast<std::size_t>(n_) * n_;
    a_.assign(nn, 0.0);
    bx_.assign(nn, 0.0);
    by_.assign(nn, 0.0);
    cx_.assign(nn, 0.0);
    cy_.assign(nn, 0.0);
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            if (j == i) continue;
            // r_ij = r_i - r_j; every formula is even under i<->j, so the
            // stored arrays are exactly symmetric.
            const Eigen::Vector3d r = -g.pair_vector(i, j);
            const double x = r.x(), y = r.y(), z = r.z();
            const double r2 = r.squaredNorm();
            const double w3 = g.inv_r3(i, j);
            const double w5 = w3 / r2;
            const std::size_t q = idx(i, j);
            a_[q] = w3 * (1.0 - 3.0 * z * z / r2);
            bx_[q] = -0.75 * (x * x - y * y) * w5;
            by_[q] = 1.5 * x * y * w5;
            cx_[q] = -1.5 * x * z * w5;
            cy_[q] = 1.5 * y * z * w5;
        }
    }
}

}  // namespace spindyn
