#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

namespace spindyn {

// Spin sites on lattice nodes, positions in units of the lattice step, with
// dense precomputed pair vectors and inverse powers of the pair distances.
// Immutable after construction; shared read-only by both engines.
class SpinGeometry {
public:
    // nx*ny*nz sites at integer coordinates, row-major (x fastest).
    static SpinGeometry cubic(int nx, int ny, int nz);

    // Sites in the given order; coordinates must be pairwise distinct.
    static SpinGeometry from_sites(const std::vector<std::array<int, 3>>& coords);

    int size() const { return n_; }
    const std::vector<Eigen::Vector3d>& sites() const { return sites_; }

    // r~_kl = r_l - r_k
    const Eigen::Vector3d& pair_vector(int k, int l) const { return rvec_[idx(k, l)]; }
    double pair_distance(int k, int l) const { return dist_[idx(k, l)]; }
    double inv_r3(int k, int l) const { return w3_[idx(k, l)]; }
    // 3 / r^5
    double three_over_r5(int k, int l) const { return w5_[idx(k, l)]; }

    // row bases for the O(N^2) field loops
    const Eigen::Vector3d* rvec_row(int k) const { return rvec_.data() + static_cast<std::size_t>(k) * n_; }
    const double* w3_row(int k) const { return w3_.data() + static_cast<std::size_t>(k) * n_; }
    const double* w5_row(int k) const { return w5_.data() + static_cast<std::size_t>(k) * n_; }

private:
    explicit SpinGeometry(std::vector<Eigen::Vector3d> sites);
    std::size_t idx(int k, int l) const { return static_cast<std::size_t>(k) * n_ + l; }

    int n_ = 0;
    std::vector<Eigen::Vector3d> sites_;
    std::vector<Eigen::Vector3d> rvec_;  // n*n, diagonal zero
    std::vector<double> dist_;           // n*n, diagonal zero
    std::vector<double> w3_;             // 1/r^3, diagonal zero
    std::vector<double> w5_;             // 3/r^5, diagonal zero
};

// Per-pair 3x3 coupling matrices D_kl = I/r^3 - 3 r r^T / r^5.
// Symmetric in the two Cartesian indices, symmetric under pair exchange,
// traceless.
class DipolarTensors {
public:
    explicit DipolarTensors(const SpinGeometry& g);
    const Eigen::Matrix3d& d(int k, int l) const { return d_[static_cast<std::size_t>(k) * n_ + l]; }
    int size() const { return n_; }

private:
    int n_;
    std::vector<Eigen::Matrix3d> d_;  // diagonal entries zero matrices
};

// Pair coefficients of the expanded classical equations and of the
// secular/non-secular Hamiltonian split:
//   a_ij  = (1 - 3 z^2/r^2) / r^3
//   bx_ij = -3 (x^2 - y^2) / (4 r^5)    by_ij = 3 x y / (2 r^5)
//   cx_ij = -3 x z / (2 r^5)            cy_ij = 3 y z / (2 r^5)
// with (x, y, z) = r_i - r_j in lattice-step units. All symmetric in i<->j.
class PairCoefficients {
public:
    explicit PairCoefficients(const SpinGeometry& g);
    double a(int i, int j) const { return a_[idx(i, j)]; }
    double bx(int i, int j) const { return bx_[idx(i, j)]; }
    double by(int i, int j) const { return by_[idx(i, j)]; }
    double cx(int i, int j) const { return cx_[idx(i, j)]; }
    double cy(int i, int j) const { return cy_[idx(i, j)]; }
    int size() const { return n_; }

    const double* a_row(int i) const { return a_.data() + static_cast<std::size_t>(i) * n_; }

private:
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * n_ + j; }
    int n_;
    std::vector<double> a_, bx_, by_, cx_, cy_;  // n*n, diagonal zero
};

}  // namespace spindyn
