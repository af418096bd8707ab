#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "spindyn/geometry.hpp"
#include "spindyn/trace.hpp"

namespace spindyn {

// Largest spin count accepted by the quantum engine (2^13 states).
inline constexpr int kMaxQuantumSpins = 13;

// Dimensionless N-spin-1/2 Hamiltonian
//   H = -S^z + p_d * sum_{j<k} sum_ab D_jk^ab S_j^a S_k^b,
//   D_jk = I/r^3 - 3 r r^T / r^5   (distances in lattice steps).
// Basis: index s in [0, 2^N), site i lives in bit (N-1-i), bit 0 = up (+1/2),
// i.e. the plain Kronecker-product ordering with site 0 leftmost.
// secular_only keeps S_j^z S_k^z and the flip-flop part with the a_jk
// coefficients (the part commuting with total S^z).
Eigen::MatrixXcd build_hamiltonian(const SpinGeometry& g, double p_d, bool secular_only = false);

// Tensor product of per-spin (1,1)/sqrt(2): the S^x eigenstate with
// eigenvalue N/2 (all spins along +x).
Eigen::VectorXcd initial_state_x(int n_spins);

// Apply sum_i S_i^{x|y|z} to a state vector (sparse, no matrix built).
Eigen::VectorXcd apply_sx(int n_spins, const Eigen::VectorXcd& psi);
Eigen::VectorXcd apply_sy(int n_spins, const Eigen::VectorXcd& psi);
Eigen::VectorXcd apply_sz(int n_spins, const Eigen::VectorXcd& psi);

// Full spectrum and orthonormal eigenbasis of a Hermitian matrix,
// energies ascending.
class EigenSystem {
public:
    const Eigen::VectorXd& energies() const { return energies_; }
    const Eigen::MatrixXcd& vectors() const { return vectors_; }
    Eigen::Index dim() const { return energies_.size(); }

    // projection coefficients C_i = <v_i, psi>
    Eigen::VectorXcd project(const Eigen::VectorXcd& psi) const;

    friend EigenSystem diagonalize(const Eigen::MatrixXcd& h);

private:
    Eigen::VectorXd energies_;
    Eigen::MatrixXcd vectors_;
};

// LAPACK zheevd behind the scenes; rejects inputs whose Hermiticity defect
// exceeds 1e-12.
EigenSystem diagonalize(const Eigen::MatrixXcd& h);

struct QuantumFidResult {
    FidTrace trace;      // S^{x,y,z}(t) divided by N/2, so S^x(0) = 1
    double max_imag = 0.0;  // largest imaginary residue seen (diagnostic)
};

// S^a(t) = sum_ij C_i* C_j exp(i(E_i-E_j)t) <v_i|S^a|v_j>, evaluated in the
// eigenbasis with precomputed observable matrix elements. Throws if the
// imaginary residue of any expectation exceeds 1e-9.
QuantumFidResult evolve_expectations(const EigenSystem& es, const Eigen::VectorXcd& coeffs,
                                     int n_spins, const TimeGrid& grid);

// Convenience pipeline: build, diagonalize, project the x-aligned state,
// evolve over the grid.
QuantumFidResult quantum_fid(const SpinGeometry& g, double p_d, const TimeGrid& grid,
                             bool secular_only = false);

}  // namespace spindyn
