#include "spindyn/quantum.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <cblas.h>
#include <lapacke.h>

#include "spindyn/errors.hpp"

namespace spindyn {

namespace {

using cd = std::complex<double>;

int mask_of(int n, int site) { return 1 << (n - 1 - site); }

// matrix element <s^flip(or s)|S^a|s> on one site: returns amplitude and
// whether the site bit flips
struct OpRule {
    bool flip;
    // amp[bit of source]
    cd amp[2];
};

OpRule rule(char axis) {
    switch (axis) {
        case 'x': return {true, {cd(0.5, 0.0), cd(0.5, 0.0)}};
        case 'y': return {true, {cd(0.0, 0.5), cd(0.0, -0.5)}};  // up->down: +i/2
        default: return {false, {cd(0.5, 0.0), cd(-0.5, 0.0)}};
    }
}

void check_spin_count(int n) {
    if (n < 1) throw std::invalid_argument("need at least one spin");
    if (n > kMaxQuantumSpins)
        throw std::length_error("quantum engine caps at " + std::to_string(kMaxQuantumSpins) +
                                " spins (2^13 states); got " + std::to_string(n));
}

// out = (sum_i S_i^axis) in, both length 2^n
void apply_axis(char axis, int n, const cd* in, cd* out) {
    const int R = 1 << n;
    const OpRule r = rule(axis);
    for (int s = 0; s < R; ++s) out[s] = cd(0.0, 0.0);
    for (int i = 0; i < n; ++i) {
        const int m = mask_of(n, i);
        for (int s = 0; s < R; ++s) {
            const int bit = (s & m) ? 1 : 0;
            const int t = r.flip ? (s ^ m) : s;
            out[t] += r.amp[bit] * in[s];
        }
    }
}

}  // namespace

Eigen::MatrixXcd build_hamiltonian(const SpinGeometry& g, double p_d, bool secular_only) {
    const int n = g.size();
    check_spin_count(n);
    if (p_d < 0.0) throw std::invalid_argument("p_d must be non-negative");
    const int R = 1 << n;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(R, R);

    // Zeeman: -S^z
    for (int s = 0; s < R; ++s) {
        double sz = 0.0;
        for (int i = 0; i < n; ++i) sz += (s & mask_of(n, i)) ? -0.5 : 0.5;
        h(s, s) = -sz;
    }

    const char axes[3] = {'x', 'y', 'z'};
    for (int j = 0; j < n; ++j) {
        for (int k = j + 1; k < n; ++k) {
            const Eigen::Vector3d r = g.pair_vector(j, k);
            const double w3 = g.inv_r3(j, k);
            const double w5 = g.three_over_r5(j, k);
            Eigen::Matrix3d D = w3 * Eigen::Matrix3d::Identity() - w5 * (r * r.transpose());
            if (secular_only) {
                // a [S^z S^z - (1/2)(S^x S^x + S^y S^y)]
                const double a = D(2, 2);
                D.setZero();
                D(2, 2) = a;
                D(0, 0) = D(1, 1) = -0.5 * a;
            }
            const int mj = mask_of(n, j), mk = mask_of(n, k);
            for (int ai = 0; ai < 3; ++ai) {
                for (int bi = 0; bi < 3; ++bi) {
                    const double c = p_d * D(ai, bi);
                    if (c == 0.0) continue;
                    const OpRule ra = rule(axes[ai]);
                    const OpRule rb = rule(axes[bi]);
                    for (int s = 0; s < R; ++s) {
                        const int bj = (s & mj) ? 1 : 0;
                        const int bk = (s & mk) ? 1 : 0;
                        int t = s;
                        if (ra.flip) t ^= mj;
                        if (rb.flip) t ^= mk;
                        h(t, s) += c * ra.amp[bj] * rb.amp[bk];
                    }
                }
            }
        }
    }
    return h;
}

Eigen::VectorXcd initial_state_x(int n_spins) {
    check_spin_count(n_spins);
    const int R = 1 << n_spins;
    return Eigen::VectorXcd::Constant(R, cd(1.0 / std::sqrt(static_cast<double>(R)), 0.0));
}

Eigen::VectorXcd apply_sx(int n, const Eigen::VectorXcd& psi) {
    Eigen::VectorXcd out(psi.size());
    apply_axis('x', n, psi.data(), out.data());
    return out;
}

Eigen::VectorXcd apply_sy(int n, const Eigen::VectorXcd& psi) {
    Eigen::VectorXcd out(psi.size());
    apply_axis('y', n, psi.data(), out.data());
    return out;
}

Eigen::VectorXcd apply_sz(int n, const Eigen::VectorXcd& psi) {
    Eigen::VectorXcd out(psi.size());
    apply_axis('z', n, psi.data(), out.data());
    return out;
}

Eigen::VectorXcd EigenSystem::project(const Eigen::VectorXcd& psi) const {
    if (psi.size() != vectors_.rows())
        throw std::invalid_argument("state dimension does not match eigensystem");
    return vectors_.adjoint() * psi;
}

EigenSystem diagonalize(const Eigen::MatrixXcd& h) {
    const auto R = h.rows();
    if (R != h.cols() || R < 1) throw std::invalid_argument("matrix must be square");
    const double defect = (h - h.adjoint()).cwiseAbs().maxCoeff();
    if (defect > 1e-12)
        throw std::invalid_argument("matrix is not Hermitian (defect " + std::to_string(defect) +
                                    ")");

    EigenSystem es;
    es.vectors_ = h;
    es.energies_.resize(R);
    const lapack_int info = LAPACKE_zheevd(
        LAPACK_COL_MAJOR, 'V', 'L', static_cast<lapack_int>(R), es.vectors_.data(),
        static_cast<lapack_int>(R), es.energies_.data());
    if (info != 0)
        throw numerical_error("zheevd failed with info=" + std::to_string(info));

    // spot-check reconstruction residual on a spread of eigenpairs
    const int probes = static_cast<int>(std::min<Eigen::Index>(8, R));
    for (int p = 0; p < probes; ++p) {
        const Eigen::Index i = (R - 1) * p / std::max(1, probes - 1);
        const double resid = (h * es.vectors_.col(i) - es.energies_(i) * es.vectors_.col(i)).norm();
        if (resid > 1e-9)
            throw numerical_error("eigenpair residual " + std::to_string(resid) +
                                  " exceeds 1e-9 at index " + std::to_string(i));
    }
    return es;
}

QuantumFidResult evolve_expectations(const EigenSystem& es, const Eigen::VectorXcd& coeffs,
                                     int n_spins, const TimeGrid& grid) {
    const Eigen::Index R = es.dim();
    if ((Eigen::Index{1} << n_spins) != R)
        throw std::invalid_argument("spin count does not match eigensystem dimension");
    if (coeffs.size() != R) throw std::invalid_argument("coefficient vector has wrong length");
    if (grid.samples < 1) throw std::invalid_argument("output grid is empty");

    const int M = grid.samples;
    QuantumFidResult res;
    res.trace.source = "quantum";
    res.trace.t.resize(M);
    for (int m = 0; m < M; ++m) res.trace.t[m] = grid.t(m);
    res.trace.sx.assign(M, 0.0);
    res.trace.sy.assign(M, 0.0);
    res.trace.sz.assign(M, 0.0);

    const cd one(1.0, 0.0), zero(0.0, 0.0);
    const Eigen::MatrixXcd& V = es.vectors();
    const Eigen::VectorXd& E = es.energies();
    const double inv_norm = 1.0 / (0.5 * n_spins);
    const char axes[3] = {'x', 'y', 'z'};
    std::vector<double>* out[3] = {&res.trace.sx, &res.trace.sy, &res.trace.sz};

    Eigen::MatrixXcd W(R, R);
    for (int a = 0; a < 3; ++a) {
        {
            // B = S^a V, column by column (sparse apply)
            Eigen::MatrixXcd B(R, R);
#pragma omp parallel for schedule(static)
            for (Eigen::Index c = 0; c < R; ++c)
                apply_axis(axes[a], n_spins, V.col(c).data(), B.col(c).data());
            // W = V^dagger B, then weight by the projection coefficients:
            // W_ij = conj(C_i) <v_i|S^a|v_j> C_j
            cblas_zgemm(CblasColMajor, CblasConjTrans, CblasNoTrans, static_cast<int>(R),
                        static_cast<int>(R), static_cast<int>(R), &one, V.data(),
                        static_cast<int>(R), B.data(), static_cast<int>(R), &zero, W.data(),
                        static_cast<int>(R));
        }
#pragma omp parallel for schedule(static)
        for (Eigen::Index j = 0; j < R; ++j)
            for (Eigen::Index i = 0; i < R; ++i) W(i, j) *= std::conj(coeffs(i)) * coeffs(j);

        // S^a(t_m) = d(t_m)^dagger W d(t_m), d_i = exp(-i E_i t)
        const int kBlock = 256;
        Eigen::MatrixXcd D(R, kBlock), G(R, kBlock);
        for (int lo = 0; lo < M; lo += kBlock) {
            const int nb = std::min(kBlock, M - lo);
#pragma omp parallel for schedule(static)
            for (int m = 0; m < nb; ++m) {
                const double t = grid.t(lo + m);
                for (Eigen::Index i = 0; i < R; ++i) {
                    const double ph = -E(i) * t;
                    D(i, m) = cd(std::cos(ph), std::sin(ph));
                }
            }
            cblas_zgemm(CblasColMajor, CblasNoTrans, CblasNoTrans, static_cast<int>(R), nb,
                        static_cast<int>(R), &one, W.data(), static_cast<int>(R), D.data(),
                        static_cast<int>(R), &zero, G.data(), static_cast<int>(R));
            for (int m = 0; m < nb; ++m) {
                const cd val = D.col(m).dot(G.col(m));  // conjugating dot
                res.max_imag = std::max(res.max_imag, std::abs(val.imag()));
                (*out[a])[lo + m] = val.real() * inv_norm;
            }
        }
    }

    if (res.max_imag > 1e-9)
        throw numerical_error("imaginary residue " + std::to_string(res.max_imag) +
                              " exceeds 1e-9 in expectation series");
    return res;
}

QuantumFidResult quantum_fid(const SpinGeometry& g, double p_d, const TimeGrid& grid,
                             bool secular_only) {
    const EigenSystem es = diagonalize(build_hamiltonian(g, p_d, secular_only));
    const Eigen::VectorXcd c = es.project(initial_state_x(g.size()));
    return evolve_expectations(es, c, g.size(), grid);
}

}  // namespace spindyn
