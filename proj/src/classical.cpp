#include "spindyn/classical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "spindyn/errors.hpp"
#include "spindyn/rng.hpp"

namespace spindyn {

namespace {

// Langevin function coth(k) - 1/k, series near zero.
double langevin(double k) {
    if (std::abs(k) < 1e-4) return k / 3.0 - k * k * k / 45.0;
    return 1.0 / std::tanh(k) - 1.0 / k;
}

// Solve Langevin(kappa) = s for s in (-1, 1) by bisection.
double langevin_inverse(double s) {
    const double mag = std::abs(s);
    if (mag < 1e-15) return 0.0;
    double lo = 0.0, hi = 1.0;
    while (langevin(hi) < mag) {
        hi *= 2.0;
        if (hi > 1e15) break;
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (langevin(mid) < mag ? lo : hi) = mid;
    }
    return s > 0 ? 0.5 * (lo + hi) : -0.5 * (lo + hi);
}

// x-projection drawn from density ~ exp(kappa u) on [-1, 1]; stable for
// kappa up to ~1e9 (exp(-2k) underflows harmlessly).
double tilted_projection(double kappa, Rng& rng) {
    const double U = rng.uniform();
    if (kappa == 0.0) return 2.0 * U - 1.0;
    const double k = std::abs(kappa);
    double u = 1.0 + std::log1p(-(1.0 - std::exp(-2.0 * k)) * (1.0 - U)) / k;
    u = std::clamp(u, -1.0, 1.0);
    return kappa > 0 ? u : -u;
}

void fields_dipolar(const SpinGeometry& g, const Eigen::Vector3d* e, Eigen::Vector3d* h, int n) {
#pragma omp parallel for schedule(static) if (n >= 128)
    for (int k = 0; k < n; ++k) {
        const Eigen::Vector3d* rv = g.rvec_row(k);
        const double* w3 = g.w3_row(k);
        const double* w5 = g.w5_row(k);
        double hx = 0.0, hy = 0.0, hz = 0.0;
        for (int l = 0; l < n; ++l) {
            // diagonal entries are exact zeros, so l == k contributes nothing
            const double ex = e[l].x(), ey = e[l].y(), ez = e[l].z();
            const double rx = rv[l].x(), ry = rv[l].y(), rz = rv[l].z();
            const double f5 = w5[l] * (ex * rx + ey * ry + ez * rz);
            hx += f5 * rx - w3[l] * ex;
            hy += f5 * ry - w3[l] * ey;
            hz += f5 * rz - w3[l] * ez;
        }
        h[k] = {hx, hy, hz};
    }
}

void fields_secular(const PairCoefficients& pc, const Eigen::Vector3d* e, Eigen::Vector3d* h,
                    int n) {
#pragma omp parallel for schedule(static) if (n >= 128)
    for (int k = 0; k < n; ++k) {
        const double* a = pc.a_row(k);
        double hx = 0.0, hy = 0.0, hz = 0.0;
        for (int l = 0; l < n; ++l) {
            hx += 0.5 * a[l] * e[l].x();
            hy += 0.5 * a[l] * e[l].y();
            hz -= a[l] * e[l].z();
        }
        h[k] = {hx, hy, hz};
    }
}

void rhs_core(const SpinGeometry& g, const PairCoefficients& pc, Frame frame, double p_d,
              const Eigen::Vector3d* e, Eigen::Vector3d* h, Eigen::Vector3d* de, int n) {
    if (frame == Frame::lab)
        fields_dipolar(g, e, h, n);
    else
        fields_secular(pc, e, h, n);
    const double wz0 = frame == Frame::rotating_secular ? 0.0 : 1.0;
    for (int k = 0; k < n; ++k) {
        const double wx = p_d * h[k].x();
        const double wy = p_d * h[k].y();
        const double wz = wz0 + p_d * h[k].z();
        de[k] = {e[k].y() * wz - e[k].z() * wy, e[k].z() * wx - e[k].x() * wz,
                 e[k].x() * wy - e[k].y() * wx};
    }
}

}  // namespace

Eigen::Vector3d ClassicalState::mean() const {
    Eigen::Vector3d m = Eigen::Vector3d::Zero();
    for (const auto& v : e) m += v;
    return m / static_cast<double>(e.size());
}

ClassicalState init_linear(const SpinGeometry& g, double s, std::uint64_t seed) {
    if (std::abs(s) > 1.0) throw std::invalid_argument("polarization must be in [-1, 1]");
    const int n = g.size();
    const int n_plus = static_cast<int>(std::lround(n * (1.0 + s) / 2.0));
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    Rng rng(seed);
    shuffle(order, rng);
    ClassicalState st;
    st.e.assign(n, Eigen::Vector3d::UnitX());
    for (int i = n_plus; i < n; ++i) st.e[order[i]] = -Eigen::Vector3d::UnitX();
    return st;
}

ClassicalState init_random(const SpinGeometry& g, double s, std::uint64_t seed) {
    if (std::abs(s) > 1.0) throw std::invalid_argument("polarization must be in [-1, 1]");
    if (std::abs(s) == 1.0) return init_linear(g, s, seed);  // documented fallback
    const int n = g.size();
    const double kappa = langevin_inverse(s);
    Rng rng(seed);
    ClassicalState st;
    st.e.resize(n);
    constexpr int kMaxTries = 100000;
    for (int attempt = 0; attempt < kMaxTries; ++attempt) {
        double sum_x = 0.0;
        for (int i = 0; i < n; ++i) {
            const double u = tilted_projection(kappa, rng);
            const double psi = 2.0 * M_PI * rng.uniform();
            const double rho = std::sqrt(std::max(0.0, 1.0 - u * u));
            st.e[i] = {u, rho * std::cos(psi), rho * std::sin(psi)};
            sum_x += u;
        }
        if (std::abs(sum_x / n - s) <= 1e-3) return st;
    }
    throw numerical_error("init_random: could not hit target polarization after " +
                          std::to_string(kMaxTries) + " attempts");
}

ClassicalState perturb(const ClassicalState& state, double eps, std::uint64_t seed) {
    Rng rng(seed);
    ClassicalState out = state;
    for (auto& e : out.e) {
        Eigen::Vector3d gvec;
        do {
            gvec = {rng.gaussian(), rng.gaussian(), rng.gaussian()};
            gvec -= gvec.dot(e) * e;
        } while (gvec.norm() < 1e-12);
        e = (e + eps * gvec.normalized()).normalized();
    }
    return out;
}

void dipolar_fields(const SpinGeometry& g, const std::vector<Eigen::Vector3d>& e,
                    std::vector<Eigen::Vector3d>& h) {
    h.resize(e.size());
    fields_dipolar(g, e.data(), h.data(), static_cast<int>(e.size()));
}

void secular_fields(const PairCoefficients& pc, const std::vector<Eigen::Vector3d>& e,
                    std::vector<Eigen::Vector3d>& h) {
    h.resize(e.size());
    fields_secular(pc, e.data(), h.data(), static_cast<int>(e.size()));
}

void classical_rhs(const SpinGeometry& g, const PairCoefficients& pc, Frame frame, double p_d,
                   const std::vector<Eigen::Vector3d>& e, std::vector<Eigen::Vector3d>& fields_buf,
                   std::vector<Eigen::Vector3d>& de) {
    fields_buf.resize(e.size());
    de.resize(e.size());
    rhs_core(g, pc, frame, p_d, e.data(), fields_buf.data(), de.data(),
             static_cast<int>(e.size()));
}

void classical_rhs_coeff(const PairCoefficients& pc, double p_d,
                         const std::vector<Eigen::Vector3d>& e,
                         std::vector<Eigen::Vector3d>& de) {
    const int n = static_cast<int>(e.size());
    de.assign(n, Eigen::Vector3d::Zero());
    for (int i = 0; i < n; ++i) {
        const double xi = e[i].x(), yi = e[i].y(), zi = e[i].z();
        double sx = 0.0, sy = 0.0, sz = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double xj = e[j].x(), yj = e[j].y(), zj = e[j].z();
            const double a = pc.a(i, j);
            const double bx = pc.bx(i, j), by = pc.by(i, j);
            const double cx = pc.cx(i, j), cy = pc.cy(i, j);
            sx += -a * (yi * zj + 0.5 * zi * yj) - 2.0 * cx * yi * xj +
                  2.0 * cy * (yi * yj - zi * zj) - 2.0 * zi * (bx * yj + by * xj);
            sy += a * (xi * zj + 0.5 * zi * xj) + 2.0 * cx * (xi * xj - zi * zj) -
                  2.0 * cy * xi * yj - 2.0 * zi * (bx * xj - by * yj);
            sz += 0.5 * a * (xi * yj - yi * xj) + 2.0 * zj * (cx * yi + cy * xi) +
                  2.0 * bx * (xi * yj + yi * xj) + 2.0 * by * (xi * xj - yi * yj);
        }
        de[i] = {yi + p_d * sx, -xi + p_d * sy, p_d * sz};
    }
}

ClassicalFidResult integrate(const SpinGeometry& g, ClassicalState state, double p_d,
                             const TimeGrid& grid, Frame frame, const IntegrateControls& controls) {
    if (grid.samples < 1) throw std::invalid_argument("output grid is empty");
    if (p_d < 0.0) throw std::invalid_argument("p_d must be non-negative");
    const int n = state.size();
    if (n != g.size()) throw std::invalid_argument("state size does not match geometry");

    const PairCoefficients pc(g);
    const double t0 = state.t;

    Eigen::VectorXd y0(3 * n);
    for (int k = 0; k < n; ++k) y0.segment<3>(3 * k) = state.e[k];

    std::vector<Eigen::Vector3d> ebuf(n), hbuf(n), dbuf(n);
    auto rhs = [&](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
        for (int k = 0; k < n; ++k) ebuf[k] = y.segment<3>(3 * k);
        rhs_core(g, pc, frame, p_d, ebuf.data(), hbuf.data(), dbuf.data(), n);
        for (int k = 0; k < n; ++k) dy.segment<3>(3 * k) = dbuf[k];
    };

    ode::Controls oc;
    oc.tol = controls.tol;
    oc.h_init = controls.h_init;
    oc.h_min = controls.h_min;
    oc.h_max = controls.h_max;
    ode::Dp5 stepper(std::move(y0), t0, rhs, oc);

    const double norm_tol = controls.norm_tol;
    stepper.set_constraint([n, norm_tol](const Eigen::VectorXd& y) {
        for (int k = 0; k < n; ++k)
            if (std::abs(y.segment<3>(3 * k).norm() - 1.0) > norm_tol) return false;
        return true;
    });
    stepper.set_projection([n, &stepper](Eigen::VectorXd& y) {
        double dev = 0.0;
        for (int k = 0; k < n; ++k) {
            auto seg = y.segment<3>(3 * k);
            const double nrm = seg.norm();
            dev = std::max(dev, std::abs(nrm - 1.0));
            seg /= nrm;
        }
        auto& st = stepper.stats();
        st.max_constraint_dev = std::max(st.max_constraint_dev, dev);
    });

    ClassicalFidResult res;
    res.trace.source = "classical";
    res.trace.t.reserve(grid.samples);
    res.trace.sx.reserve(grid.samples);
    res.trace.sy.reserve(grid.samples);
    res.trace.sz.reserve(grid.samples);

    for (int m = 0; m < grid.samples; ++m) {
        stepper.advance_to(t0 + grid.t(m));
        Eigen::Vector3d mean = Eigen::Vector3d::Zero();
        for (int k = 0; k < n; ++k) mean += stepper.state().segment<3>(3 * k);
        mean /= static_cast<double>(n);
        res.trace.t.push_back(stepper.time());
        res.trace.sx.push_back(mean.x());
        res.trace.sy.push_back(mean.y());
        res.trace.sz.push_back(mean.z());
    }

    res.stats = stepper.stats();
    res.final_state.e.resize(n);
    for (int k = 0; k < n; ++k) res.final_state.e[k] = stepper.state().segment<3>(3 * k);
    res.final_state.t = stepper.time();
    return res;
}

}  // namespace spindyn
