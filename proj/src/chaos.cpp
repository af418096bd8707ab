#include "spindyn/chaos.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "spindyn/errors.hpp"
#include "spindyn/rng.hpp"

namespace spindyn {

double TangentState::norm() const {
    double s = 0.0;
    for (const auto& v : f) s += v.squaredNorm();
    return std::sqrt(s);
}

TangentState random_tangent(int n, std::uint64_t seed) {
    Rng rng(seed);
    TangentState ts;
    ts.f.resize(n);
    double s = 0.0;
    for (auto& v : ts.f) {
        v = {rng.gaussian(), rng.gaussian(), rng.gaussian()};
        s += v.squaredNorm();
    }
    const double inv = 1.0 / std::sqrt(s);
    for (auto& v : ts.f) v *= inv;
    return ts;
}

void tangent_rhs(const SpinGeometry& g, const PairCoefficients& pc, Frame frame, double p_d,
                 const std::vector<Eigen::Vector3d>& e, const std::vector<Eigen::Vector3d>& f,
                 std::vector<Eigen::Vector3d>& df) {
    const int n = static_cast<int>(e.size());
    if (static_cast<int>(f.size()) != n)
        throw std::invalid_argument("tangent dimension does not match state");
    std::vector<Eigen::Vector3d> he(n), hf(n);
    if (frame == Frame::lab) {
        dipolar_fields(g, e, he);
        dipolar_fields(g, f, hf);
    } else {
        secular_fields(pc, e, he);
        secular_fields(pc, f, hf);
    }
    const double wz0 = frame == Frame::rotating_secular ? 0.0 : 1.0;
    df.resize(n);
    for (int k = 0; k < n; ++k) {
        const Eigen::Vector3d omega(p_d * he[k].x(), p_d * he[k].y(), wz0 + p_d * he[k].z());
        df[k] = f[k].cross(omega) + p_d * e[k].cross(hf[k]);
    }
}

LyapunovSeries lyapunov(const SpinGeometry& g, ClassicalState initial, TangentState tangent,
                        double p_d, const LyapunovOptions& opt) {
    const int n = initial.size();
    if (n != g.size()) throw std::invalid_argument("state size does not match geometry");
    if (static_cast<int>(tangent.f.size()) != n)
        throw std::invalid_argument("tangent dimension does not match state");
    if (opt.t_end <= opt.transient_cutoff)
        throw std::invalid_argument("t_end must exceed the transient cutoff T");

    const PairCoefficients pc(g);
    const double t0 = initial.t;

    Eigen::VectorXd y0(6 * n);
    for (int k = 0; k < n; ++k) {
        y0.segment<3>(3 * k) = initial.e[k];
        y0.segment<3>(3 * (n + k)) = tangent.f[k];
    }

    std::vector<Eigen::Vector3d> ebuf(n), fbuf(n), he(n), hf(n);
    auto rhs = [&](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
        for (int k = 0; k < n; ++k) {
            ebuf[k] = y.segment<3>(3 * k);
            fbuf[k] = y.segment<3>(3 * (n + k));
        }
        if (opt.frame == Frame::lab) {
            dipolar_fields(g, ebuf, he);
            dipolar_fields(g, fbuf, hf);
        } else {
            secular_fields(pc, ebuf, he);
            secular_fields(pc, fbuf, hf);
        }
        const double wz0 = opt.frame == Frame::rotating_secular ? 0.0 : 1.0;
        for (int k = 0; k < n; ++k) {
            const Eigen::Vector3d omega(p_d * he[k].x(), p_d * he[k].y(), wz0 + p_d * he[k].z());
            dy.segment<3>(3 * k) = ebuf[k].cross(omega);
            dy.segment<3>(3 * (n + k)) = fbuf[k].cross(omega) + p_d * ebuf[k].cross(hf[k]);
        }
    };

    ode::Controls oc;
    oc.tol = opt.controls.tol;
    oc.h_init = opt.controls.h_init;
    oc.h_min = opt.controls.h_min;
    oc.h_max = opt.controls.h_max;
    ode::Dp5 stepper(std::move(y0), t0, rhs, oc);

    const double norm_tol = opt.controls.norm_tol;
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

    auto tangent_log_norm = [&]() {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += stepper.state().segment<3>(3 * (n + k)).squaredNorm();
        if (!std::isfinite(s) || s == 0.0)
            throw numerical_error("tangent norm overflow/underflow despite rescaling");
        return 0.5 * std::log(s);
    };

    LyapunovSeries series;
    series.transient_cutoff = opt.transient_cutoff;

    double accum = tangent.log_norm_accum;
    double accum_at_T = 0.0;
    bool have_T = false;

    double next_rescale = t0 + opt.rescale_interval;
    double next_sample = t0 + opt.sample_interval;
    const double T_abs = t0 + opt.transient_cutoff;
    const double t_end_abs = t0 + opt.t_end;

    while (stepper.time() < t_end_abs) {
        double target = std::min({next_rescale, next_sample, t_end_abs});
        if (!have_T) target = std::min(target, T_abs);
        stepper.advance_to(target);
        const double t = stepper.time();

        if (!have_T && t >= T_abs) {
            accum_at_T = accum + tangent_log_norm();
            have_T = true;
        }
        if (t >= next_sample) {
            if (have_T && t > T_abs) {
                const double L = (accum + tangent_log_norm() - accum_at_T) / (t - T_abs);
                series.t.push_back(t);
                series.L.push_back(L);
            }
            next_sample += opt.sample_interval;
        }
        if (t >= next_rescale) {
            const double ln_nrm = tangent_log_norm();
            accum += ln_nrm;
            const double inv = std::exp(-ln_nrm);
            for (int k = 0; k < n; ++k) stepper.state().segment<3>(3 * (n + k)) *= inv;
            next_rescale += opt.rescale_interval;
        }
    }

    series.L_final = (accum + tangent_log_norm() - accum_at_T) / (stepper.time() - T_abs);
    if (series.t.empty() || series.t.back() < stepper.time()) {
        series.t.push_back(stepper.time());
        series.L.push_back(series.L_final);
    }
    series.stats = stepper.stats();
    return series;
}

}  // namespace spindyn
