#include "spindyn/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace spindyn::ode {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// 5th-order weights minus the embedded 4th-order weights
constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695, e4 = b4 - 393.0 / 640,
                 e5 = b5 + 92097.0 / 339200, e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

}  // namespace

Dp5::Dp5(Eigen::VectorXd y0, double t0, Rhs rhs, Controls controls)
    : y_(std::move(y0)), t_(t0), rhs_(std::move(rhs)), ctl_(controls), h_(controls.h_init) {
    const auto n = y_.size();
    for (auto& k : k_) k.resize(n);
    y_tmp_.resize(n);
    y_new_.resize(n);
    err_.resize(n);
}

double Dp5::error_norm(const Eigen::VectorXd& y_new, const Eigen::VectorXd& err) const {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
        const double scale = ctl_.tol + ctl_.tol * std::max(std::abs(y_[i]), std::abs(y_new[i]));
        const double q = err[i] / scale;
        sum += q * q;
    }
    return std::sqrt(sum / static_cast<double>(err.size()));
}

void Dp5::advance_to(double t_target) {
    while (t_ < t_target) {
        bool clamped = false;
        double h = std::min(h_, ctl_.h_max);
        if (t_ + h >= t_target) {
            h = t_target - t_;
            clamped = true;
        }
        if (h < ctl_.h_min)
            throw numerical_error("step size underflow at t=" + std::to_string(t_) +
                                  " (h=" + std::to_string(h) + ")");

        rhs_(t_, y_, k_[0]);
        y_tmp_ = y_ + h * (a21 * k_[0]);
        rhs_(t_ + c2 * h, y_tmp_, k_[1]);
        y_tmp_ = y_ + h * (a31 * k_[0] + a32 * k_[1]);
        rhs_(t_ + c3 * h, y_tmp_, k_[2]);
        y_tmp_ = y_ + h * (a41 * k_[0] + a42 * k_[1] + a43 * k_[2]);
        rhs_(t_ + c4 * h, y_tmp_, k_[3]);
        y_tmp_ = y_ + h * (a51 * k_[0] + a52 * k_[1] + a53 * k_[2] + a54 * k_[3]);
        rhs_(t_ + c5 * h, y_tmp_, k_[4]);
        y_tmp_ = y_ + h * (a61 * k_[0] + a62 * k_[1] + a63 * k_[2] + a64 * k_[3] + a65 * k_[4]);
        rhs_(t_ + h, y_tmp_, k_[5]);
        y_new_ = y_ + h * (b1 * k_[0] + b3 * k_[2] + b4 * k_[3] + b5 * k_[4] + b6 * k_[5]);
        rhs_(t_ + h, y_new_, k_[6]);
        err_ = h * (e1 * k_[0] + e3 * k_[2] + e4 * k_[3] + e5 * k_[4] + e6 * k_[5] + e7 * k_[6]);

        const double en = error_norm(y_new_, err_);
        if (en > 1.0) {
            ++stats_.rejected_error;
            h_ = h * std::max(0.2, 0.9 * std::pow(en, -0.2));
            continue;
        }
        if (constraint_ && !constraint_(y_new_)) {
            ++stats_.rejected_constraint;
            h_ = 0.5 * h;
            continue;
        }

        t_ = clamped ? t_target : t_ + h;
        y_.swap(y_new_);
        if (project_) project_(y_);
        ++stats_.accepted;
        stats_.h_min_used = std::min(stats_.h_min_used, h);
        stats_.h_max_used = std::max(stats_.h_max_used, h);

        const double grow = en > 0.0 ? 0.9 * std::pow(en, -0.2) : 5.0;
        const double h_next = h * std::clamp(grow, 0.2, 5.0);
        // a clamped (shortened) step must not shrink the stored proposal
        h_ = clamped ? std::max(h_, h_next) : h_next;
    }
}

}  // namespace spindyn::ode
