#pragma once

#include <cstdint>
#include <functional>
#include <limits>

#include <Eigen/Core>

#include "spindyn/errors.hpp"

namespace spindyn::ode {

struct Controls {
    double tol = 1e-8;     // local error tolerance (absolute and relative)
    double h_init = 1e-2;
    double h_min = 1e-12;  // below this the integration is declared failed
    double h_max = 1.0;
};

struct Stats {
    std::uint64_t accepted = 0;
    std::uint64_t rejected_error = 0;
    std::uint64_t rejected_constraint = 0;
    double h_min_used = std::numeric_limits<double>::infinity();
    double h_max_used = 0.0;
    double max_constraint_dev = 0.0;  // filled by the caller's hooks
};

// Dormand-Prince 5(4) embedded pair with two caller hooks:
//   constraint_ok(y_trial) -> false rejects the step and halves h;
//   on_accept(y)           -> may project y (e.g. renormalize spin lengths).
// Steps never cross the target passed to advance_to, so event times
// (output samples, rescales, cutoffs) are hit exactly.
class Dp5 {
public:
    using Rhs = std::function<void(double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy)>;
    using Constraint = std::function<bool(const Eigen::VectorXd& y_trial)>;
    using Project = std::function<void(Eigen::VectorXd& y)>;

    Dp5(Eigen::VectorXd y0, double t0, Rhs rhs, Controls controls = {});

    void set_constraint(Constraint c) { constraint_ = std::move(c); }
    void set_projection(Project p) { project_ = std::move(p); }

    void advance_to(double t_target);

    double time() const { return t_; }
    const Eigen::VectorXd& state() const { return y_; }
    Eigen::VectorXd& state() { return y_; }
    const Stats& stats() const { return stats_; }
    Stats& stats() { return stats_; }

private:
    double error_norm(const Eigen::VectorXd& y_new, const Eigen::VectorXd& err) const;

    Eigen::VectorXd y_;
    double t_;
    Rhs rhs_;
    Controls ctl_;
    Constraint constraint_;
    Project project_;
    Stats stats_;
    double h_;  // current proposal
    Eigen::VectorXd k_[7], y_tmp_, y_new_, err_;
};

}  // namespace spindyn::ode
