#include "spindyn/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include <Eigen/Core>
#include <fftw3.h>

namespace spindyn {

namespace {

std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

std::vector<std::complex<double>> run_fft(std::vector<std::complex<double>> buf, int sign) {
    const int m = static_cast<int>(buf.size());
    std::vector<std::complex<double>> out(buf.size());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        plan = fftw_plan_dft_1d(m, reinterpret_cast<fftw_complex*>(buf.data()),
                                reinterpret_cast<fftw_complex*>(out.data()), sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

void check_uniform(const std::vector<double>& t) {
    if (t.size() < 2) throw std::invalid_argument("trace needs at least 2 samples");
    const double dt = t[1] - t[0];
    for (std::size_t i = 1; i < t.size(); ++i)
        if (std::abs(t[i] - t[i - 1] - dt) > 1e-12)
            throw std::invalid_argument("trace time grid is not uniform");
}

double sinc(double x) {
    if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

// generic Nelder-Mead on 3 parameters
template <typename F>
std::pair<Eigen::Vector3d, double> nelder_mead(F cost, Eigen::Vector3d start,
                                               Eigen::Vector3d step, int max_iter,
                                               bool* converged);

}  // namespace

std::vector<double> Spectrum::abs() const {
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::abs(x[i]);
    return out;
}

Spectrum dft(const std::vector<std::complex<double>>& samples, double dt, int zero_pad) {
    if (samples.size() < 2) throw std::invalid_argument("dft needs at least 2 samples");
    if (dt <= 0.0) throw std::invalid_argument("dft needs a positive sample spacing");
    if (zero_pad < 1) throw std::invalid_argument("zero_pad factor must be >= 1");
    const std::size_t m = samples.size() * static_cast<std::size_t>(zero_pad);
    std::vector<std::complex<double>> buf(m, {0.0, 0.0});
    std::copy(samples.begin(), samples.end(), buf.begin());

    Spectrum s;
    s.x = run_fft(std::move(buf), FFTW_FORWARD);
    s.padded_size = static_cast<int>(m);
    s.resolution = 2.0 * M_PI / (static_cast<double>(m) * dt);
    s.omega.resize(m);
    for (std::size_t k = 0; k < m; ++k) s.omega[k] = s.resolution * static_cast<double>(k);
    return s;
}

Spectrum dft(const std::vector<double>& samples, double dt, int zero_pad) {
    std::vector<std::complex<double>> c(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) c[i] = {samples[i], 0.0};
    return dft(c, dt, zero_pad);
}

std::vector<std::complex<double>> idft(const std::vector<std::complex<double>>& x) {
    if (x.size() < 2) throw std::invalid_argument("idft needs at least 2 samples");
    auto out = run_fft(x, FFTW_BACKWARD);
    const double inv = 1.0 / static_cast<double>(x.size());
    for (auto& v : out) v *= inv;
    return out;
}

std::vector<double> envelope(const FidTrace& trace) {
    if (trace.sx.size() != trace.sy.size() || trace.sx.size() != trace.t.size())
        throw std::invalid_argument("trace component lengths differ");
    std::vector<double> env(trace.sx.size());
    for (std::size_t i = 0; i < env.size(); ++i)
        env[i] = std::hypot(trace.sx[i], trace.sy[i]);
    return env;
}

std::optional<double> first_zero(const std::vector<double>& env, const std::vector<double>& t,
                                 double rel_threshold) {
    if (env.size() != t.size() || env.size() < 3)
        throw std::invalid_argument("envelope and time grids must match, length >= 3");
    check_uniform(t);
    const double threshold = rel_threshold * env[0];
    std::size_t hit = env.size();
    for (std::size_t i = 0; i < env.size(); ++i) {
        if (env[i] < threshold) {
            hit = i;
            break;
        }
    }
    if (hit == env.size()) return std::nullopt;

    // walk to the local minimum that follows the crossing
    std::size_t i = hit;
    while (i + 1 < env.size() && env[i + 1] < env[i]) ++i;
    if (i == 0 || i + 1 >= env.size()) return t[i];
    const double y0 = env[i - 1], y1 = env[i], y2 = env[i + 1];
    const double denom = y0 - 2.0 * y1 + y2;
    const double off = denom != 0.0 ? 0.5 * (y0 - y2) / denom : 0.0;
    return t[i] + std::clamp(off, -1.0, 1.0) * (t[1] - t[0]);
}

std::optional<double> first_minimum(const std::vector<double>& env, const std::vector<double>& t,
                                    double rel_ceiling) {
    if (env.size() != t.size() || env.size() < 3)
        throw std::invalid_argument("envelope and time grids must match, length >= 3");
    check_uniform(t);
    const double ceiling = rel_ceiling * env[0];
    for (std::size_t i = 1; i + 1 < env.size(); ++i) {
        if (env[i] >= ceiling) continue;
        if (env[i] < env[i - 1] && env[i] <= env[i + 1]) {
            const double y0 = env[i - 1], y1 = env[i], y2 = env[i + 1];
            const double denom = y0 - 2.0 * y1 + y2;
            const double off = denom != 0.0 ? 0.5 * (y0 - y2) / denom : 0.0;
            return t[i] + std::clamp(off, -1.0, 1.0) * (t[1] - t[0]);
        }
    }
    return std::nullopt;
}

double abragam(double t, double amplitude, double gauss_rate, double sinc_rate) {
    return amplitude * std::exp(-0.5 * gauss_rate * gauss_rate * t * t) * sinc(sinc_rate * t);
}

namespace {

template <typename F>
std::pair<Eigen::Vector3d, double> nelder_mead(F cost, Eigen::Vector3d start, Eigen::Vector3d step,
                                               int max_iter, bool* converged) {
    constexpr int n = 3;
    Eigen::Vector3d pts[n + 1];
    double val[n + 1];
    pts[0] = start;
    val[0] = cost(start);
    for (int i = 0; i < n; ++i) {
        pts[i + 1] = start;
        pts[i + 1](i) += step(i);
        val[i + 1] = cost(pts[i + 1]);
    }
    auto order = [&]() {
        for (int i = 0; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j)
                if (val[j] < val[i]) {
                    std::swap(val[i], val[j]);
                    std::swap(pts[i], pts[j]);
                }
    };
    *converged = false;
    for (int it = 0; it < max_iter; ++it) {
        order();
        const double spread = std::abs(val[n] - val[0]);
        double psize = 0.0;
        for (int i = 1; i <= n; ++i) psize = std::max(psize, (pts[i] - pts[0]).norm());
        if (spread <= 1e-30 + 1e-15 * std::abs(val[0]) && psize <= 1e-14 * (1.0 + pts[0].norm())) {
            *converged = true;
            break;
        }
        Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
        for (int i = 0; i < n; ++i) centroid += pts[i];
        centroid /= n;
        const Eigen::Vector3d refl = centroid + (centroid - pts[n]);
        const double fr = cost(refl);
        if (fr < val[0]) {
            const Eigen::Vector3d exp_pt = centroid + 2.0 * (centroid - pts[n]);
            const double fe = cost(exp_pt);
            if (fe < fr) {
                pts[n] = exp_pt;
                val[n] = fe;
            } else {
                pts[n] = refl;
                val[n] = fr;
            }
        } else if (fr < val[n - 1]) {
            pts[n] = refl;
            val[n] = fr;
        } else {
            const Eigen::Vector3d contr =
                centroid + 0.5 * ((fr < val[n] ? refl : pts[n]) - centroid);
            const double fc = cost(contr);
            if (fc < std::min(fr, val[n])) {
                pts[n] = contr;
                val[n] = fc;
            } else {
                for (int i = 1; i <= n; ++i) {
                    pts[i] = pts[0] + 0.5 * (pts[i] - pts[0]);
                    val[i] = cost(pts[i]);
                }
            }
        }
    }
    order();
    return {pts[0], val[0]};
}

}  // namespace

AbragamFit fit_abragam(const std::vector<double>& env, const std::vector<double>& t,
                       double window_lo, double window_hi) {
    if (env.size() != t.size() || env.empty())
        throw std::invalid_argument("envelope and time grids must match");
    if (window_hi <= window_lo) throw std::invalid_argument("empty fit window");
    std::vector<double> tt, yy;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] >= window_lo && t[i] <= window_hi) {
            tt.push_back(t[i]);
            yy.push_back(std::abs(env[i]));
        }
    }
    if (tt.size() < 8) throw std::invalid_argument("fit window holds fewer than 8 samples");

    auto cost = [&](const Eigen::Vector3d& p) {
        double s = 0.0;
        for (std::size_t i = 0; i < tt.size(); ++i) {
            const double d = std::abs(abragam(tt[i], p(0), p(1), p(2))) - yy[i];
            s += d * d;
        }
        return s / static_cast<double>(tt.size());
    };

    const double t_scale = window_hi > 0.0 ? window_hi : 1.0;
    Eigen::Vector3d start(yy.front(), 1.0 / t_scale, M_PI / t_scale);
    Eigen::Vector3d step(0.1 * std::max(1e-3, yy.front()), 0.5 / t_scale, 0.5 * M_PI / t_scale);

    bool conv = false;
    auto [best, fbest] = nelder_mead(cost, start, step, 20000, &conv);
    // one restart from the found point tightens the last digits
    bool conv2 = false;
    auto [best2, fbest2] = nelder_mead(cost, best, 1e-4 * step, 20000, &conv2);
    if (fbest2 < fbest) {
        best = best2;
        fbest = fbest2;
        conv = conv2;
    }

    AbragamFit fit;
    fit.amplitude = best(0);
    fit.gauss_rate = std::abs(best(1));
    fit.sinc_rate = std::abs(best(2));
    fit.residual_rms = std::sqrt(fbest);
    fit.window_lo = window_lo;
    fit.window_hi = window_hi;
    fit.converged = conv;
    return fit;
}

DoubletInfo doublet_info(const Spectrum& spec, double center, double half_window) {
    DoubletInfo info;
    double best_lo = 0.0, best_hi = 0.0;
    for (std::size_t k = 0; k < spec.omega.size(); ++k) {
        const double w = spec.omega[k];
        if (w < center - half_window || w > center + half_window) continue;
        const double h = std::abs(spec.x[k]);
        if (w < center && h > best_lo) {
            best_lo = h;
            info.peak_lo_omega = w;
            info.peak_lo_height = h;
        }
        if (w > center && h > best_hi) {
            best_hi = h;
            info.peak_hi_omega = w;
            info.peak_hi_height = h;
        }
    }
    const double half = 0.5 * std::max(info.peak_lo_height, info.peak_hi_height);
    double w_left = center, w_right = center;
    bool found = false;
    for (std::size_t k = 0; k < spec.omega.size(); ++k) {
        const double w = spec.omega[k];
        if (w < center - half_window || w > center + half_window) continue;
        if (std::abs(spec.x[k]) >= half) {
            if (!found) {
                w_left = w;
                found = true;
            }
            w_right = w;
        }
    }
    info.fwhm = found ? w_right - w_left : 0.0;
    return info;
}

CompareReport compare(const FidTrace& a, const FidTrace& b, int zero_pad) {
    check_uniform(a.t);
    check_uniform(b.t);
    const double lo = std::max(a.t.front(), b.t.front());
    const double hi = std::min(a.t.back(), b.t.back());
    if (hi <= lo) throw std::invalid_argument("traces cover disjoint time ranges");

    // restrict to A's samples inside the overlap, resample B linearly
    std::vector<double> t, dax;
    std::vector<double> sx_a, sx_b;
    const double dtb = b.t[1] - b.t[0];
    for (std::size_t i = 0; i < a.t.size(); ++i) {
        const double ti = a.t[i];
        if (ti < lo || ti > hi) continue;
        const double pos = (ti - b.t.front()) / dtb;
        const auto j = static_cast<std::size_t>(std::min(
            static_cast<double>(b.t.size() - 2), std::max(0.0, std::floor(pos))));
        const double frac = std::clamp(pos - static_cast<double>(j), 0.0, 1.0);
        const double bx = b.sx[j] + frac * (b.sx[j + 1] - b.sx[j]);
        t.push_back(ti);
        sx_a.push_back(a.sx[i]);
        sx_b.push_back(bx);
        dax.push_back(std::abs(a.sx[i] - bx));
    }
    if (t.size() < 3) throw std::invalid_argument("trace overlap holds fewer than 3 samples");

    CompareReport rep;
    const auto env_a = envelope(a);
    const auto tz = first_zero(env_a, a.t);
    rep.t_split = tz.value_or(0.5 * (lo + hi));

    double s_before = 0.0, s_after = 0.0;
    std::size_t n_before = 0, n_after = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] <= rep.t_split) {
            rep.max_before = std::max(rep.max_before, dax[i]);
            s_before += dax[i] * dax[i];
            ++n_before;
        } else {
            rep.max_after = std::max(rep.max_after, dax[i]);
            s_after += dax[i] * dax[i];
            ++n_after;
        }
    }
    rep.rms_before = n_before ? std::sqrt(s_before / n_before) : 0.0;
    rep.rms_after = n_after ? std::sqrt(s_after / n_after) : 0.0;

    const double dt = t[1] - t[0];
    rep.width_a = doublet_info(dft(sx_a, dt, zero_pad)).fwhm;
    rep.width_b = doublet_info(dft(sx_b, dt, zero_pad)).fwhm;
    return rep;
}

}  // namespace spindyn
