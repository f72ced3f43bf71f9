#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cosdyn/errors.hpp"
#include "cosdyn/polynomial.hpp"
#include "cosdyn/rk4.hpp"

namespace cosdyn {

/// Frozen coefficients of the per-mode dynamics.
struct EigenParams {
    double n_phi = 1.0;
    double n_psi = 1.0;
    double n_times = 1.0;
    double sigma2 = 0.0;
    double rho = 0.0;
};

struct EigenPair {
    double w = 0.0;
    double f = 0.0;
    double c = 0.0;  // f(0) - w(0)^2

    static EigenPair make(double w0, double f0) { return {w0, f0, f0 - w0 * w0}; }
};

enum class EigenRhsKind { coupled, reduced_cos, reduced_l2 };
enum class TrajectoryStatus { completed, diverged };

inline const char* to_string(TrajectoryStatus s) {
    return s == TrajectoryStatus::completed ? "completed" : "diverged";
}

struct EigenTrajectory {
    std::vector<double> t;
    std::vector<double> w;
    std::vector<double> f;  // empty for reduced kinds
    double c = 0.0;
    TrajectoryStatus status = TrajectoryStatus::completed;

    double final_w() const { return w.back(); }
};

inline double d_term(const EigenPair& p, const EigenParams& q) {
    const double a = 1.0 / (1.0 + q.sigma2);
    const double np = q.n_phi, ns = q.n_psi;
    return a * (2.0 * p.f * p.f * p.w * p.w / (np * ns * ns * ns) + q.n_times * p.f * p.w / (ns * ns) -
                p.f / (np * ns));
}

struct EigenRate {
    double dw = 0.0;
    double df = 0.0;
};

inline EigenRate eigen_rhs(const EigenPair& p, const EigenParams& q) {
    const double d = d_term(p, q);
    return {-d - q.rho * p.w, -2.0 * d * p.w - 2.0 * q.rho * p.f};
}

/// Coefficients of the reduced cosine dynamics as a polynomial in w.
inline Polynomial reduced_cos_polynomial(const EigenParams& q) {
    const double a = 1.0 / (1.0 + q.sigma2);
    const double np = q.n_phi, ns = q.n_psi;
    return Polynomial({0.0, -q.rho, a / (np * ns), -a * q.n_times / (ns * ns), 0.0, 0.0,
                       -2.0 * a / (np * ns * ns * ns)});
}

inline Polynomial reduced_l2_polynomial(double sigma2, double rho) {
    return Polynomial({0.0, -rho, 1.0, -(1.0 + sigma2)});
}

inline double reduced_rhs_cos(double w, const EigenParams& q) {
    const double a = 1.0 / (1.0 + q.sigma2);
    const double np = q.n_phi, ns = q.n_psi;
    const double w2 = w * w;
    return -2.0 * a * w2 * w2 * w2 / (np * ns * ns * ns) - a * q.n_times * w2 * w / (ns * ns) +
           a * w2 / (np * ns) - q.rho * w;
}

inline double reduced_rhs_l2(double w, double sigma2, double rho) {
    return w * w * (1.0 - (1.0 + sigma2) * w) - rho * w;
}

/// f(t) - w(t)^2 - c exp(-2 rho t) for each sample.
inline std::vector<double> parabola_offset(const EigenTrajectory& tr, double rho) {
    std::vector<double> r(tr.t.size());
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = tr.f[i] - tr.w[i] * tr.w[i] - tr.c * std::exp(-2.0 * rho * tr.t[i]);
    return r;
}

struct IntegrateOptions {
    double t_end = 10.0;
    double dt = 1e-3;
    long record_every = 1;
    double diverge_at = 1e6;
};

inline EigenTrajectory integrate_eigen(const EigenPair& init, EigenRhsKind kind, const EigenParams& q,
                                       const IntegrateOptions& opt) {
    if (!(opt.dt > 0.0)) throw ConfigError("dt must be positive");
    EigenTrajectory tr;
    tr.c = init.c;
    const bool coupled = kind == EigenRhsKind::coupled;
    const long n = static_cast<long>(std::llround(opt.t_end / opt.dt));
    const long every = opt.record_every < 1 ? 1 : opt.record_every;

    auto record = [&](double t, double w, double f) {
        tr.t.push_back(t);
        tr.w.push_back(w);
        if (coupled) tr.f.push_back(f);
    };

    if (coupled) {
        using V = Eigen::Vector2d;
        V y(init.w, init.f);
        auto rhs = [&](const V& s) {
            const EigenRate r = eigen_rhs(EigenPair{s[0], s[1], 0.0}, q);
            return V(r.dw, r.df);
        };
        record(0.0, y[0], y[1]);
        for (long k = 1; k <= n; ++k) {
            y = rk4_step(y, opt.dt, rhs);
            if (!std::isfinite(y[0]) || std::abs(y[0]) > opt.diverge_at) {
                tr.status = TrajectoryStatus::diverged;
                record(k * opt.dt, y[0], y[1]);
                return tr;
            }
            if (k % every == 0 || k == n) record(k * opt.dt, y[0], y[1]);
        }
        return tr;
    }

    auto rhs = [&](const double& w) {
        return kind == EigenRhsKind::reduced_cos ? reduced_rhs_cos(w, q)
                                                 : reduced_rhs_l2(w, q.sigma2, q.rho);
    };
    double w = init.w;
    record(0.0, w, 0.0);
    for (long k = 1; k <= n; ++k) {
        w = rk4_step(w, opt.dt, rhs);
        if (!std::isfinite(w) || std::abs(w) > opt.diverge_at) {
            tr.status = TrajectoryStatus::diverged;
            record(k * opt.dt, w, 0.0);
            return tr;
        }
        if (k % every == 0 || k == n) record(k * opt.dt, w, 0.0);
    }
    return tr;
}

inline EigenTrajectory integrate_eigen(double w0, EigenRhsKind kind, const EigenParams& q,
                                       const IntegrateOptions& opt) {
    return integrate_eigen(EigenPair::make(w0, w0 * w0), kind, q, opt);
}

// Self-consistent mode system: all modes of a commuting (W, F) pair, with
// the norms recomputed from the modes themselves.

inline EigenParams mode_norms(const Eigen::VectorXd& w, const Eigen::VectorXd& f, double sigma2,
                              double rho) {
    EigenParams q;
    q.sigma2 = sigma2;
    q.rho = rho;
    q.n_phi = std::sqrt(f.sum());
    q.n_psi = std::sqrt((w.array().square() * f.array()).sum());
    const double den = q.n_phi * q.n_psi;
    q.n_times = den > 0.0 ? (w.array() * f.array()).sum() / den : 0.0;
    return q;
}

/// State layout: [w_1..w_h, f_1..f_h].
inline Eigen::VectorXd modes_rhs(const Eigen::VectorXd& y, double sigma2, double rho) {
    const Eigen::Index h = y.size() / 2;
    const Eigen::VectorXd w = y.head(h), f = y.tail(h);
    const EigenParams q = mode_norms(w, f, sigma2, rho);
    Eigen::VectorXd out(y.size());
    for (Eigen::Index j = 0; j < h; ++j) {
        const EigenRate r = eigen_rhs(EigenPair{w[j], f[j], 0.0}, q);
        out[j] = r.dw;
        out[h + j] = r.df;
    }
    return out;
}

inline Eigen::VectorXd modes_rk4_step(const Eigen::VectorXd& y, double dt, double sigma2, double rho) {
    return rk4_step(y, dt, [&](const Eigen::VectorXd& s) { return modes_rhs(s, sigma2, rho); });
}

}  // namespace cosdyn
