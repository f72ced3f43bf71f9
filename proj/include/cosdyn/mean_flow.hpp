#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "cosdyn/core_model.hpp"
#include "cosdyn/errors.hpp"
#include "cosdyn/rk4.hpp"

namespace cosdyn {

inline constexpr double kDegenerateNorm = 1e-12;
inline constexpr double kConditionGuard = 1e10;
inline constexpr double kAsymmetryGuard = 1e-6;

struct NormDiagnostics {
    double n_phi = 0.0;
    double n_psi = 0.0;
    double n_times = 0.0;
    double asym_rel = 0.0;
    double comm_rel = 0.0;
};

/// Projector W with F = Phi Phi^T; the flow never needs Phi itself.
struct FlowState {
    Mat w;
    Mat f;
    double time = 0.0;

    static FlowState from(const ModelState& s) { return {s.w, s.f(), s.time}; }
};

namespace detail {

inline double rel(double num, double den) { return den > 0.0 ? num / den : 0.0; }

inline NormDiagnostics diag_from(const Mat& w, const Mat& f, double n_phi, double n_psi, double tr_wf) {
    NormDiagnostics d;
    d.n_phi = n_phi;
    d.n_psi = n_psi;
    d.n_times = (n_phi > 0.0 && n_psi > 0.0) ? tr_wf / (n_phi * n_psi) : 0.0;
    d.asym_rel = rel((w - w.transpose()).norm(), w.norm());
    d.comm_rel = rel((f * w - w * f).norm(), f.norm() * w.norm());
    return d;
}

}  // namespace detail

inline NormDiagnostics diagnostics(const ModelState& s) {
    const Mat f = s.f();
    return detail::diag_from(s.w, f, s.phi.norm(), s.psi().norm(), (s.w * f).trace());
}

inline NormDiagnostics diagnostics(const FlowState& s) {
    const double n_phi = std::sqrt(std::max(0.0, s.f.trace()));
    const double n_psi = std::sqrt(std::max(0.0, (s.w * s.f * s.w.transpose()).trace()));
    return detail::diag_from(s.w, s.f, n_phi, n_psi, (s.w * s.f).trace());
}

struct MeanFieldDrift {
    Mat h_hat;
};

inline MeanFieldDrift compute_hhat(const Mat& w, const Mat& f, double sigma2) {
    const double n_phi = std::sqrt(std::max(0.0, f.trace()));
    const double n_psi = std::sqrt(std::max(0.0, (w * f * w.transpose()).trace()));
    if (!(n_phi > kDegenerateNorm) || !(n_psi > kDegenerateNorm))
        throw DegenerateNorms("compute_hhat: N_Phi or N_Psi vanished");
    const double n_times = (w * f).trace() / (n_phi * n_psi);
    const Mat fw = f * w;
    const Mat wfw = w * fw;
    const double a = 1.0 / (1.0 + sigma2);
    MeanFieldDrift out;
    out.h_hat = a * (fw / (n_phi * n_psi) - 2.0 * wfw * fw / (n_phi * n_psi * n_psi * n_psi) -
                     n_times * wfw / (n_psi * n_psi));
    return out;
}

inline MeanFieldDrift compute_hhat(const ModelState& s, double sigma2) { return compute_hhat(s.w, s.f(), sigma2); }

struct FlowRate {
    Mat dw;
    Mat df;
};

inline FlowState operator+(const FlowState& a, const FlowRate& r) { return {a.w + r.dw, a.f + r.df, a.time}; }
inline FlowRate operator*(double k, const FlowRate& r) { return {k * r.dw, k * r.df}; }
inline FlowRate operator+(const FlowRate& a, const FlowRate& b) { return {a.dw + b.dw, a.df + b.df}; }

inline double condition_number(const Mat& w) {
    Eigen::JacobiSVD<Mat> svd(w);
    const auto& sv = svd.singularValues();
    const double smin = sv[sv.size() - 1];
    return smin > 0.0 ? sv[0] / smin : std::numeric_limits<double>::infinity();
}

struct FlowRhsOptions {
    double sigma2 = 0.0;
    double rho = 0.0;
    /// Keep only the symmetric part of W^{-1} H. A no-op on commuting states.
    bool symmetrize_dw = true;
    bool check_symmetry = true;
};

/// dW = W^{-1} H - rho W, dF = W H W^{-1} + W^{-1} H^T W - 2 rho F.
inline FlowRate flow_rhs(const FlowState& s, const FlowRhsOptions& o) {
    const double cond = condition_number(s.w);
    if (!(cond < kConditionGuard)) throw SingularProjector("W is numerically singular", s.time, cond);
    if (o.check_symmetry) {
        const double asym = detail::rel((s.w - s.w.transpose()).norm(), s.w.norm());
        if (asym > kAsymmetryGuard) throw AsymmetricProjector("W drifted away from symmetry");
    }
    // F = 0 exactly carries no data signal: the drift is taken as zero.
    const Mat hh = s.f.isZero(0.0) ? Mat::Zero(s.w.rows(), s.w.cols()) : compute_hhat(s.w, s.f, o.sigma2).h_hat;
    const Eigen::PartialPivLU<Mat> lu(s.w);
    Mat winv_h = lu.solve(hh);
    if (o.symmetrize_dw) winv_h = (0.5 * (winv_h + winv_h.transpose())).eval();
    // W H W^{-1} = (W^{-T} H^T W^T)^T
    const Eigen::PartialPivLU<Mat> lut(s.w.transpose());
    const Mat whwi = lut.solve(hh.transpose() * s.w.transpose()).transpose();
    const Mat wihw = lu.solve(hh.transpose() * s.w);
    FlowRate r;
    r.dw = winv_h - o.rho * s.w;
    r.df = whwi + wihw - 2.0 * o.rho * s.f;
    return r;
}

inline FlowRate flow_rhs(const ModelState& s, double sigma2, double rho) {
    return flow_rhs(FlowState::from(s), FlowRhsOptions{sigma2, rho});
}

inline FlowState flow_rk4_step(const FlowState& s, double dt, const FlowRhsOptions& o) {
    auto rhs = [&](const FlowState& y) { return flow_rhs(y, o); };
    FlowState next = rk4_step(s, dt, rhs);
    next.time = s.time + dt;
    return next;
}

enum class FlowStatus { completed, singular, asymmetric, diverged };

inline const char* to_string(FlowStatus s) {
    switch (s) {
        case FlowStatus::completed: return "completed";
        case FlowStatus::singular: return "singular";
        case FlowStatus::asymmetric: return "asymmetric";
        default: return "diverged";
    }
}

struct FlowRecord {
    double time = 0.0;
    NormDiagnostics diag;
    double w_norm = 0.0;
    double f_asym = 0.0;
};

struct FlowOptions {
    double sigma2 = 0.0;
    double rho = 0.0;
    double t_end = 10.0;
    double dt = 0.05;
    long record_every = 1;
    bool symmetrize_dw = true;
    double diverge_at = 1e6;
};

struct FlowTrajectory {
    std::vector<FlowRecord> records;
    FlowState final_state;
    FlowStatus status = FlowStatus::completed;
    double failure_time = std::numeric_limits<double>::quiet_NaN();
    double failure_condition = std::numeric_limits<double>::quiet_NaN();
};

inline FlowTrajectory integrate_flow(const FlowState& init, const FlowOptions& o) {
    if (!(o.dt > 0.0)) throw ConfigError("dt must be positive");
    FlowTrajectory tr;
    const FlowRhsOptions ro{o.sigma2, o.rho, o.symmetrize_dw, o.symmetrize_dw};
    const long n = static_cast<long>(std::llround(o.t_end / o.dt));
    const long every = o.record_every < 1 ? 1 : o.record_every;
    auto record = [&](const FlowState& s) {
        FlowRecord r;
        r.time = s.time;
        r.diag = diagnostics(s);
        r.w_norm = s.w.norm();
        r.f_asym = detail::rel((s.f - s.f.transpose()).norm(), s.f.norm());
        tr.records.push_back(r);
    };
    FlowState s = init;
    record(s);
    for (long k = 1; k <= n; ++k) {
        try {
            s = flow_rk4_step(s, o.dt, ro);
        } catch (const SingularProjector& e) {
            tr.status = FlowStatus::singular;
            tr.failure_time = s.time;
            tr.failure_condition = e.condition;
            break;
        } catch (const DegenerateNorms&) {
            tr.status = FlowStatus::singular;
            tr.failure_time = s.time;
            break;
        } catch (const AsymmetricProjector&) {
            tr.status = FlowStatus::asymmetric;
            tr.failure_time = s.time;
            break;
        }
        if (!s.w.allFinite() || s.w.norm() > o.diverge_at) {
            tr.status = FlowStatus::diverged;
            tr.failure_time = s.time;
            record(s);
            break;
        }
        if (k % every == 0 || k == n) record(s);
    }
    tr.final_state = s;
    return tr;
}

struct CommutatorGap {
    double min_eig_k = 0.0;
    double comm_norm = 0.0;
};

inline constexpr int kMaxKroneckerDim = 16;

/// A (+) B = A (x) B + B (x) A.
inline Mat kron_sum(const Mat& a, const Mat& b) {
    return Eigen::kroneckerProduct(a, b).eval() + Eigen::kroneckerProduct(b, a).eval();
}

/// K such that vec(L)' = -K vec(L) for L = [F, W], assembled term by term.
inline Mat commutator_matrix(const FlowState& s, double sigma2, double rho) {
    const Eigen::Index h = s.w.rows();
    if (h > kMaxKroneckerDim) throw DimensionTooLarge("commutator_gap needs h <= 16");
    const NormDiagnostics nd = diagnostics(s);
    if (!(nd.n_phi > kDegenerateNorm) || !(nd.n_psi > kDegenerateNorm))
        throw DegenerateNorms("commutator_gap: N_Phi or N_Psi vanished");
    const double cond = condition_number(s.w);
    if (!(cond < kConditionGuard)) throw SingularProjector("W is numerically singular", s.time, cond);
    const Mat& w = s.w;
    const Mat& f = s.f;
    const Mat id = Mat::Identity(h, h);
    const Mat w2 = w * w;
    const double a = 1.0 / (1.0 + sigma2);
    const double c3 = a / (nd.n_phi * nd.n_psi * nd.n_psi * nd.n_psi);
    const double c1 = a / (nd.n_phi * nd.n_psi);
    const Mat t1 = kron_sum(w, w * f * w) + Eigen::kroneckerProduct(id, w2).eval() * kron_sum(f * w, id);
    const Mat t2 = kron_sum(w.inverse(), f) - kron_sum(w - nd.n_times * w2, id);
    return 2.0 * c3 * t1 + c1 * t2 + 3.0 * rho * Mat::Identity(h * h, h * h);
}

inline CommutatorGap commutator_gap(const FlowState& s, double sigma2, double rho) {
    const Mat k = commutator_matrix(s, sigma2, rho);
    const Mat ks = 0.5 * (k + k.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(ks, Eigen::EigenvaluesOnly);
    return {es.eigenvalues()[0], (s.f * s.w - s.w * s.f).norm()};
}

}  // namespace cosdyn
