#pragma once

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "cosdyn/core_model.hpp"
#include "cosdyn/errors.hpp"

namespace cosdyn {

inline constexpr double kNormFloor = 1e-12;

struct LossReport {
    double loss_value = 0.0;
    double reg_value = 0.0;
    double total = 0.0;
};

struct GradientSample {
    Vec z_prime;
    Vec omega;
    double alignment = 0.0;
};

struct Gradients {
    Mat phi;  // h x d
    Mat w;    // h x h
};

inline double weight_decay(const ModelState& s, double rho) {
    return 0.5 * rho * (s.phi.squaredNorm() + s.w.squaredNorm());
}

namespace detail {

inline Vec checked_col_norms(const Mat& m, const char* what) {
    Vec n = m.colwise().norm().transpose();
    for (Eigen::Index i = 0; i < n.size(); ++i)
        if (!(n[i] >= kNormFloor)) throw NormBlowup(std::string("normalizer below floor: ") + what, i);
    return n;
}

/// -mean cos(W Phi x_i, t_i) with targets t_i treated as constants.
inline double cosine_objective(const Mat& phi, const Mat& w, const Mat& x, const Mat& targets) {
    const Mat q = w * (phi * x);
    const Vec qn = checked_col_norms(q, "||W Phi x||");
    const Vec tn = checked_col_norms(targets, "||Phi x'||");
    double acc = 0.0;
    for (Eigen::Index i = 0; i < q.cols(); ++i) acc += q.col(i).dot(targets.col(i)) / (qn[i] * tn[i]);
    return -acc / static_cast<double>(q.cols());
}

inline double l2_objective(const Mat& phi, const Mat& w, const Mat& x, const Mat& targets) {
    const Mat r = w * (phi * x) - targets;
    return 0.5 * r.squaredNorm() / static_cast<double>(x.cols());
}

/// Gradient of cosine_objective (no decay) w.r.t. (Phi, W), targets frozen.
inline Gradients cosine_objective_grad(const Mat& phi, const Mat& w, const Mat& x, const Mat& targets) {
    const Mat p = phi * x;
    const Mat q = w * p;
    const Vec qn = checked_col_norms(q, "||W Phi x||");
    const Vec tn = checked_col_norms(targets, "||Phi x'||");
    const double n = static_cast<double>(x.cols());
    Mat g(q.rows(), q.cols());  // d objective / d q_i
    for (Eigen::Index i = 0; i < q.cols(); ++i) {
        const Vec qh = q.col(i) / qn[i];
        const Vec th = targets.col(i) / tn[i];
        const double a = qh.dot(th);
        g.col(i) = -(th - a * qh) / (qn[i] * n);
    }
    Gradients out;
    out.w = g * p.transpose();
    out.phi = w.transpose() * g * x.transpose();
    return out;
}

inline Gradients l2_objective_grad(const Mat& phi, const Mat& w, const Mat& x, const Mat& targets) {
    const Mat p = phi * x;
    const Mat g = (w * p - targets) / static_cast<double>(x.cols());
    Gradients out;
    out.w = g * p.transpose();
    out.phi = w.transpose() * g * x.transpose();
    return out;
}

inline void add_decay(Gradients& g, const ModelState& s, double rho) {
    g.phi += rho * s.phi;
    g.w += rho * s.w;
}

}  // namespace detail

inline LossReport make_report(double loss, double reg) { return {loss, reg, loss + reg}; }

inline LossReport cosine_loss(const ModelState& s, const PairBatch& b, double rho, bool symmetric = false) {
    double v = detail::cosine_objective(s.phi, s.w, b.x, s.phi * b.x_prime);
    if (symmetric) v = 0.5 * (v + detail::cosine_objective(s.phi, s.w, b.x_prime, s.phi * b.x));
    return make_report(v, weight_decay(s, rho));
}

inline LossReport l2_loss(const ModelState& s, const PairBatch& b, double rho, bool symmetric = false) {
    double v = detail::l2_objective(s.phi, s.w, b.x, s.phi * b.x_prime);
    if (symmetric) v = 0.5 * (v + detail::l2_objective(s.phi, s.w, b.x_prime, s.phi * b.x));
    return make_report(v, weight_decay(s, rho));
}

inline GradientSample gradient_sample(const ModelState& s, const SamplePair& p) {
    GradientSample g;
    const Vec zp = s.phi * p.x_prime;
    const Vec om = s.w * (s.phi * p.x);
    const double nz = zp.norm(), no = om.norm();
    if (!(nz >= kNormFloor) || !(no >= kNormFloor)) throw NormBlowup("normalizer below floor");
    g.z_prime = zp / nz;
    g.omega = om / no;
    g.alignment = g.omega.dot(g.z_prime);
    return g;
}

/// Stop-gradient on the x' branch; includes the decay terms.
inline Gradients grad_cosine(const ModelState& s, const PairBatch& b, double rho, bool symmetric = false) {
    Gradients g = detail::cosine_objective_grad(s.phi, s.w, b.x, s.phi * b.x_prime);
    if (symmetric) {
        const Gradients g2 = detail::cosine_objective_grad(s.phi, s.w, b.x_prime, s.phi * b.x);
        g.phi = 0.5 * (g.phi + g2.phi);
        g.w = 0.5 * (g.w + g2.w);
    }
    detail::add_decay(g, s, rho);
    return g;
}

inline Gradients grad_l2(const ModelState& s, const PairBatch& b, double rho, bool symmetric = false) {
    Gradients g = detail::l2_objective_grad(s.phi, s.w, b.x, s.phi * b.x_prime);
    if (symmetric) {
        const Gradients g2 = detail::l2_objective_grad(s.phi, s.w, b.x_prime, s.phi * b.x);
        g.phi = 0.5 * (g.phi + g2.phi);
        g.w = 0.5 * (g.w + g2.w);
    }
    detail::add_decay(g, s, rho);
    return g;
}

/// Cosine gradient with the normalizers replaced by their concentrated
/// values sqrt(1+s2) N_Phi and sqrt(1+s2) N_Psi.
inline Gradients mean_field_grad_cosine(const ModelState& s, double sigma2, double rho) {
    const Mat f = s.f();
    const double np = s.phi.norm();
    const double ns = s.psi().norm();
    if (!(np > kNormFloor) || !(ns > kNormFloor)) throw DegenerateNorms("mean-field gradient: zero norm");
    const double nx = (s.w * f).trace() / (np * ns);
    const double a = 1.0 / (1.0 + sigma2);
    const Mat wf = s.w * f;
    const Mat wfw2 = wf * (s.w + s.w.transpose());  // W F (W + W^T)
    const double n3 = np * ns * ns * ns;
    // Negative W-gradient, before decay.
    const Mat neg_w = a * (f / (np * ns) - wfw2 * f / n3 - nx * wf / (ns * ns));
    const Mat wphi = s.w * s.phi;
    const Mat neg_phi = a * s.w.transpose() * (s.phi / (np * ns) - wfw2 * s.phi / n3 - nx * wphi / (ns * ns));
    Gradients g{-neg_phi, -neg_w};
    detail::add_decay(g, s, rho);
    return g;
}

/// Exact population gradient of the L2 loss.
inline Gradients mean_field_grad_l2(const ModelState& s, double sigma2, double rho) {
    const Mat f = s.f();
    const double a = 1.0 + sigma2;
    Gradients g;
    g.w = a * s.w * f - f;
    g.phi = s.w.transpose() * (a * s.w * s.phi - s.phi);
    detail::add_decay(g, s, rho);
    return g;
}

/// Heavy-ball SGD: v <- mu v + g, theta <- theta - lr v.
class MomentumSgd {
public:
    explicit MomentumSgd(double mu = 0.9) : mu_(mu) {}

    void apply(ModelState& s, const Gradients& g, double lr) {
        if (vphi_.size() == 0) {
            vphi_ = Mat::Zero(s.phi.rows(), s.phi.cols());
            vw_ = Mat::Zero(s.w.rows(), s.w.cols());
        }
        vphi_ = mu_ * vphi_ + g.phi;
        vw_ = mu_ * vw_ + g.w;
        s.phi -= lr * vphi_;
        s.w -= lr * vw_;
    }

private:
    double mu_;
    Mat vphi_;
    Mat vw_;
};

inline double cosine_annealed_lr(double lr0, long step, long total) {
    if (total <= 0) return lr0;
    return 0.5 * lr0 * (1.0 + std::cos(std::numbers::pi * static_cast<double>(step) / static_cast<double>(total)));
}

inline Gradients selected_gradient(const ModelState& s, const SimConfig& cfg, Rng& rng) {
    if (cfg.grad_mode == GradMode::mean_field)
        return cfg.loss_kind == LossKind::cosine ? mean_field_grad_cosine(s, cfg.sigma2, cfg.rho)
                                                 : mean_field_grad_l2(s, cfg.sigma2, cfg.rho);
    const PairBatch b = sample_batch(cfg, cfg.batch, rng);
    return cfg.loss_kind == LossKind::cosine ? grad_cosine(s, b, cfg.rho, cfg.symmetric_loss)
                                             : grad_l2(s, b, cfg.rho, cfg.symmetric_loss);
}

/// One optimizer update on a fresh batch; advances time by gamma.
inline ModelState sgd_step(const ModelState& s, const SimConfig& cfg, Rng& rng, double lr, MomentumSgd& opt) {
    if (!(lr >= 0.0)) throw ConfigError("learning rate must be >= 0");
    ModelState next = s;
    opt.apply(next, selected_gradient(s, cfg, rng), lr);
    next.time = s.time + cfg.gamma;
    return next;
}

/// Stateless variant: a fresh momentum buffer, i.e. a plain gradient step.
inline ModelState sgd_step(const ModelState& s, const SimConfig& cfg, Rng& rng, double lr) {
    MomentumSgd opt(cfg.momentum);
    return sgd_step(s, cfg, rng, lr, opt);
}

}  // namespace cosdyn
