#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "cosdyn/core_model.hpp"
#include "cosdyn/equilibria.hpp"
#include "cosdyn/mean_flow.hpp"
#include "cosdyn/parallel.hpp"

namespace cosdyn {

struct Summary {
    double median = 0.0;
    double p90 = 0.0;
    double mean = 0.0;
};

inline double quantile(std::vector<double> v, double q) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const std::size_t i = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(i);
    if (i + 1 >= v.size()) return v.back();
    return v[i] + frac * (v[i + 1] - v[i]);
}

inline Summary summarize(const std::vector<double>& v) {
    Summary s;
    s.median = quantile(v, 0.5);
    s.p90 = quantile(v, 0.9);
    double acc = 0.0;
    for (double x : v) acc += x;
    s.mean = v.empty() ? 0.0 : acc / static_cast<double>(v.size());
    return s;
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

/// Absolute deviations between both sides of the norm concentration
/// identities, one entry per draw of (x0, x).
struct NormConcentrationReport {
    int h = 0;
    int d = 0;
    std::vector<double> phi_view;    // |Phi x|^2/(h s2) vs |Phi|^2/h + |Phi x0|^2/(h s2)
    std::vector<double> psi_view;    // same with Psi and h^2
    std::vector<double> phi_anchor;  // |Phi x0|/sqrt(h s2) vs |Phi|/sqrt(h s2)
    std::vector<double> psi_anchor;  // same with Psi and h^2
    std::vector<double> phi_ratio;   // | |Phi x0| / |Phi| - 1 |
    Summary phi_view_s, psi_view_s, phi_anchor_s, psi_anchor_s, phi_ratio_s;
};

struct ConcentrationOptions {
    int n_samples = 4000;
    bool zero_anchor = false;  // x0 = 0 instead of N(0, I)
    int chunk = 512;
};

inline NormConcentrationReport check_norm_concentration(const ModelState& s, double sigma2,
                                                        const ConcentrationOptions& opt, Rng& rng) {
    if (!(sigma2 > 0.0)) throw ConfigError("norm concentration needs sigma2 > 0");
    NormConcentrationReport r;
    r.h = s.h();
    r.d = s.d();
    const double h = s.h();
    const double sig = std::sqrt(sigma2);
    const Mat psi = s.psi();
    const double nphi2 = s.phi.squaredNorm();
    const double npsi2 = psi.squaredNorm();
    for (int done = 0; done < opt.n_samples; done += opt.chunk) {
        const int m = std::min(opt.chunk, opt.n_samples - done);
        const Mat x0 = opt.zero_anchor ? Mat::Zero(r.d, m) : gaussian_matrix(r.d, m, 1.0, rng);
        const Mat x = x0 + gaussian_matrix(r.d, m, sig, rng);
        const Mat px0 = s.phi * x0, px = s.phi * x;
        const Mat sx0 = s.w * px0, sx = s.w * px;
        for (int i = 0; i < m; ++i) {
            const double a0 = px0.col(i).squaredNorm(), a = px.col(i).squaredNorm();
            const double b0 = sx0.col(i).squaredNorm(), b = sx.col(i).squaredNorm();
            r.phi_view.push_back(std::abs(a / (h * sigma2) - nphi2 / h - a0 / (h * sigma2)));
            r.psi_view.push_back(std::abs(b / (h * h * sigma2) - npsi2 / (h * h) - b0 / (h * h * sigma2)));
            r.phi_anchor.push_back(std::abs(std::sqrt(a0) - std::sqrt(nphi2)) / (std::sqrt(h) * sig));
            r.psi_anchor.push_back(std::abs(std::sqrt(b0) - std::sqrt(npsi2)) / (h * sig));
            r.phi_ratio.push_back(std::abs(std::sqrt(a0 / nphi2) - 1.0));
        }
    }
    r.phi_view_s = summarize(r.phi_view);
    r.psi_view_s = summarize(r.psi_view);
    r.phi_anchor_s = summarize(r.phi_anchor);
    r.psi_anchor_s = summarize(r.psi_anchor);
    r.phi_ratio_s = summarize(r.phi_ratio);
    return r;
}

/// Fresh initialization from cfg, then the deviation study.
inline NormConcentrationReport check_norm_concentration(const SimConfig& cfg, const ConcentrationOptions& opt,
                                                        std::uint64_t stream = 0) {
    cfg.validate();
    Rng rng = derive_stream(cfg.seed, stream);
    const ModelState s = init_params(cfg, rng);
    return check_norm_concentration(s, cfg.sigma2, opt, rng);
}

struct HvsHhatReport {
    int h = 0;
    int d = 0;
    long n_samples = 0;
    Mat h_mc;        // control-variate estimate of H
    Mat h_mc_plain;  // plain sample mean
    Mat h_hat;
    double rel_err = 0.0;
    double rel_err_plain = 0.0;
    /// Expected Monte Carlo contribution to each relative error (batch means).
    double noise = 0.0;
    double noise_plain = 0.0;
};

struct HvsHhatOptions {
    long n_samples = 100000;
    int batches = 20;
    int chunk = 1000;
};

/// Monte Carlo H against the closed-form drift. The control variate is the
/// per-sample term with both normalizers replaced by their concentrated
/// values; its expectation follows from Gaussian moment identities.
inline HvsHhatReport check_h_vs_hhat(const ModelState& s, double sigma2, const HvsHhatOptions& opt, Rng& rng) {
    HvsHhatReport r;
    r.h = s.h();
    r.d = s.d();
    r.n_samples = opt.n_samples;
    const Eigen::Index h = s.h();
    const Mat psi = s.psi();
    const double c = 1.0 + sigma2;
    const double np = s.phi.norm(), ns = psi.norm();
    if (!(np > kDegenerateNorm) || !(ns > kDegenerateNorm)) throw DegenerateNorms("H check: zero norm");
    const double ca = std::sqrt(c) * np, cb = std::sqrt(c) * ns;
    const double sig = std::sqrt(sigma2);

    // E[C] = Phi Psi^T/(ca cb) - c Psi (A + A^T + tr(A) I) Psi^T/(ca cb^3), A = Psi^T Phi.
    const Mat pp = psi * psi.transpose();
    const Mat phps = s.phi * psi.transpose();
    const double tr_a = (psi.transpose() * s.phi).trace();
    const Mat e_c = phps / (ca * cb) -
                    c * (pp * phps + phps.transpose() * pp + tr_a * pp) / (ca * cb * cb * cb);

    const int nb = std::max(1, opt.batches);
    std::vector<Mat> bdiff(nb, Mat::Zero(h, h)), bplain(nb, Mat::Zero(h, h));
    std::vector<long> bcount(nb, 0);
    long done = 0;
    while (done < opt.n_samples) {
        const int m = static_cast<int>(std::min<long>(opt.chunk, opt.n_samples - done));
        const int b = static_cast<int>((done * nb) / opt.n_samples);
        const Mat x0 = gaussian_matrix(r.d, m, 1.0, rng);
        Mat x = x0, xp = x0;
        if (sig > 0.0) {
            x += gaussian_matrix(r.d, m, sig, rng);
            xp += gaussian_matrix(r.d, m, sig, rng);
        }
        const Mat u = s.phi * xp;
        const Mat v = s.w * (s.phi * x);
        Mat zn(h, m), om(h, m), tu(h, m), tv(h, m), uc(h, m), vc(h, m);
        for (int i = 0; i < m; ++i) {
            const double nu = u.col(i).norm(), nv = v.col(i).norm();
            if (!(nu >= 1e-12) || !(nv >= 1e-12)) throw NormBlowup("H check: sample normalizer vanished", done + i);
            zn.col(i) = u.col(i) / nu;
            om.col(i) = v.col(i) / nv;
            const double al = om.col(i).dot(zn.col(i));
            tu.col(i) = al * om.col(i);
            uc.col(i) = u.col(i) / (ca * cb);
            vc.col(i) = v.col(i) * (v.col(i).dot(u.col(i)) / (ca * cb * cb * cb));
        }
        // Per-sample term z' w^T - (w^T z') w w^T, and the control u v^T/(ca cb) - (v^T u) v v^T/(ca cb^3).
        const Mat plain = zn * om.transpose() - tu * om.transpose();
        const Mat ctrl = uc * v.transpose() - vc * v.transpose();
        bplain[b] += plain;
        bdiff[b] += plain - ctrl;
        bcount[b] += m;
        done += m;
    }

    Mat sum_diff = Mat::Zero(h, h), sum_plain = Mat::Zero(h, h);
    for (int b = 0; b < nb; ++b) {
        sum_diff += bdiff[b];
        sum_plain += bplain[b];
    }
    const double n = static_cast<double>(opt.n_samples);
    r.h_mc = e_c + sum_diff / n;
    r.h_mc_plain = sum_plain / n;
    r.h_hat = compute_hhat(s, sigma2).h_hat;
    const double hn = r.h_hat.norm();
    r.rel_err = (r.h_mc - r.h_hat).norm() / hn;
    r.rel_err_plain = (r.h_mc_plain - r.h_hat).norm() / hn;

    auto noise_of = [&](const std::vector<Mat>& bs, const Mat& total) {
        if (nb < 2) return 0.0;
        const Mat mean = total / n;
        double ss = 0.0;
        for (int b = 0; b < nb; ++b) ss += (bs[b] / static_cast<double>(bcount[b]) - mean).squaredNorm();
        // Variance of a batch mean, scaled to the full-sample mean.
        return std::sqrt(ss / (nb - 1) / nb) / hn;
    };
    r.noise = noise_of(bdiff, sum_diff);
    r.noise_plain = noise_of(bplain, sum_plain);
    return r;
}

inline HvsHhatReport check_h_vs_hhat(const SimConfig& cfg, const HvsHhatOptions& opt, std::uint64_t stream = 0) {
    cfg.validate();
    Rng rng = derive_stream(cfg.seed, stream);
    const ModelState s = init_params(cfg, rng);
    return check_h_vs_hhat(s, cfg.sigma2, opt, rng);
}

/// Strictly decreasing errors, allowing at most one increase that is within
/// two noise standard deviations.
inline bool decreasing_with_tolerance(const std::vector<double>& err, const std::vector<double>& noise,
                                      int* inversions = nullptr) {
    int inv = 0;
    bool ok = true;
    for (std::size_t i = 1; i < err.size(); ++i) {
        if (err[i] < err[i - 1]) continue;
        ++inv;
        const double tol = 2.0 * std::hypot(noise[i], noise[i - 1]);
        if (err[i] - err[i - 1] > tol) ok = false;
    }
    if (inversions) *inversions = inv;
    return ok && inv <= 1;
}

struct Histogram {
    std::vector<double> edges;
    std::vector<long> counts;
};

inline Histogram histogram(const std::vector<double>& v, int bins, double lo, double hi) {
    Histogram hgm;
    hgm.counts.assign(bins, 0);
    for (int i = 0; i <= bins; ++i) hgm.edges.push_back(lo + (hi - lo) * i / bins);
    for (double x : v) {
        int k = static_cast<int>(std::floor((x - lo) / (hi - lo) * bins));
        k = std::clamp(k, 0, bins - 1);
        ++hgm.counts[k];
    }
    return hgm;
}

struct EigenInitReport {
    int d = 0, h = 0, trials = 0;
    double rho = 0.0, sigma2 = 0.0;
    std::vector<double> eigenvalues;  // pooled over trials
    Histogram hist;
    double n_phi = 0.0, n_psi = 0.0, n_times = 0.0;  // averaged over trials
    double w_up_minus = 0.0;                          // from the averaged norms
    std::vector<double> trial_w_up_minus;             // from each trial's norms
    long count_below = 0;
    long trial_count_below = 0;  // eigenvalues below their own trial's threshold
    int trials_with_any_below = 0;
    double fraction_below = 0.0;
    double mean_eigenvalue = 0.0;
};

struct EigenInitOptions {
    int trials = 20;
    int bins = 60;
    int threads = 1;
    std::uint64_t seed = 0;
    ClassifyOptions classify;
};

/// Spectrum of the symmetrized initial W against the left unstable root of
/// the reduced cosine dynamics at the initial norms.
inline EigenInitReport eigen_init_study(int d, int h, double rho, double sigma2, const EigenInitOptions& opt) {
    EigenInitReport r;
    r.d = d;
    r.h = h;
    r.trials = opt.trials;
    r.rho = rho;
    r.sigma2 = sigma2;
    SimConfig cfg;
    cfg.d = d;
    cfg.h = h;
    cfg.sigma2 = sigma2;
    cfg.rho = rho;
    cfg.symmetrize_w = true;
    cfg.validate();

    std::vector<Vec> eig(opt.trials);
    std::vector<NormDiagnostics> nd(opt.trials);
    parallel_for(static_cast<std::size_t>(opt.trials), opt.threads, [&](std::size_t t) {
        Rng rng = derive_stream(opt.seed, t);
        const ModelState s = init_params(cfg, rng);
        Eigen::SelfAdjointEigenSolver<Mat> es(s.w, Eigen::EigenvaluesOnly);
        eig[t] = es.eigenvalues();
        nd[t] = diagnostics(s);
    });

    for (int t = 0; t < opt.trials; ++t) {
        r.n_phi += nd[t].n_phi / opt.trials;
        r.n_psi += nd[t].n_psi / opt.trials;
        r.n_times += nd[t].n_times / opt.trials;
    }
    r.w_up_minus = find_equilibria_cos({r.n_phi, r.n_psi, r.n_times, sigma2, rho}, opt.classify).w_up_minus;

    for (int t = 0; t < opt.trials; ++t) {
        const double thr =
            find_equilibria_cos({nd[t].n_phi, nd[t].n_psi, nd[t].n_times, sigma2, rho}, opt.classify).w_up_minus;
        r.trial_w_up_minus.push_back(thr);
        bool any = false;
        for (Eigen::Index j = 0; j < eig[t].size(); ++j) {
            const double e = eig[t][j];
            r.eigenvalues.push_back(e);
            if (e < r.w_up_minus) {
                ++r.count_below;
                any = true;
            }
            if (e < thr) {
                ++r.trial_count_below;
                any = true;
            }
        }
        r.trials_with_any_below += any;
    }
    r.fraction_below = static_cast<double>(r.count_below) / static_cast<double>(r.eigenvalues.size());
    double acc = 0.0;
    for (double e : r.eigenvalues) acc += e;
    r.mean_eigenvalue = acc / static_cast<double>(r.eigenvalues.size());
    const double lo = std::min(r.w_up_minus, *std::min_element(r.eigenvalues.begin(), r.eigenvalues.end()));
    const double hi = *std::max_element(r.eigenvalues.begin(), r.eigenvalues.end());
    r.hist = histogram(r.eigenvalues, opt.bins, lo, hi);
    return r;
}

}  // namespace cosdyn
