#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "cosdyn/errors.hpp"

namespace cosdyn {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Rng = std::mt19937_64;

enum class LossKind { cosine, l2 };
enum class GradMode { mean_field, monte_carlo };

inline const char* to_string(LossKind k) { return k == LossKind::cosine ? "cosine" : "l2"; }
inline const char* to_string(GradMode g) {
    return g == GradMode::mean_field ? "mean_field" : "monte_carlo";
}

struct SimConfig {
    int d = 512;
    int h = 64;
    double sigma2 = 1.0;
    double rho = 0.005;
    double gamma = 0.05;
    long steps = 3000;
    std::uint64_t seed = 0;
    bool symmetrize_w = true;
    LossKind loss_kind = LossKind::cosine;
    GradMode grad_mode = GradMode::monte_carlo;
    int batch = 512;
    double momentum = 0.9;
    bool cosine_annealing = true;
    bool symmetric_loss = false;

    double alpha() const { return static_cast<double>(d) / static_cast<double>(h); }
    double horizon() const { return gamma * static_cast<double>(steps); }

    void validate() const {
        if (d < 1 || h < 1) throw ConfigError("d and h must be positive");
        if (!(sigma2 >= 0.0)) throw ConfigError("sigma2 must be >= 0");
        if (!(rho >= 0.0)) throw ConfigError("rho must be >= 0");
        if (!(gamma > 0.0)) throw ConfigError("gamma must be > 0");
        if (steps < 0) throw ConfigError("steps must be >= 0");
        if (batch < 1) throw ConfigError("batch must be positive");
        if (!(momentum >= 0.0 && momentum < 1.0)) throw ConfigError("momentum must lie in [0, 1)");
    }
};

/// Trainable parameters. Psi and F are always recomputed.
struct ModelState {
    Mat phi;  // h x d
    Mat w;    // h x h
    double time = 0.0;

    Mat psi() const { return w * phi; }
    Mat f() const { return phi * phi.transpose(); }
    int h() const { return static_cast<int>(phi.rows()); }
    int d() const { return static_cast<int>(phi.cols()); }
};

struct SamplePair {
    Vec x0;
    Vec x;
    Vec x_prime;
};

/// Column-major batch of pairs; column i is sample i.
struct PairBatch {
    Mat x0;
    Mat x;
    Mat x_prime;
    int size() const { return static_cast<int>(x.cols()); }
};

/// Independent stream for (seed, index). Same inputs give the same stream
/// regardless of scheduling, so serial and threaded runs agree.
inline Rng derive_stream(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                      0x636f7364u};
    return Rng(seq);
}

inline Mat gaussian_matrix(Eigen::Index rows, Eigen::Index cols, double stddev, Rng& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    Mat m(rows, cols);
    double* p = m.data();
    for (Eigen::Index i = 0; i < m.size(); ++i) p[i] = stddev * nd(rng);
    return m;
}

inline Vec gaussian_vector(Eigen::Index n, double stddev, Rng& rng) {
    return gaussian_matrix(n, 1, stddev, rng);
}

inline ModelState init_params(const SimConfig& cfg, Rng& rng) {
    ModelState s;
    s.phi = gaussian_matrix(cfg.h, cfg.d, 1.0 / std::sqrt(static_cast<double>(cfg.d)), rng);
    s.w = gaussian_matrix(cfg.h, cfg.h, 1.0 / std::sqrt(static_cast<double>(cfg.h)), rng);
    if (cfg.symmetrize_w) {
        Mat sym = 0.5 * (s.w + s.w.transpose());
        s.w = sym;
    }
    s.time = 0.0;
    return s;
}

/// Draws (x0, x, x') with x, x' ~ N(x0, sigma2 I). A given x0 is used as is.
inline SamplePair sample_pair(const std::optional<Vec>& given_x0, const SimConfig& cfg, Rng& rng) {
    if (!(cfg.sigma2 >= 0.0)) throw ConfigError("sigma2 must be >= 0");
    SamplePair p;
    if (given_x0) {
        if (given_x0->size() != cfg.d) throw ConfigError("x0 has wrong dimension");
        p.x0 = *given_x0;
    } else {
        p.x0 = gaussian_vector(cfg.d, 1.0, rng);
    }
    const double s = std::sqrt(cfg.sigma2);
    if (s == 0.0) {
        p.x = p.x0;
        p.x_prime = p.x0;
    } else {
        p.x = p.x0 + gaussian_vector(cfg.d, s, rng);
        p.x_prime = p.x0 + gaussian_vector(cfg.d, s, rng);
    }
    return p;
}

inline PairBatch sample_batch(const SimConfig& cfg, int n, Rng& rng) {
    if (!(cfg.sigma2 >= 0.0)) throw ConfigError("sigma2 must be >= 0");
    PairBatch b;
    b.x0 = gaussian_matrix(cfg.d, n, 1.0, rng);
    const double s = std::sqrt(cfg.sigma2);
    if (s == 0.0) {
        b.x = b.x0;
        b.x_prime = b.x0;
    } else {
        b.x = b.x0 + gaussian_matrix(cfg.d, n, s, rng);
        b.x_prime = b.x0 + gaussian_matrix(cfg.d, n, s, rng);
    }
    return b;
}

inline PairBatch to_batch(const SamplePair& p) {
    PairBatch b;
    b.x0 = p.x0;
    b.x = p.x;
    b.x_prime = p.x_prime;
    return b;
}

}  // namespace cosdyn
