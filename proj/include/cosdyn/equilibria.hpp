#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/Polynomials>

#include "cosdyn/eigen_dynamics.hpp"
#include "cosdyn/errors.hpp"
#include "cosdyn/polynomial.hpp"

namespace cosdyn {

enum class Stability { stable, unstable, saddle };
enum class Regime { collapse, acute, stable };
enum class Fate { diverge, collapse_to_zero, converge_to };

inline const char* to_string(Stability s) {
    switch (s) {
        case Stability::stable: return "stable";
        case Stability::unstable: return "unstable";
        default: return "saddle";
    }
}
inline const char* to_string(Regime r) {
    switch (r) {
        case Regime::collapse: return "Collapse";
        case Regime::acute: return "Acute";
        default: return "Stable";
    }
}
inline const char* to_string(Fate f) {
    switch (f) {
        case Fate::diverge: return "diverge";
        case Fate::collapse_to_zero: return "collapse_to_zero";
        default: return "converge_to";
    }
}

struct Root {
    double value = 0.0;
    Stability stability = Stability::stable;
    int multiplicity = 1;
};

struct Basin {
    double lo = 0.0;
    double hi = 0.0;
    Fate fate = Fate::collapse_to_zero;
    double target = 0.0;  // meaningful for converge_to
};

struct EquilibriumReport {
    std::vector<Root> roots;
    Regime regime = Regime::collapse;
    std::vector<Basin> basins;
    Polynomial rhs;
    double search_lo = 0.0;
    double search_hi = 0.0;
    /// (w_up_plus - w_down_0) / (w_down_plus - w_down_0) for four simple roots.
    double gap = std::numeric_limits<double>::quiet_NaN();

    static constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    double w_up_minus = nan;
    double w_down_zero = nan;
    double w_up_plus = nan;
    double w_down_plus = nan;
    double saddle = nan;

    /// Union of the collapse_to_zero basins.
    double collapse_lo = nan;
    double collapse_hi = nan;

    int root_count_with_multiplicity() const {
        int n = 0;
        for (const auto& r : roots) n += r.multiplicity;
        return n;
    }
};

struct ClassifyOptions {
    /// Middle pair counts as merged when the gap ratio falls below this.
    double stable_gap = 0.17;
};

namespace detail {

inline double probe_sign(const Polynomial& p, double x) {
    const double v = p(x);
    return (v > 0.0) - (v < 0.0);
}

inline std::vector<Root> label_roots(const Polynomial& p, const std::vector<RealRoot>& rr) {
    std::vector<Root> out;
    for (std::size_t i = 0; i < rr.size(); ++i) {
        const double x = rr[i].value;
        const double step = 1.0 + std::abs(x);
        const double left = i == 0 ? x - step : 0.5 * (rr[i - 1].value + x);
        const double right = i + 1 == rr.size() ? x + step : 0.5 * (x + rr[i + 1].value);
        const double sl = probe_sign(p, left), sr = probe_sign(p, right);
        Stability s = Stability::saddle;
        if (sl > 0 && sr < 0) s = Stability::stable;
        else if (sl < 0 && sr > 0) s = Stability::unstable;
        out.push_back({x, s, rr[i].multiplicity});
    }
    return out;
}

/// Basins from the sign of the rhs between consecutive roots.
inline std::vector<Basin> flow_basins(const Polynomial& p, const std::vector<Root>& roots) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> edges{-inf};
    for (const auto& r : roots) edges.push_back(r.value);
    edges.push_back(inf);

    auto fate_of = [](double target) {
        if (std::isinf(target)) return Basin{0, 0, Fate::diverge, target};
        if (target == 0.0) return Basin{0, 0, Fate::collapse_to_zero, 0.0};
        return Basin{0, 0, Fate::converge_to, target};
    };

    std::vector<Basin> out;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double lo = edges[i], hi = edges[i + 1];
        double mid;
        if (std::isinf(lo) && std::isinf(hi)) mid = 0.0;
        else if (std::isinf(lo)) mid = hi - (1.0 + std::abs(hi));
        else if (std::isinf(hi)) mid = lo + (1.0 + std::abs(lo));
        else mid = 0.5 * (lo + hi);
        const double s = probe_sign(p, mid);
        Basin b = fate_of(s > 0 ? hi : lo);
        b.lo = lo;
        b.hi = hi;
        out.push_back(b);
    }
    return out;
}

inline std::vector<Basin> merge_basins(const std::vector<Basin>& in) {
    std::vector<Basin> out;
    for (const auto& b : in) {
        if (!out.empty() && out.back().fate == b.fate &&
            (b.fate != Fate::converge_to || out.back().target == b.target) && out.back().hi == b.lo) {
            out.back().hi = b.hi;
            continue;
        }
        out.push_back(b);
    }
    return out;
}

inline void fill_collapse_interval(EquilibriumReport& rep) {
    for (const auto& b : rep.basins) {
        if (b.fate != Fate::collapse_to_zero) continue;
        if (std::isnan(rep.collapse_lo) || b.lo < rep.collapse_lo) rep.collapse_lo = b.lo;
        if (std::isnan(rep.collapse_hi) || b.hi > rep.collapse_hi) rep.collapse_hi = b.hi;
    }
}

}  // namespace detail

/// Regime from the labelled root pattern of the reduced cosine dynamics.
/// Also fills the named points and relabels a merged middle pair as saddle.
inline Regime classify_regime(EquilibriumReport& rep, const ClassifyOptions& opt = {}) {
    auto& r = rep.roots;
    const std::size_t n = r.size();
    int doubles = 0;
    for (const auto& x : r) doubles += x.multiplicity > 1;

    if (n == 2 && doubles == 0 && r[0].stability == Stability::unstable &&
        r[1].stability == Stability::stable) {
        rep.w_up_minus = r[0].value;
        rep.w_down_zero = r[1].value;
        return rep.regime = Regime::collapse;
    }
    if (n == 3 && doubles == 1 && r[0].stability == Stability::unstable &&
        r[1].stability == Stability::saddle && r[2].stability == Stability::stable) {
        rep.w_up_minus = r[0].value;
        rep.saddle = r[1].value;
        rep.w_down_zero = rep.w_up_plus = r[1].value;
        rep.w_down_plus = r[2].value;
        rep.gap = 0.0;
        return rep.regime = Regime::stable;
    }
    if (n == 4 && doubles == 0 && r[0].stability == Stability::unstable &&
        r[1].stability == Stability::stable && r[2].stability == Stability::unstable &&
        r[3].stability == Stability::stable) {
        rep.w_up_minus = r[0].value;
        rep.w_down_zero = r[1].value;
        rep.w_up_plus = r[2].value;
        rep.w_down_plus = r[3].value;
        rep.gap = (r[2].value - r[1].value) / (r[3].value - r[1].value);
        if (rep.gap < opt.stable_gap) {
            r[1].stability = r[2].stability = Stability::saddle;
            rep.saddle = r[2].value;
            return rep.regime = Regime::stable;
        }
        return rep.regime = Regime::acute;
    }
    std::string pat;
    for (const auto& x : r) pat += std::string(to_string(x.stability)) + " ";
    throw UnclassifiableRootPattern("unclassifiable equilibrium pattern: " + pat);
}

/// Basins for a classified cosine report. In the Stable regime the merged
/// saddle (and the sliver between its two members) is the only collapse set.
inline std::vector<Basin> basin_intervals(const EquilibriumReport& rep) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (rep.regime != Regime::stable) return detail::merge_basins(detail::flow_basins(rep.rhs, rep.roots));
    const double lo = rep.w_down_zero, hi = rep.w_up_plus;
    std::vector<Basin> out;
    out.push_back({-inf, rep.w_up_minus, Fate::diverge, -inf});
    out.push_back({rep.w_up_minus, lo, Fate::converge_to, rep.w_down_plus});
    out.push_back({lo, hi, Fate::collapse_to_zero, 0.0});
    out.push_back({hi, inf, Fate::converge_to, rep.w_down_plus});
    return out;
}

inline EquilibriumReport find_equilibria_cos(const EigenParams& q, const ClassifyOptions& opt = {}) {
    if (!(q.n_phi > 0.0) || !(q.n_psi > 0.0))
        throw DegenerateNorms("find_equilibria_cos needs positive norms");
    EquilibriumReport rep;
    rep.rhs = reduced_cos_polynomial(q);
    const double b = rep.rhs.root_bound() * (1.0 + 1e-6);
    rep.search_lo = -b;
    rep.search_hi = b;
    rep.roots = detail::label_roots(rep.rhs, real_roots(rep.rhs, -b, b));
    classify_regime(rep, opt);
    rep.basins = basin_intervals(rep);
    detail::fill_collapse_interval(rep);
    return rep;
}

inline EquilibriumReport find_equilibria_l2(double sigma2, double rho) {
    EquilibriumReport rep;
    rep.rhs = reduced_l2_polynomial(sigma2, rho);
    const double a = 1.0 + sigma2;
    const double disc = 1.0 - 4.0 * a * rho;
    std::vector<RealRoot> rr;
    if (rho == 0.0) {
        rr = {{0.0, 2}, {1.0 / a, 1}};
    } else if (disc > 0.0) {
        const double s = std::sqrt(disc);
        // Stable form of the two quadratic roots of a w^2 - w + rho.
        const double big = (1.0 + s) / (2.0 * a);
        const double small = rho / (a * big);
        rr = {{0.0, 1}, {small, 1}, {big, 1}};
    } else if (disc == 0.0) {
        rr = {{0.0, 1}, {1.0 / (2.0 * a), 2}};
    } else {
        rr = {{0.0, 1}};
    }
    std::sort(rr.begin(), rr.end(), [](auto& l, auto& r) { return l.value < r.value; });
    rep.roots = detail::label_roots(rep.rhs, rr);
    const std::size_t n = rep.roots.size();
    if (n == 1) rep.regime = Regime::collapse;
    else if (n == 3) rep.regime = Regime::acute;
    else rep.regime = Regime::stable;
    for (const auto& r : rep.roots)
        if (r.stability == Stability::saddle) rep.saddle = r.value;
    if (n == 3) {
        rep.w_up_plus = rep.roots[1].value;
        rep.w_down_plus = rep.roots[2].value;
    }
    rep.basins = detail::merge_basins(detail::flow_basins(rep.rhs, rep.roots));
    detail::fill_collapse_interval(rep);
    return rep;
}

/// Larger root of (1+sigma2) w^2 - w + rho, or NaN when none is real.
inline double l2_upper_root(double sigma2, double rho) {
    const double a = 1.0 + sigma2;
    const double disc = 1.0 - 4.0 * a * rho;
    if (disc < 0.0) return std::numeric_limits<double>::quiet_NaN();
    return (1.0 + std::sqrt(disc)) / (2.0 * a);
}

inline double l2_collapse_threshold(double sigma2) { return 1.0 / (4.0 * (1.0 + sigma2)); }

// Sextic normal form -A x^6 + x^2 - B x.

struct BifurcationParams {
    double a_coef = 1.0;
    double b_coef = 0.0;
};

inline BifurcationParams bifurcation_params(const EigenParams& q) {
    return {2.0 / (q.n_psi * q.n_psi), q.rho * (1.0 + q.sigma2) * q.n_phi * q.n_psi};
}

/// Cosine parameters (N_x = 0, sigma2 = 0, N_phi = 1) whose reduced rhs is
/// the normal form divided by N_phi N_psi.
inline EigenParams params_from_bifurcation(const BifurcationParams& bp) {
    EigenParams q;
    q.n_times = 0.0;
    q.sigma2 = 0.0;
    q.n_phi = 1.0;
    q.n_psi = std::sqrt(2.0 / bp.a_coef);
    q.rho = bp.b_coef / (q.n_phi * q.n_psi);
    return q;
}

inline Polynomial normal_form_polynomial(const BifurcationParams& bp) {
    return Polynomial({0.0, -bp.b_coef, 1.0, 0.0, 0.0, 0.0, -bp.a_coef});
}

/// Roots of the normal form. B = 0 is closed form; B > 0 goes through the
/// eigenvalues of the companion matrix of -A x^5 + x - B, then Newton.
inline EquilibriumReport appendix_c_roots(const BifurcationParams& bp, const ClassifyOptions& opt = {}) {
    if (!(bp.a_coef > 0.0)) throw ConfigError("A must be positive");
    if (!(bp.b_coef >= 0.0)) throw ConfigError("B must be non-negative");
    EquilibriumReport rep;
    rep.rhs = normal_form_polynomial(bp);
    std::vector<RealRoot> rr;
    if (bp.b_coef == 0.0) {
        const double x = std::pow(bp.a_coef, -0.25);
        rr = {{-x, 1}, {0.0, 2}, {x, 1}};
    } else {
        Eigen::Matrix<double, 6, 1> coeffs;
        coeffs << -bp.b_coef, 1.0, 0.0, 0.0, 0.0, -bp.a_coef;
        Eigen::PolynomialSolver<double, 5> solver(coeffs);
        const Polynomial q({-bp.b_coef, 1.0, 0.0, 0.0, 0.0, -bp.a_coef});
        const Polynomial dq = q.derivative();
        for (Eigen::Index i = 0; i < solver.roots().size(); ++i) {
            const std::complex<double> z = solver.roots()[i];
            if (std::abs(z.imag()) > 1e-7 * (1.0 + std::abs(z))) continue;
            double x = z.real();
            for (int it = 0; it < 6; ++it) {
                const double d = dq(x);
                if (d == 0.0) break;
                x -= q(x) / d;
            }
            rr.push_back({x, 1});
        }
        rr.push_back({0.0, 1});
        std::sort(rr.begin(), rr.end(), [](auto& l, auto& r) { return l.value < r.value; });
    }
    rep.roots = detail::label_roots(rep.rhs, rr);
    classify_regime(rep, opt);
    rep.basins = basin_intervals(rep);
    detail::fill_collapse_interval(rep);
    return rep;
}

struct ScanCell {
    double rho = 0.0;
    double n_phi = 0.0;
    double n_psi = 0.0;
    Regime regime = Regime::collapse;
    int n_roots = 0;
    double gap = std::numeric_limits<double>::quiet_NaN();
    std::string error;  // non-empty when the pattern could not be classified
};

inline ScanCell scan_cell(double rho, double n_phi, double n_psi, double n_times, double sigma2,
                          const ClassifyOptions& opt) {
    ScanCell c;
    c.rho = rho;
    c.n_phi = n_phi;
    c.n_psi = n_psi;
    try {
        const auto rep = find_equilibria_cos({n_phi, n_psi, n_times, sigma2, rho}, opt);
        c.regime = rep.regime;
        c.n_roots = static_cast<int>(rep.roots.size());
        c.gap = rep.gap;
    } catch (const NumericalError& e) {
        c.error = e.what();
    }
    return c;
}

/// Full tensor grid, rho outermost.
inline std::vector<ScanCell> regime_scan(const std::vector<double>& rhos, const std::vector<double>& n_phis,
                                         const std::vector<double>& n_psis, double n_times, double sigma2,
                                         const ClassifyOptions& opt = {}) {
    std::vector<ScanCell> out;
    for (double r : rhos)
        for (double a : n_phis)
            for (double b : n_psis) out.push_back(scan_cell(r, a, b, n_times, sigma2, opt));
    return out;
}

/// Regimes along a ray never step back (Collapse < Acute < Stable).
inline bool regimes_monotone(const std::vector<Regime>& seq) {
    for (std::size_t i = 1; i < seq.size(); ++i)
        if (static_cast<int>(seq[i]) < static_cast<int>(seq[i - 1])) return false;
    return true;
}

}  // namespace cosdyn
