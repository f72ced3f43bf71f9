#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "cosdyn/errors.hpp"

namespace cosdyn {

/// Real polynomial with ascending coefficients: c[0] + c[1] x + ...
struct Polynomial {
    std::vector<double> c;

    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs) : c(std::move(coeffs)) { trim(); }

    void trim() {
        while (!c.empty() && c.back() == 0.0) c.pop_back();
    }
    int degree() const { return static_cast<int>(c.size()) - 1; }

    double operator()(double x) const {
        double acc = 0.0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    /// sum |c_i| |x|^i, the natural rounding scale of p(x).
    double magnitude(double x) const {
        double acc = 0.0;
        const double ax = std::abs(x);
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * ax + std::abs(*it);
        return acc;
    }

    Polynomial derivative() const {
        std::vector<double> dc;
        for (std::size_t i = 1; i < c.size(); ++i) dc.push_back(static_cast<double>(i) * c[i]);
        return Polynomial(std::move(dc));
    }

    /// Fujiwara bound: every complex root has |z| <= bound.
    double root_bound() const {
        const int n = degree();
        if (n < 1) return 0.0;
        const double lead = c[n];
        double b = 0.0;
        for (int k = 1; k <= n; ++k) {
            double r = std::abs(c[n - k] / lead);
            if (k == n) r *= 0.5;
            b = std::max(b, std::pow(r, 1.0 / k));
        }
        return 2.0 * b;
    }
};

struct RealRoot {
    double value = 0.0;
    int multiplicity = 1;
};

namespace detail {

inline int sgn(double v) { return (v > 0.0) - (v < 0.0); }

inline bool near_zero(const Polynomial& p, double x) {
    return std::abs(p(x)) <= 64.0 * std::numeric_limits<double>::epsilon() * p.magnitude(x);
}

/// Root of a monotone polynomial on [a, b] with p(a), p(b) of opposite sign.
inline double refine_root(const Polynomial& p, const Polynomial& dp, double a, double b) {
    double fa = p(a);
    for (int it = 0; it < 400; ++it) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        const double fm = p(m);
        if (fm == 0.0) return m;
        if (sgn(fm) == sgn(fa)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    double x = 0.5 * (a + b);
    for (int it = 0; it < 4; ++it) {
        const double d = dp(x);
        if (d == 0.0) break;
        const double nx = x - p(x) / d;
        if (!(nx >= a && nx <= b) || std::abs(p(nx)) > std::abs(p(x))) break;
        x = nx;
    }
    return x;
}

inline std::vector<RealRoot> isolate(const Polynomial& p, double lo, double hi) {
    std::vector<RealRoot> out;
    const int n = p.degree();
    if (n < 1) return out;
    if (n == 1) {
        const double r = -p.c[0] / p.c[1];
        if (r >= lo && r <= hi) out.push_back({r, 1});
        return out;
    }
    const Polynomial dp = p.derivative();
    const std::vector<RealRoot> crit = isolate(dp, lo, hi);

    struct Node {
        double x;
        bool root;
        int mult;
    };
    std::vector<Node> nodes;
    nodes.push_back({lo, p(lo) == 0.0, 1});
    for (const auto& cp : crit) {
        if (cp.value <= lo || cp.value >= hi) continue;
        nodes.push_back({cp.value, near_zero(p, cp.value), cp.multiplicity + 1});
    }
    nodes.push_back({hi, p(hi) == 0.0, 1});

    for (const auto& nd : nodes)
        if (nd.root) out.push_back({nd.x, nd.mult});

    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        const Node& a = nodes[i];
        const Node& b = nodes[i + 1];
        if (a.root || b.root) continue;
        const double fa = p(a.x);
        const double fb = p(b.x);
        if (sgn(fa) * sgn(fb) < 0) out.push_back({refine_root(p, dp, a.x, b.x), 1});
    }
    std::sort(out.begin(), out.end(),
              [](const RealRoot& l, const RealRoot& r) { return l.value < r.value; });
    return out;
}

}  // namespace detail

/// All real roots of p in [lo, hi], ascending, with multiplicities.
/// Isolation uses the critical points of p (roots of p', recursively), so p
/// is monotone between consecutive nodes and each sign change holds one root.
inline std::vector<RealRoot> real_roots(const Polynomial& p, double lo, double hi) {
    if (p.degree() < 1) return {};
    std::vector<RealRoot> roots = detail::isolate(p, lo, hi);

    int odd = 0;
    for (const auto& r : roots) odd += r.multiplicity % 2;
    const int slo = detail::sgn(p(lo));
    const int shi = detail::sgn(p(hi));
    if (slo != 0 && shi != 0 && ((slo != shi) != (odd % 2 == 1)))
        throw BracketingFailure("real root isolation: sign-change parity mismatch");
    return roots;
}

inline std::vector<RealRoot> real_roots(const Polynomial& p) {
    const double b = p.root_bound();
    const double pad = 1.0 + 1e-6 * b;
    return real_roots(p, -b * pad - 1e-300, b * pad + 1e-300);
}

}  // namespace cosdyn
