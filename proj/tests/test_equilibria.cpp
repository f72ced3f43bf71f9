#include <gtest/gtest.h>

#include <random>

#include "cosdyn/core_model.hpp"
#include "cosdyn/eigen_dynamics.hpp"
#include "cosdyn/equilibria.hpp"

using namespace cosdyn;

namespace {

EigenParams fig2(double rho, double n_phi, double n_psi) { return {n_phi, n_psi, 1.0, 0.1, rho}; }

double rhs_scale(const EquilibriumReport& rep, double x) { return std::max(1.0, rep.rhs.magnitude(x)); }

void expect_alternating(const EquilibriumReport& rep) {
    for (std::size_t i = 1; i < rep.roots.size(); ++i) {
        const auto& a = rep.roots[i - 1];
        const auto& b = rep.roots[i];
        EXPECT_LT(a.value, b.value);
        // the Stable relabel turns a near-merged pair into two saddles
        if (a.stability != Stability::saddle && b.stability != Stability::saddle) {
            EXPECT_NE(a.stability, b.stability);
        }
    }
}

}  // namespace

TEST(Polynomial, BasicsAndRoots) {
    const Polynomial p({-6.0, 11.0, -6.0, 1.0});  // (x-1)(x-2)(x-3)
    EXPECT_EQ(p.degree(), 3);
    EXPECT_DOUBLE_EQ(p(4.0), 6.0);
    EXPECT_DOUBLE_EQ(p.derivative()(0.0), 11.0);
    const auto r = real_roots(p);
    ASSERT_EQ(r.size(), 3u);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(r[i].value, i + 1.0, 1e-12);
    EXPECT_GE(p.root_bound(), 3.0);
}

TEST(Polynomial, DoubleRootMultiplicity) {
    const Polynomial p({0.0, 0.0, 1.0, -1.0});  // x^2 (1 - x)
    const auto r = real_roots(p);
    ASSERT_EQ(r.size(), 2u);
    EXPECT_EQ(r[0].value, 0.0);
    EXPECT_EQ(r[0].multiplicity, 2);
    EXPECT_NEAR(r[1].value, 1.0, 1e-14);
}

TEST(Polynomial, NoRealRoots) {
    EXPECT_TRUE(real_roots(Polynomial({1.0, 0.0, 1.0})).empty());
    EXPECT_TRUE(real_roots(Polynomial({3.0})).empty());
}

TEST(FindCos, CollapseExample) {
    const auto rep = find_equilibria_cos(fig2(0.5, 1.0, 1.0));
    ASSERT_EQ(rep.roots.size(), 2u);
    EXPECT_LT(rep.roots[0].value, 0.0);
    EXPECT_EQ(rep.roots[0].stability, Stability::unstable);
    EXPECT_EQ(rep.roots[1].value, 0.0);
    EXPECT_EQ(rep.roots[1].stability, Stability::stable);
    EXPECT_EQ(rep.regime, Regime::collapse);
}

TEST(FindCos, AcuteExample) {
    const auto rep = find_equilibria_cos(fig2(0.5, 0.5, 0.5));
    ASSERT_EQ(rep.roots.size(), 4u);
    EXPECT_EQ(rep.regime, Regime::acute);
    EXPECT_LT(rep.w_up_minus, 0.0);
    EXPECT_EQ(rep.w_down_zero, 0.0);
    EXPECT_LT(rep.w_down_zero, rep.w_up_plus);
    EXPECT_LT(rep.w_up_plus, rep.w_down_plus);
    const Stability want[] = {Stability::unstable, Stability::stable, Stability::unstable, Stability::stable};
    for (int i = 0; i < 4; ++i) EXPECT_EQ(rep.roots[i].stability, want[i]);
}

TEST(FindCos, StableExampleHasSaddle) {
    const auto rep = find_equilibria_cos(fig2(0.5, 0.25, 0.5));
    EXPECT_EQ(rep.regime, Regime::stable);
    EXPECT_TRUE(std::isfinite(rep.saddle));
    int saddles = 0;
    for (const auto& r : rep.roots) saddles += r.stability == Stability::saddle;
    EXPECT_GE(saddles, 1);
}

TEST(FindCos, ReferenceTable) {
    const double cells[6][3] = {{0.5, 1, 1}, {0.5, 1, 0.5}, {0.5, 0.5, 0.5}, {0.1, 1, 1}, {0.5, 0.25, 0.5}, {0.1, 0.25, 0.5}};
    const Regime want[6] = {Regime::collapse, Regime::collapse, Regime::acute, Regime::acute, Regime::stable, Regime::stable};
    for (int i = 0; i < 6; ++i) EXPECT_EQ(find_equilibria_cos(fig2(cells[i][0], cells[i][1], cells[i][2])).regime, want[i]) << i;
}

TEST(FindCos, DegenerateNormsRejected) {
    EXPECT_THROW(find_equilibria_cos(fig2(0.5, 0.0, 1.0)), DegenerateNorms);
}

TEST(FindCos, ResidualAndAlternationOnRandomParams) {
    Rng rng = derive_stream(0, 0);
    std::uniform_real_distribution<double> rho(0.0, 0.6), nrm(0.05, 2.0), nx(-1.0, 1.0), s2(0.0, 2.0);
    int checked = 0;
    for (int i = 0; i < 300; ++i) {
        const EigenParams q{nrm(rng), nrm(rng), nx(rng), s2(rng), rho(rng)};
        EquilibriumReport rep;
        try {
            rep = find_equilibria_cos(q);
        } catch (const UnclassifiableRootPattern&) {
            continue;
        }
        ++checked;
        bool has_zero = false;
        for (const auto& r : rep.roots) {
            EXPECT_LT(std::abs(reduced_rhs_cos(r.value, q)), 1e-9 * rhs_scale(rep, r.value));
            has_zero |= r.value == 0.0;
        }
        EXPECT_TRUE(has_zero);
        expect_alternating(rep);
    }
    EXPECT_GT(checked, 250);
}

TEST(FindCos, StabilityAgreesWithIntegration) {
    Rng rng = derive_stream(1, 0);
    std::uniform_real_distribution<double> rho(0.01, 0.6), nrm(0.2, 1.5);
    IntegrateOptions o;
    o.t_end = 5.0;
    o.dt = 1e-3;
    o.record_every = 100000;
    for (int i = 0; i < 50; ++i) {
        const EigenParams q{nrm(rng), nrm(rng), 1.0, 0.1, rho(rng)};
        const auto rep = find_equilibria_cos(q);
        for (const auto& r : rep.roots) {
            if (r.multiplicity != 1) continue;
            for (double eps : {-1e-3, 1e-3}) {
                const double w = integrate_eigen(r.value + eps, EigenRhsKind::reduced_cos, q, o).final_w();
                if (r.stability == Stability::stable) {
                    EXPECT_LT(std::abs(w - r.value), std::abs(eps));
                } else if (r.stability == Stability::unstable) {
                    EXPECT_FALSE(std::abs(w - r.value) <= std::abs(eps));  // NaN when diverged
                }
            }
        }
    }
}

TEST(FindL2, Cases) {
    auto rep = find_equilibria_l2(0.0, 0.0);
    ASSERT_EQ(rep.roots.size(), 2u);
    EXPECT_EQ(rep.roots[0].value, 0.0);
    EXPECT_EQ(rep.roots[0].multiplicity, 2);
    EXPECT_EQ(rep.roots[1].value, 1.0);

    rep = find_equilibria_l2(0.0, 0.25);
    ASSERT_EQ(rep.roots.size(), 2u);
    EXPECT_DOUBLE_EQ(rep.roots[1].value, 0.5);
    EXPECT_EQ(rep.roots[1].stability, Stability::saddle);
    EXPECT_EQ(rep.regime, Regime::stable);

    rep = find_equilibria_l2(0.0, 0.3);
    ASSERT_EQ(rep.roots.size(), 1u);
    EXPECT_EQ(rep.roots[0].stability, Stability::stable);
    EXPECT_EQ(rep.regime, Regime::collapse);

    rep = find_equilibria_l2(0.1, 0.1);
    ASSERT_EQ(rep.roots.size(), 3u);
    EXPECT_EQ(rep.regime, Regime::acute);
    EXPECT_NEAR(rep.w_down_plus, l2_upper_root(0.1, 0.1), 1e-15);
    EXPECT_NEAR(l2_collapse_threshold(0.1), 1.0 / 4.4, 1e-15);
}

TEST(Basins, AcuteIntervals) {
    const EigenParams q = fig2(0.5, 0.5, 0.5);
    const auto rep = find_equilibria_cos(q);
    const auto b = basin_intervals(rep);
    ASSERT_EQ(b.size(), 3u);
    EXPECT_EQ(b[0].fate, Fate::diverge);
    EXPECT_TRUE(std::isinf(b[0].lo));
    EXPECT_DOUBLE_EQ(b[0].hi, rep.w_up_minus);
    EXPECT_EQ(b[1].fate, Fate::collapse_to_zero);
    EXPECT_DOUBLE_EQ(b[1].hi, rep.w_up_plus);
    EXPECT_EQ(b[2].fate, Fate::converge_to);
    EXPECT_DOUBLE_EQ(b[2].target, rep.w_down_plus);
    EXPECT_DOUBLE_EQ(rep.collapse_lo, rep.w_up_minus);
    EXPECT_DOUBLE_EQ(rep.collapse_hi, rep.w_up_plus);

    IntegrateOptions o;
    o.t_end = 200.0;
    o.record_every = 100000;
    EXPECT_NEAR(integrate_eigen(rep.w_down_plus + 0.1, EigenRhsKind::reduced_cos, q, o).final_w(), rep.w_down_plus, 1e-6);
    EXPECT_EQ(integrate_eigen(rep.w_up_minus - 0.01, EigenRhsKind::reduced_cos, q, o).status, TrajectoryStatus::diverged);
}

TEST(Basins, CollapseIntervals) {
    const EigenParams q = fig2(0.5, 1.0, 1.0);
    const auto rep = find_equilibria_cos(q);
    const auto b = basin_intervals(rep);
    ASSERT_EQ(b.size(), 2u);
    EXPECT_EQ(b[1].fate, Fate::collapse_to_zero);
    EXPECT_TRUE(std::isinf(b[1].hi));
    IntegrateOptions o;
    o.t_end = 100.0;
    EXPECT_LT(std::abs(integrate_eigen(0.5, EigenRhsKind::reduced_cos, q, o).final_w()), 1e-4);
}

TEST(Basins, StableIntervals) {
    const auto rep = find_equilibria_cos(fig2(0.5, 0.25, 0.5));
    const auto b = basin_intervals(rep);
    ASSERT_EQ(b.size(), 4u);
    EXPECT_EQ(b[0].fate, Fate::diverge);
    EXPECT_EQ(b[1].fate, Fate::converge_to);
    EXPECT_EQ(b[2].fate, Fate::collapse_to_zero);
    EXPECT_EQ(b[3].fate, Fate::converge_to);
    EXPECT_DOUBLE_EQ(b[3].target, rep.w_down_plus);
}

TEST(AppendixC, ClosedFormAtZeroB) {
    const auto rep = appendix_c_roots({1.5, 0.0});
    const double x = std::pow(1.5, -0.25);
    ASSERT_EQ(rep.roots.size(), 3u);
    EXPECT_NEAR(rep.roots[0].value, -x, 1e-15);
    EXPECT_EQ(rep.roots[1].value, 0.0);
    EXPECT_EQ(rep.roots[1].multiplicity, 2);
    EXPECT_NEAR(rep.roots[2].value, x, 1e-15);
    EXPECT_NEAR(x, 0.90360, 1e-5);
    EXPECT_EQ(rep.root_count_with_multiplicity(), 4);
}

TEST(AppendixC, RootCountsAlongB) {
    EXPECT_EQ(appendix_c_roots({1.5, 0.4}).roots.size(), 4u);
    EXPECT_EQ(appendix_c_roots({1.5, 0.6}).roots.size(), 2u);
    EXPECT_THROW(appendix_c_roots({0.0, 0.1}), ConfigError);
    EXPECT_THROW(appendix_c_roots({1.0, -0.1}), ConfigError);
}

TEST(AppendixC, AgreesWithSearchAtZeroCross) {
    Rng rng = derive_stream(2, 0);
    std::uniform_real_distribution<double> ua(0.5, 10.0), ub(0.0, 1.5);
    for (int i = 0; i < 100; ++i) {
        const BifurcationParams bp{ua(rng), ub(rng)};
        const EigenParams q = params_from_bifurcation(bp);
        const auto back = bifurcation_params(q);
        EXPECT_NEAR(back.a_coef, bp.a_coef, 1e-12 * bp.a_coef);
        EXPECT_NEAR(back.b_coef, bp.b_coef, 1e-12);
        EquilibriumReport a, b;
        try {
            a = appendix_c_roots(bp);
            b = find_equilibria_cos(q);
        } catch (const UnclassifiableRootPattern&) {
            continue;
        }
        ASSERT_EQ(a.roots.size(), b.roots.size()) << bp.a_coef << " " << bp.b_coef;
        for (std::size_t k = 0; k < a.roots.size(); ++k) EXPECT_NEAR(a.roots[k].value, b.roots[k].value, 1e-9);
    }
}

TEST(RegimeScan, RayIsMonotone) {
    std::vector<Regime> seq;
    for (int i = 0; i <= 18; ++i) {
        const double s = 1.0 - 0.05 * i;
        seq.push_back(scan_cell(0.5, s, s, 1.0, 0.1, {}).regime);
    }
    EXPECT_EQ(seq.front(), Regime::collapse);
    EXPECT_EQ(seq.back(), Regime::stable);
    EXPECT_TRUE(regimes_monotone(seq));
    EXPECT_FALSE(regimes_monotone({Regime::acute, Regime::collapse}));
}

TEST(RegimeScan, ZeroDecayNeverCollapses) {
    for (double np : {0.2, 0.5, 1.0, 2.0})
        for (double ns : {0.2, 0.5, 1.0, 2.0}) {
            const auto c = scan_cell(0.0, np, ns, 1.0, 0.1, {});
            EXPECT_TRUE(c.error.empty());
            EXPECT_NE(c.regime, Regime::collapse);
        }
}

TEST(RegimeScan, GridOrderAndCorner) {
    const auto cells = regime_scan({0.1, 0.5}, {0.5, 1.0}, {0.5, 1.0}, 1.0, 0.1, {});
    ASSERT_EQ(cells.size(), 8u);
    EXPECT_EQ(cells[0].rho, 0.1);
    EXPECT_EQ(cells[7].rho, 0.5);
    EXPECT_EQ(cells[6].n_psi, 0.5);
    EXPECT_EQ(cells[6].regime, Regime::collapse);  // (0.5, 1.0, 0.5)
}
