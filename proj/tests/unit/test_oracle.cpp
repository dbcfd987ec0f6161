#include <gtest/gtest.h>

#include "adiabatic/oracle.hpp"

using namespace adiabatic;

namespace {

// eigenvectors of the grid well with stiffness E_J b, signs aligned with a reference set
cmat well_states(double ej, double b, const PhaseGrid& g, int count, const cmat* ref = nullptr) {
    Eigensystem es = eigensystem_of(build_harmonic_well(1.0, ej * b, 0, g).matrix());
    cmat v = es.vectors.leftCols(count);
    for (int j = 0; j < count; ++j) {
        cd z = ref ? ref->col(j).dot(v.col(j)) : v.col(j).sum();
        v.col(j) *= std::conj(z) / std::abs(z);
    }
    return v;
}

}  // namespace

TEST(Dilation, MatrixElements) {
    const double b = 2.5, bp = 0.7;
    rmat g = dilation_generator(b, bp, 8);
    EXPECT_NEAR(g(2, 0), std::sqrt(2.0) * bp / (4 * b), 1e-15);
    EXPECT_NEAR(g(4, 2), std::sqrt(12.0) * bp / (4 * b), 1e-15);
    EXPECT_EQ(g(1, 0), 0);
    EXPECT_EQ(g(3, 0), 0);
    EXPECT_LT((g + g.transpose()).cwiseAbs().maxCoeff(), 1e-16);
    EXPECT_EQ(dilation_generator(b, 0, 8).cwiseAbs().maxCoeff(), 0);
    EXPECT_THROW(dilation_generator(0.5, 1, 8), ValidationError);
    EXPECT_THROW(dilation_generator(2, 1, 1), ValidationError);
}

TEST(Dilation, PhysicalCouplingMatchesGridEigenstates) {
    // <k_b | d/db m_b> = (a^dagger^2 - a^2)_km / (8b) for a width scaling as b^{-1/4}
    PhaseGrid g{3 * pi, 600};
    const double ej = 100.0 / 32;
    rmat sq = squeeze_operator(6);
    for (double b : {1.0, 3.0, 8.0}) {
        const double h = 1e-4 * b;
        cmat v0 = well_states(ej, b, g, 5);
        cmat vp = well_states(ej, b + h, g, 5, &v0), vm = well_states(ej, b - h, g, 5, &v0);
        cmat dv = (vp - vm) / (2 * h);
        for (int k = 0; k < 5; ++k)
            for (int m = 0; m < 5; ++m) {
                if (k == m) continue;
                const double got = std::abs(v0.col(k).dot(dv.col(m)));
                EXPECT_NEAR(got, std::abs(sq(k, m)) / (8 * b), 2e-3 / b) << b << " " << k << " " << m;
            }
    }
}

TEST(WellFrequencyTest, SplineMatchesDirectGap) {
    AnnealParams p = AnnealParams::from_delta(1e-6, 10);
    PhaseGrid g{};
    WellFrequency w(p, g);
    for (double b : {1.0, 1.37, 2.9, 5.01, p.B}) {
        const double direct = discrete_well_gap(p.E_C, p.E_J() * b, g);
        EXPECT_NEAR(w(b), direct, 1e-7 * direct) << b;
        EXPECT_GT(w(b) / w.continuum(b), 0.98);
        EXPECT_LT(w(b) / w.continuum(b), 1.0);
    }
    const double b = 2.2, h = 1e-5;
    EXPECT_NEAR(w.derivative(b), (w(b + h) - w(b - h)) / (2 * h), 1e-6 * w.derivative(b));
}

TEST(Oracle, NormConservedAndConverged) {
    AnnealParams p = AnnealParams::from_delta(1e-6, 10);
    OracleResult r = brute_force_leakage(p, 1e3 * appendix_trend(p.A, p.B));
    EXPECT_LT(r.norm_defect, 1e-8);
    EXPECT_LT(r.m_max_change, 0.02);
    EXPECT_FALSE(r.flagged);
    EXPECT_GT(r.delta_c_norm, 0);
    ASSERT_FALSE(r.profile.empty());
    EXPECT_NEAR(r.profile.back().s, 1, 1e-12);
    EXPECT_NEAR(r.profile.back().delta_c, r.delta_c_norm, 1e-15);
}

TEST(Oracle, InverseTimeScaling) {
    AnnealParams p = AnnealParams::from_delta(1e-6, 12);
    const double t = appendix_trend(p.A, p.B);
    OracleResult a = brute_force_leakage(p, 1e3 * t), b = brute_force_leakage(p, 1e4 * t);
    EXPECT_NEAR(a.delta_c_norm / b.delta_c_norm, 10, 0.5);
    EXPECT_NEAR(a.scaled_constant / b.scaled_constant, 1, 0.05);
}

TEST(Oracle, EarlyStopLeaksLess) {
    AnnealParams p = AnnealParams::from_delta(1e-6, 10);
    OracleOptions o;
    o.s_end = 0.5;
    const double tf = 1e3 * appendix_trend(p.A, p.B);
    EXPECT_LT(brute_force_leakage(p, tf, o).delta_c_norm, brute_force_leakage(p, tf).delta_c_norm);
}

TEST(Oracle, Validation) {
    AnnealParams p;
    EXPECT_THROW(brute_force_leakage(p, 0), ValidationError);
    OracleOptions o;
    o.m_max = 4;
    EXPECT_THROW(brute_force_leakage(p, 1, o), ValidationError);
    o = {};
    o.s_end = 1.5;
    EXPECT_THROW(brute_force_leakage(p, 1, o), ValidationError);
}

TEST(Oracle, AgreesWithGridPropagatorEarlyInAnneal) {
    AnnealParams p = AnnealParams::from_delta(1e-6, 10);
    PhaseGrid g{3 * pi, 64};
    WellLeakage w = compare_well_leakage(p, 200, 0.5, g);
    EXPECT_GT(w.ratio, 0.5);
    EXPECT_LT(w.ratio, 2.0);
}

TEST(Trend, MonotoneInBarrier) {
    for (double A : {10.0, 12.0, 14.0}) {
        double prev = 0;
        for (double B = 2; B < 12; B += 0.5) {
            const double t = appendix_trend(A, B);
            EXPECT_GT(t, prev);
            prev = t;
        }
    }
    EXPECT_NEAR(appendix_trend(10, 1), 0.01, 1e-15);
}

TEST(Trend, AppendixTermRatio) {
    for (double A : {10.0, 12.0, 14.0})
        for (double d : {1e-9, 1e-6}) {
            AppendixScaling a = appendix_scaling(AnnealParams::from_delta(d, A));
            const double expect = A * std::sqrt(a.B);
            EXPECT_NEAR(a.term_ratio / expect, 1, 0.3) << A << " " << d;
            EXPECT_NEAR(a.subleading / a.subleading_asymptotic, 1, 0.3);
            EXPECT_NEAR(a.subleading_asymptotic / a.subleading_printed, 2, 1e-14);
        }
}
