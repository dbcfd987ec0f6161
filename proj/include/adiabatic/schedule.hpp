#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "circuits.hpp"

namespace adiabatic {

// g(b) = b^{3/4} exp(-A (sqrt(b) - 1)); equals xi(b)/xi(1).
inline double barrier_ratio(double b, double A) { return std::pow(b, 0.75) * std::exp(-A * (std::sqrt(b) - 1)); }

inline double barrier_ratio_log_derivative(double b, double A) { return 0.75 / b - A / (2 * std::sqrt(b)); }

inline double barrier_ratio_derivative(double b, double A) {
    return barrier_ratio(b, A) * barrier_ratio_log_derivative(b, A);
}

inline double barrier_ratio_second_derivative(double b, double A) {
    double l = barrier_ratio_log_derivative(b, A);
    return barrier_ratio(b, A) * (l * l + (-0.75 / (b * b) + A / (4 * std::pow(b, 1.5))));
}

// Bisection for a decreasing function on [lo, hi]; stops at machine resolution.
template <class F>
double bisect_decreasing(F&& g, double target, double lo, double hi) {
    for (int it = 0; it < 400; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (g(mid) > target)
            lo = mid;
        else
            hi = mid;
    }
    double glo = std::abs(g(lo) - target), ghi = std::abs(g(hi) - target);
    return glo <= ghi ? lo : hi;
}

inline double solve_B0(double delta, double A) {
    if (!(delta > 0 && delta <= 1)) throw ValidationError("delta must lie in (0, 1]");
    if (!(A > 1.5)) throw ValidationError("A must exceed 3/2 for a monotone barrier ratio");
    if (delta == 1) return 1.0;
    double hi = 2;
    while (barrier_ratio(hi, A) > delta) {
        hi *= 2;
        if (hi > 1e12) throw NumericalError("solve_B0: bracket failure");
    }
    return bisect_decreasing([A](double b) { return barrier_ratio(b, A); }, delta, 1.0, hi);
}

enum class DerivativeMode { paper_asymptotic, exact_implicit };

inline const char* to_string(DerivativeMode m) {
    return m == DerivativeMode::paper_asymptotic ? "paper-asymptotic" : "exact-implicit";
}

struct AnnealParams {
    double A = 10, B = 10.5565, F = pi / 3, E_C = 1;
    bool flux_override = false;

    double E_J() const { return A * A * E_C / 32; }
    double omega_q() const { return E_C * std::sqrt(2 / pi) * std::pow(A, 1.5) * std::exp(-A); }
    // zeta(1) = 2 E_alpha sin(F/2) = omega_q; equals omega_q at F = pi/3.
    double E_alpha() const { return omega_q() / (2 * std::sin(F / 2)); }
    double delta_B() const { return barrier_ratio(B, A); }

    static AnnealParams from_A_B(double A, double B, double E_C = 1) {
        AnnealParams p;
        p.A = A;
        p.B = B;
        p.E_C = E_C;
        p.validate();
        return p;
    }
    static AnnealParams from_delta(double delta, double A, double E_C = 1) { return from_A_B(A, solve_B0(delta, A), E_C); }

    Flags validate() const {
        Flags w;
        if (!(A >= 8)) throw ValidationError("A must be at least 8");
        if (!(B > 1)) throw ValidationError("B must exceed 1");
        if (!(E_C > 0)) throw ValidationError("E_C must be positive");
        if (!(delta_B() < 1)) throw ValidationError("delta_B must be below 1");
        if (std::abs(F - pi / 3) > 1e-15) {
            if (!flux_override) throw ValidationError("final flux F is fixed at pi/3 unless flux_override is set");
            if (!(F > 0 && F <= pi)) throw ValidationError("final flux F must lie in (0, pi]");
            w.push_back("final flux override F = " + std::to_string(F) + "; f'(s) diverges at s = 1 as F -> pi");
            if (F >= pi - 1e-12) w.push_back("F = pi: f'(1) is infinite");
        }
        return w;
    }
};

inline double xi(double b, const AnnealParams& p) {
    if (!(b >= 1)) throw ValidationError("xi requires b >= 1");
    double x = p.A * std::sqrt(b);
    return p.E_C * std::sqrt(2 / pi) * std::pow(x, 1.5) * std::exp(-x);
}

inline double omega_pl_paper(double b, const AnnealParams& p) { return p.E_C * p.A * std::sqrt(b / 8); }

inline double solve_f(double s, const AnnealParams& p = {}) {
    if (!(s >= 0 && s <= 1)) throw ValidationError("s must lie in [0, 1]");
    return 2 * std::asin(s * std::sin(p.F / 2));
}

inline double solve_b(double s, const AnnealParams& p) {
    if (!(s >= 0 && s <= 1)) throw ValidationError("s must lie in [0, 1]");
    const double target = 1 - s + p.delta_B();
    if (target >= 1) return 1.0;  // s <= delta_B: no root above b = 1
    if (s >= 1) return p.B;
    const double A = p.A;
    if (!(barrier_ratio(p.B, A) <= target))
        throw NumericalError("schedule infeasible: g(1) = 1, g(B) = " + std::to_string(barrier_ratio(p.B, A)));
    return bisect_decreasing([A](double b) { return barrier_ratio(b, A); }, target, 1.0, p.B);
}

struct SchedulePoint {
    double s = 0, b = 1, f = 0, b1 = 0, b2 = 0, f1 = 0, f2 = 0;
    double xi = 0, zeta = 0, omega_pl_paper = 0;
    double omega_pl_exact = std::numeric_limits<double>::quiet_NaN();
    double residual = 0;  // |g(b) - min(1, 1 - s + delta_B)|
};

struct Derivatives {
    double f1, f2, b1, b2;
};

inline Derivatives derivatives(double s, double b, const AnnealParams& p, DerivativeMode mode) {
    Derivatives d{};
    const double sf = std::sin(p.F / 2), q = 1 - s * s * sf * sf;
    d.f1 = 2 * sf / std::sqrt(q);
    d.f2 = 2 * sf * sf * sf * s / std::pow(q, 1.5);
    const double A = p.A;
    if (mode == DerivativeMode::paper_asymptotic) {
        const double e = std::exp(A * (std::sqrt(b) - 1));
        d.b1 = 2 / (A * std::pow(b, 0.25)) * e;
        d.b2 = 2 / (A * b) * e * e;
    } else {
        const double g1 = barrier_ratio_derivative(b, A), g2 = barrier_ratio_second_derivative(b, A);
        d.b1 = -1 / g1;
        d.b2 = -g2 * d.b1 * d.b1 / g1;
    }
    return d;
}

inline SchedulePoint schedule_point(double s, const AnnealParams& p, DerivativeMode mode) {
    SchedulePoint pt;
    pt.s = s;
    pt.b = solve_b(s, p);
    pt.f = solve_f(s, p);
    Derivatives d = derivatives(s, pt.b, p, mode);
    pt.f1 = d.f1;
    pt.f2 = d.f2;
    pt.b1 = d.b1;
    pt.b2 = d.b2;
    pt.xi = xi(pt.b, p);
    pt.zeta = 2 * p.E_alpha() * std::sin(pt.f / 2);
    pt.omega_pl_paper = omega_pl_paper(pt.b, p);
    pt.residual = std::abs(barrier_ratio(pt.b, p.A) - std::min(1.0, 1 - s + p.delta_B()));
    return pt;
}

inline CSFQParams csfq_params_at(const AnnealParams& p, const SchedulePoint& pt, double n_max, CsfqGauge gauge) {
    CSFQParams c;
    c.E_C = p.E_C;
    c.E_J = p.E_J();
    c.E_alpha = p.E_alpha();
    c.b = pt.b;
    c.f = pt.f;
    c.n_max = n_max;
    c.gauge = gauge;
    return c;
}

struct ScheduleGrid {
    AnnealParams params;
    DerivativeMode mode = DerivativeMode::exact_implicit;
    std::vector<SchedulePoint> points;
    Flags warnings;
};

// When n_max > 0 the exact P/Q gap of the CSFQ-sin Hamiltonian (d = 2) fills omega_pl_exact.
inline ScheduleGrid build_schedule(const AnnealParams& p, const std::vector<double>& s_grid, DerivativeMode mode,
                                   double n_max = 0) {
    ScheduleGrid g;
    g.params = p;
    g.mode = mode;
    g.warnings = p.validate();
    CsfqBasis basis;
    if (n_max > 0) basis = CsfqBasis::make(n_max, CsfqGauge::real);
    for (double s : s_grid) {
        SchedulePoint pt = schedule_point(s, p, mode);
        if (n_max > 0) {
            rvec e = lowest_eigenvalues(csfq_sin_from(basis, csfq_params_at(p, pt, n_max, CsfqGauge::real)).H, 3);
            pt.omega_pl_exact = e(2) - e(1);
        }
        g.points.push_back(pt);
    }
    return g;
}

inline std::vector<double> uniform_grid(double a, double b, int intervals) {
    if (intervals < 1) throw ValidationError("grid needs at least one interval");
    std::vector<double> s(intervals + 1);
    for (int i = 0; i <= intervals; ++i) s[i] = a + (b - a) * double(i) / intervals;
    s.back() = b;
    return s;
}

// Nodes on [0, s_star] equally spaced in log(1 - s + delta_B).
inline std::vector<double> anneal_grid(double s_star, double delta_B, int intervals) {
    if (intervals < 1) throw ValidationError("grid needs at least one interval");
    const double u0 = std::log(1 + delta_B), u1 = std::log(1 - s_star + delta_B);
    std::vector<double> s(intervals + 1);
    for (int i = 0; i <= intervals; ++i) s[i] = 1 + delta_B - std::exp(u0 + (u1 - u0) * double(i) / intervals);
    s.front() = 0;
    s.back() = s_star;
    return s;
}

}  // namespace adiabatic
