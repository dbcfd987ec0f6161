#pragma once

#include <cmath>
#include <sstream>
#include <vector>

#include "paths.hpp"

namespace adiabatic {

struct BoundRow {
    double s = 0;
    double delta = 0, r = 0, tau = 0;
    double pHpQ = 0, pHpP = 0, Hp = 0, pHppQ = 0, Hpp = 0, ck_term = 0;
    double integrand_general = 0, integrand_jrs = 0, integrand_new = 0;
    double ck_lambda_min = 0;
    bool ck_pass = true;
};

struct Boundary {
    double at_start = 0, at_end = 0;
};

struct BoundReport {
    std::string path_name, derivative_mode;
    Index d = 1, dim = 0;
    BasisTag basis = BasisTag::abstract;
    double s_star = 1;
    std::vector<BoundRow> rows;
    double theta_general = 0, theta_jrs = 0, theta_new = 0;
    Boundary boundary_general, boundary_jrs, boundary_new;
    // every-other-node trapezoid totals and the largest relative change against the full grid
    double coarse_general = 0, coarse_jrs = 0, coarse_new = 0;
    double quadrature_change = 0;
    int refinements = 0;
    bool under_resolved = false;
    bool certificate_valid = true;
    Flags flags;
};

struct BoundOptions {
    double convergence = 0.01;
    int max_refinements = 3;
    double ck_tolerance = Tolerances{}.ck_relative;
    Tolerances tol{};
};

inline BoundRow bound_row(const OperatorPath& path, double s, const BoundOptions& o = {}) {
    PathSample smp = path.sample(s);
    SpectralSplit sp;
    try {
        sp = split_from(eigensystem_of(smp.H), path.d, o.tol);
    } catch (const GapClosureError& e) {
        std::ostringstream os;
        os.precision(17);
        os << "gap closes at s = " << s << ": " << e.what();
        throw GapClosureError(os.str(), e.lower, e.upper, s);
    }
    BoundRow r;
    r.s = s;
    r.delta = sp.gap_delta;
    r.r = sp.diameter_r;
    r.tau = tau(sp);
    CkList c = path.ck ? path.ck(s, smp) : CkList{};
    const cmat hpe = sp.vectors.adjoint() * smp.Hp * sp.vectors;
    BlockNorms bn = block_norms_eigenbasis(hpe, sp, c.k_max());
    r.pHpQ = bn.pxq;
    r.pHpP = bn.pxp;
    r.Hp = op_norm_hermitian(smp.Hp);
    const cmat hppe = sp.vectors.adjoint() * smp.Hpp * sp.vectors;
    r.pHppQ = op_norm(hppe.block(0, sp.d, sp.d, sp.dim() - sp.d));
    r.Hpp = op_norm_hermitian(smp.Hpp);
    if (!path.ck) c = CkList{r.Hp * r.Hp};
    double acc = 0;
    for (int k = 0; k <= c.k_max(); ++k) acc += c.c[k] * bn.pxhkq[k] * bn.pxhkq[k];
    r.ck_term = std::sqrt(acc);
    if (path.ck) {
        CkReport rep = verify_ck(HermitianOperator(smp.H, path.basis, 1e-10), HermitianOperator(smp.Hp, path.basis, 1e-10),
                                 c, o.ck_tolerance);
        r.ck_lambda_min = rep.lambda_min;
        r.ck_pass = rep.pass;
    }
    const double t = r.tau, dd = double(path.d), dl = r.delta;
    const double d32 = std::pow(dd, 1.5);
    r.integrand_general = t * t * t * (5 * r.pHpQ + 3 * r.pHpP) * r.pHpQ + t * t * r.pHppQ + 3 * t * t * t * r.ck_term;
    r.integrand_jrs = dd * r.Hpp / (dl * dl) + 7 * d32 * r.Hp * r.Hp / (dl * dl * dl);
    r.integrand_new = dd * r.pHppQ / (dl * dl) + d32 * r.pHpQ * (5 * r.pHpQ + 3 * r.pHpP + 3 * r.Hp) / (dl * dl * dl);
    return r;
}

namespace detail {

template <class F>
double trapezoid(const std::vector<BoundRow>& rows, F&& f, std::size_t stride) {
    double acc = 0;
    for (std::size_t i = stride; i < rows.size(); i += stride)
        acc += 0.5 * (rows[i].s - rows[i - stride].s) * (f(rows[i]) + f(rows[i - stride]));
    return acc;
}

inline void total(BoundReport& rep) {
    const BoundRow &a = rep.rows.front(), &b = rep.rows.back();
    auto bd = [&](const BoundRow& r) { return double(rep.d) / (r.delta * r.delta); };
    rep.boundary_general = {a.tau * a.tau * a.pHpQ, b.tau * b.tau * b.pHpQ};
    rep.boundary_jrs = {bd(a) * a.Hp, bd(b) * b.Hp};
    rep.boundary_new = {bd(a) * a.pHpQ, bd(b) * b.pHpQ};
    auto ig = [](const BoundRow& r) { return r.integrand_general; };
    auto ij = [](const BoundRow& r) { return r.integrand_jrs; };
    auto in = [](const BoundRow& r) { return r.integrand_new; };
    auto sum = [](const Boundary& x) { return x.at_start + x.at_end; };
    rep.theta_general = sum(rep.boundary_general) + trapezoid(rep.rows, ig, 1);
    rep.theta_jrs = sum(rep.boundary_jrs) + trapezoid(rep.rows, ij, 1);
    rep.theta_new = sum(rep.boundary_new) + trapezoid(rep.rows, in, 1);
    rep.quadrature_change = 0;
    if ((rep.rows.size() - 1) % 2 == 0 && rep.rows.size() >= 3) {
        rep.coarse_general = sum(rep.boundary_general) + trapezoid(rep.rows, ig, 2);
        rep.coarse_jrs = sum(rep.boundary_jrs) + trapezoid(rep.rows, ij, 2);
        rep.coarse_new = sum(rep.boundary_new) + trapezoid(rep.rows, in, 2);
        auto rel = [](double fine, double coarse) { return fine == 0 ? std::abs(coarse) : std::abs(fine - coarse) / std::abs(fine); };
        rep.quadrature_change = std::max({rel(rep.theta_general, rep.coarse_general), rel(rep.theta_jrs, rep.coarse_jrs),
                                          rel(rep.theta_new, rep.coarse_new)});
    } else {
        rep.quadrature_change = INFINITY;
    }
}

}  // namespace detail

// Evaluates all three timescales on the path grid restricted to [0, s_star]; refines by midpoint
// insertion until the every-other-node estimate agrees to the configured fraction.
inline BoundReport evaluate_bounds(const OperatorPath& path, double s_star, const BoundOptions& o = {}) {
    std::vector<double> grid;
    for (double s : path.s_grid)
        if (s < s_star) grid.push_back(s);
    if (grid.empty() || grid.front() != 0.0) grid.insert(grid.begin(), 0.0);
    grid.push_back(s_star);
    if (grid.size() % 2 == 0) {  // need an even number of intervals for the coarse comparison
        std::size_t i = grid.size() - 2;
        grid.insert(grid.begin() + long(i) + 1, 0.5 * (grid[i] + grid[i + 1]));
    }
    BoundReport rep;
    rep.path_name = path.name;
    rep.derivative_mode = path.derivative_mode;
    rep.d = path.d;
    rep.dim = path.dim();
    rep.basis = path.basis;
    rep.s_star = s_star;
    rep.flags = path.warnings;
    for (double s : grid) rep.rows.push_back(bound_row(path, s, o));
    detail::total(rep);
    while (rep.quadrature_change >= o.convergence && rep.refinements < o.max_refinements) {
        std::vector<BoundRow> fine;
        for (std::size_t i = 0; i < rep.rows.size(); ++i) {
            if (i > 0) fine.push_back(bound_row(path, 0.5 * (rep.rows[i - 1].s + rep.rows[i].s), o));
            fine.push_back(rep.rows[i]);
        }
        rep.rows = std::move(fine);
        ++rep.refinements;
        detail::total(rep);
    }
    rep.under_resolved = rep.quadrature_change >= o.convergence;
    if (rep.under_resolved) rep.flags.push_back("quadrature under-resolved: grid refinement changes theta by more than tolerance");
    for (const auto& r : rep.rows)
        if (!r.ck_pass) rep.certificate_valid = false;
    if (!rep.certificate_valid) rep.flags.push_back("invalid certificate: verify_ck failed at a sampled s");
    return rep;
}

inline BoundReport theta_general(const OperatorPath& path, double s_star, const BoundOptions& o = {}) {
    return evaluate_bounds(path, s_star, o);
}
inline BoundReport theta_jrs(const OperatorPath& path, double s_star, const BoundOptions& o = {}) {
    return evaluate_bounds(path, s_star, o);
}
inline BoundReport theta_new_bounded(const OperatorPath& path, double s_star, const BoundOptions& o = {}) {
    return evaluate_bounds(path, s_star, o);
}

struct ThetaProfilePoint {
    double s_star, theta_general, theta_jrs, theta_new;
};

// theta(s*) for every grid node s* of a report: boundary terms recomputed at each s*.
inline std::vector<ThetaProfilePoint> theta_profile(const BoundReport& rep) {
    std::vector<ThetaProfilePoint> out;
    double ig = 0, ij = 0, in = 0;
    const BoundRow& a = rep.rows.front();
    const double dd = double(rep.d);
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const BoundRow& r = rep.rows[i];
        if (i > 0) {
            const BoundRow& q = rep.rows[i - 1];
            const double h = 0.5 * (r.s - q.s);
            ig += h * (r.integrand_general + q.integrand_general);
            ij += h * (r.integrand_jrs + q.integrand_jrs);
            in += h * (r.integrand_new + q.integrand_new);
        }
        auto w = [dd](const BoundRow& x) { return dd / (x.delta * x.delta); };
        out.push_back({r.s, a.tau * a.tau * a.pHpQ + r.tau * r.tau * r.pHpQ + ig, w(a) * a.Hp + w(r) * r.Hp + ij,
                       w(a) * a.pHpQ + w(r) * r.pHpQ + in});
    }
    return out;
}

struct ClosedForms {
    double theta_jrs_asymptotic = 0, theta_new_asymptotic = 0, ratio = 0;
    double b_star = 1, h_x = 0, omega_pl = 0, log_argument = 0;
    Flags caveats;
};

// omega_pl <= 0 selects the paper convention E_C A sqrt(b/8) at b(s*).
inline ClosedForms csfq_closed_forms(const AnnealParams& p, double s_star, double omega_pl = 0) {
    p.validate();
    ClosedForms c;
    c.b_star = solve_b(s_star, p);
    c.omega_pl = omega_pl > 0 ? omega_pl : omega_pl_paper(c.b_star, p);
    const double u = 1 - s_star + p.delta_B();
    c.h_x = p.omega_q() * u;
    c.log_argument = c.h_x / c.omega_pl;
    if (!(c.log_argument < 1)) throw NumericalError("closed form outside its regime: (1-s*+delta_B) omega_q / omega_pl >= 1");
    c.theta_jrs_asymptotic = (11 / std::sqrt(2.0)) / (c.omega_pl * u);
    c.ratio = 1 / (-std::log(c.log_argument));
    c.theta_new_asymptotic = c.theta_jrs_asymptotic * c.ratio;
    c.caveats.push_back("constants beyond 11/sqrt(2) are order-unity; compare as trend ratios only");
    if (c.b_star < 2) c.caveats.push_back("b(s*) is not >> 1; asymptotic regime not reached");
    return c;
}

}  // namespace adiabatic
