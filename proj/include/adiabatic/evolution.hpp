#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <vector>

#include "bounds.hpp"

namespace adiabatic {

// exp(-i t K) v for Hermitian K given by its action; Lanczos with full reorthogonalization,
// stopping on the usual a-posteriori estimate and substepping when the basis runs out.
class KrylovExp {
public:
    explicit KrylovExp(int max_dim = 30, double tol = 1e-13) : mmax_(max_dim), tol_(tol) {}

    template <class MatVec>
    cvec apply(MatVec&& kv, double t, cvec v) {
        const Index n = v.size();
        const int mcap = int(std::min<Index>(mmax_, n));
        basis_.resize(n, mcap + 1);
        rvec al(mcap), be(mcap);
        cvec w(n);
        double remaining = t;
        int substeps = 0;
        while (remaining > 0) {
            if (++substeps > 4096) throw NumericalError("Krylov exponential failed to advance");
            const double beta = v.norm();
            if (beta == 0) return v;
            basis_.col(0) = v / beta;
            int m = 0;
            bool exact = false, done = false;
            for (; m < mcap; ++m) {
                kv(basis_.col(m), w);
                auto vm = basis_.leftCols(m + 1);
                cvec h = vm.adjoint() * w;
                w.noalias() -= vm * h;
                cvec h2 = vm.adjoint() * w;
                w.noalias() -= vm * h2;
                al(m) = (h(m) + h2(m)).real();
                be(m) = w.norm();
                if (be(m) <= 1e-14 * std::max(1.0, std::abs(al(m)))) {
                    exact = true;
                    ++m;
                    break;
                }
                basis_.col(m + 1) = w / be(m);
                if (m >= 2) {
                    cvec y = small_exp(al, be, m + 1, remaining);
                    if (beta * be(m) * std::abs(y(m)) < tol_ * remaining / t) {
                        v = beta * (basis_.leftCols(m + 1) * y);
                        done = true;
                        break;
                    }
                }
            }
            if (done) break;
            double tau = remaining;
            cvec y;
            // the estimate bottoms out at round-off, so the target never drops below it
            const double floor = 64 * std::numeric_limits<double>::epsilon() * beta;
            for (int halvings = 0;; ++halvings) {
                y = small_exp(al, be, m, tau);
                if (exact || beta * be(m - 1) * std::abs(y(m - 1)) < std::max(tol_ * tau / t, floor)) break;
                if (halvings > 60) throw NumericalError("Krylov exponential step size underflow");
                tau *= 0.5;
            }
            v = beta * (basis_.leftCols(m) * y);
            remaining -= tau;
            if (remaining <= 1e-15 * t) remaining = 0;
        }
        return v;
    }

private:
    static cvec small_exp(const rvec& al, const rvec& be, int m, double t) {
        rmat tri = rmat::Zero(m, m);
        for (int j = 0; j < m; ++j) {
            tri(j, j) = al(j);
            if (j + 1 < m) tri(j, j + 1) = tri(j + 1, j) = be(j);
        }
        Eigen::SelfAdjointEigenSolver<rmat> es(tri);
        cvec ph = (cd(0, -1) * t * es.eigenvalues().array()).exp().matrix();
        return es.eigenvectors().cast<cd>() * (ph.asDiagonal() * es.eigenvectors().row(0).transpose().cast<cd>());
    }

    int mmax_;
    double tol_;
    cmat basis_;
};

struct StepControl {
    int initial_steps = 64;  // also the checkpoint grid
    int max_doublings = 14;
    double tolerance = 1e-7;
    double unitarity = 1e-9;
    Index full_limit = 24;  // at or below this dimension full unitaries are propagated and stored
    bool full = false;      // force full unitaries (otherwise only the columns U V0^dagger)
    double krylov_phase_limit = 30;  // column steps use Lanczos while dt * t_f * (E_max - E_min) stays below this
};

using GaugeFn = std::function<cmat(double, const SpectralSplit&)>;

struct EvolveOptions {
    double s_star = -1;  // negative: the path's own s_star
    StepControl control{};
    bool want_tot = true, want_ad = true, want_eff = true;
    GaugeFn gauge;  // empty: G = 0
    Tolerances tol{};
};

struct StepStats {
    int steps = 0, previous_steps = 0;
    std::vector<double> deltas;  // whole-path change after each doubling
    bool converged = false;
    double unitarity_defect = 0;
};

struct PropagationResult {
    std::string tag;  // tot | ad | eff(G) | eff(0)
    double t_f = 0;
    std::vector<double> s;
    std::vector<cmat> U;  // n x n, or n x d columns U V0 when columns_only
    bool columns_only = false;
    StepStats stats;

    // U(s_k) V0^dagger either way.
    cmat columns(std::size_t k, const cmat& v0p) const { return columns_only ? U[k] : cmat(U[k] * v0p); }
    cmat final_columns(const cmat& v0p) const { return columns(U.size() - 1, v0p); }
};

// V0 rows are the low eigenvectors of H(0); V(s) = V0 U_eff^dagger(s) is stored through its
// adjoint columns Y(s) = U_eff(s) V0^dagger.
struct EffectiveFrame {
    cmat V0;  // d x n
    std::vector<double> s;
    std::vector<cmat> Y;  // n x d
    PropagationResult eff;
    bool gauge_zero = true;
    cmat V(std::size_t k) const { return Y[k].adjoint(); }
};

struct EvolutionRun {
    double t_f = 0, s_star = 1;
    Index d = 1;
    cmat V0P;  // n x d, low eigenvectors of H(0) with deterministic phases
    std::optional<PropagationResult> tot, ad;
    std::optional<EffectiveFrame> frame;
    StepStats stats;
};

// Largest-magnitude component of each column made real positive.
inline void fix_phases(cmat& v) {
    for (Index j = 0; j < v.cols(); ++j) {
        Index imax = 0;
        v.col(j).cwiseAbs().maxCoeff(&imax);
        cd z = v(imax, j);
        if (std::abs(z) > 0) v.col(j) *= std::conj(z) / std::abs(z);
    }
}

inline cmat initial_low_vectors(const OperatorPath& path) {
    Eigensystem es = eigensystem_of(path.sample(0).H);
    split_from(es, path.d);  // gap check at s = 0
    cmat v = es.vectors.leftCols(path.d);
    fix_phases(v);
    return v;
}

// Rotate V0P so that P0 O P0 is diagonal (ascending), e.g. the well basis for an odd observable.
inline cmat rotate_to_observable(const cmat& v0p, const cmat& o) {
    cmat m = v0p.adjoint() * o * v0p;
    Eigen::SelfAdjointEigenSolver<cmat> es(0.5 * (m + m.adjoint()));
    cmat v = v0p * es.eigenvectors();
    fix_phases(v);
    return v;
}

namespace detail {

struct StepWork {
    SpectralSplit sp;
    cmat B;  // Q x P block of the twiddle of H' in the eigenbasis
};

inline StepWork midpoint_work(const OperatorPath& path, double s, bool need_b, const Tolerances& tol) {
    PathSample smp = path.sample(s);
    StepWork w;
    try {
        w.sp = split_from(eigensystem_of(smp.H), path.d, tol);
    } catch (const GapClosureError& e) {
        std::ostringstream os;
        os.precision(17);
        os << "gap closes at s = " << s << ": " << e.what();
        throw GapClosureError(os.str(), e.lower, e.upper, s);
    }
    if (need_b) {
        const Index n = w.sp.dim(), d = w.sp.d;
        cmat xqp = w.sp.vectors.rightCols(n - d).adjoint() * (smp.Hp * w.sp.vectors.leftCols(d));
        for (Index j = 0; j < d; ++j)
            for (Index m = 0; m < n - d; ++m) xqp(m, j) /= (w.sp.values(d + m) - w.sp.values(j));
        w.B = std::move(xqp);
    }
    return w;
}

// In the eigenbasis the intertwiner generator is K = tf E + i C with C = [P', P] = [[0, B^dagger], [-B, 0]].
// S = diag(1_P, -i 1_Q) maps it to [[tf E_P, -B^dagger], [-B, tf E_Q]], real whenever B is.
inline void apply_ad_step(const StepWork& w, double tf, double ds, cmat& ye) {
    const Index n = w.sp.dim(), d = w.sp.d;
    if (ye.cols() < n / 4) {
        const double spread = ds * tf * (w.sp.values(n - 1) - w.sp.values(0)) + ds * op_norm(w.B);
        if (spread < StepControl{}.krylov_phase_limit) {
            thread_local KrylovExp kexp;
            const rvec e = tf * w.sp.values;
            auto kv = [&](const auto& x, cvec& out) {
                out = e.cast<cd>().cwiseProduct(x);
                out.head(d) += cd(0, 1) * (w.B.adjoint() * x.tail(n - d));
                out.tail(n - d) += cd(0, -1) * (w.B * x.head(d));
            };
            for (Index c = 0; c < ye.cols(); ++c) ye.col(c) = kexp.apply(kv, ds, ye.col(c));
            return;
        }
    }
    ye.bottomRows(n - d) *= cd(0, -1);
    rvec lam;
    if (w.B.imag().cwiseAbs().maxCoeff() == 0.0) {
        rmat k = rmat::Zero(n, n);
        k.diagonal() = tf * w.sp.values;
        k.block(d, 0, n - d, d) = -w.B.real();
        k.block(0, d, d, n - d) = -w.B.real().transpose();
        eigh_inplace(k, lam);
        cvec ph = (cd(0, -1) * ds * lam.array()).exp().matrix();
        cmat t = k.transpose() * ye;
        t = ph.asDiagonal() * t;
        ye = k * t;
    } else {
        cmat k = cmat::Zero(n, n);
        k.diagonal() = (tf * w.sp.values).cast<cd>();
        k.block(d, 0, n - d, d) = -w.B;
        k.block(0, d, d, n - d) = -w.B.adjoint();
        eigh_inplace(k, lam);
        cvec ph = (cd(0, -1) * ds * lam.array()).exp().matrix();
        cmat t = ph.asDiagonal() * (k.adjoint() * ye);
        ye = k * t;
    }
    ye.bottomRows(n - d) *= cd(0, 1);
}

// exp(ds C) from the thin SVD B = L S R^dagger: a rotation by angles ds S between P and Q.
inline void apply_eff_step(const StepWork& w, double ds, cmat& ye) {
    const Index n = w.sp.dim(), d = w.sp.d;
    Eigen::JacobiSVD<cmat> svd(w.B, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const cmat& l = svd.matrixU();
    const cmat& r = svd.matrixV();
    rvec th = ds * svd.singularValues();
    cvec c1 = (th.array().cos() - 1).matrix().cast<cd>(), sn = th.array().sin().matrix().cast<cd>();
    cmat rp = r.adjoint() * ye.topRows(d);
    cmat lq = l.adjoint() * ye.bottomRows(n - d);
    ye.topRows(d) += r * (c1.asDiagonal() * rp + sn.asDiagonal() * lq);
    ye.bottomRows(n - d) += l * (c1.asDiagonal() * lq - sn.asDiagonal() * rp);
}

inline cmat dense_exp(const cmat& k, double ds) {
    cmat v = 0.5 * (k + k.adjoint());
    rvec lam;
    eigh_inplace(v, lam);
    cvec ph = (cd(0, -1) * ds * lam.array()).exp().matrix();
    return v * ph.asDiagonal() * v.adjoint();
}

// U' = (G + C) U with G given in the eigenbasis; generator i(G + C) exponentiated densely.
inline void apply_gauge_step(const StepWork& w, const cmat& ge, double ds, cmat& ye) {
    const Index n = w.sp.dim(), d = w.sp.d;
    cmat c = ge;
    c.block(0, d, d, n - d) += w.B.adjoint();
    c.block(d, 0, n - d, d) -= w.B;
    ye = dense_exp(cd(0, 1) * c, ds) * ye;
}

struct RunState {
    std::vector<cmat> tot_cp, ad_cp, eff_cp;
};

inline RunState run_fixed(const OperatorPath& path, double tf, double s_star, int steps, int checkpoint_every,
                          const EvolveOptions& o, const cmat& v0p, bool full) {
    const Index n = v0p.rows();
    const cmat start = full ? cmat(cmat::Identity(n, n)) : v0p;
    cmat tot = start, ad = start, eff = v0p;
    RunState st;
    auto record = [&] {
        if (o.want_tot) st.tot_cp.push_back(tot);
        if (o.want_ad) st.ad_cp.push_back(ad);
        if (o.want_eff) st.eff_cp.push_back(eff);
    };
    record();
    const double ds = s_star / steps;
    const bool need_b = o.want_ad || o.want_eff;
    for (int k = 0; k < steps; ++k) {
        const double sm = (k + 0.5) * ds;
        StepWork w = midpoint_work(path, sm, need_b, o.tol);
        const cmat& v = w.sp.vectors;
        if (o.want_tot) {
            cvec ph = (cd(0, -1) * ds * tf * w.sp.values.array()).exp().matrix();
            tot = v * (ph.asDiagonal() * (v.adjoint() * tot));
        }
        if (o.want_ad) {
            cmat ye = v.adjoint() * ad;
            apply_ad_step(w, tf, ds, ye);
            ad = v * ye;
        }
        if (o.want_eff) {
            cmat ye = v.adjoint() * eff;
            if (o.gauge)
                apply_gauge_step(w, v.adjoint() * o.gauge(sm, w.sp) * v, ds, ye);
            else
                apply_eff_step(w, ds, ye);
            eff = v * ye;
        }
        if ((k + 1) % checkpoint_every == 0) record();
    }
    return st;
}

inline double isometry_defect(const cmat& y) {
    return (y.adjoint() * y - cmat::Identity(y.cols(), y.cols())).cwiseAbs().maxCoeff();
}

}  // namespace detail

inline void validate_gauge(const cmat& g, const SpectralSplit& sp, double s) {
    const double scale = std::max(1.0, max_abs(g));
    if ((g + g.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw ValidationError("gauge G is not anti-Hermitian at s = " + std::to_string(s));
    if (op_norm(sp.P * g * sp.Q) > 1e-10 * scale || op_norm(sp.Q * g * sp.P) > 1e-10 * scale)
        throw ValidationError("gauge G is not block-diagonal at s = " + std::to_string(s));
}

// Fixed-resolution joint propagation (no step control).
inline EvolutionRun evolve_fixed(const OperatorPath& path, double tf, int steps, const EvolveOptions& o = {}) {
    if (!(tf >= 0)) throw ValidationError("t_f must be nonnegative");
    const double s_star = o.s_star >= 0 ? o.s_star : path.s_star;
    EvolutionRun run;
    run.t_f = tf;
    run.s_star = s_star;
    run.d = path.d;
    run.V0P = initial_low_vectors(path);
    const Index n = run.V0P.rows();
    const bool full = o.control.full || n <= o.control.full_limit;
    const int cp = std::max(1, steps / std::max(1, o.control.initial_steps));
    EvolveOptions oo = o;
    if (o.gauge) {
        GaugeFn g = o.gauge;
        oo.gauge = [g](double s, const SpectralSplit& sp) {
            cmat m = g(s, sp);
            validate_gauge(m, sp, s);
            return m;
        };
    }
    detail::RunState st = detail::run_fixed(path, tf, s_star, steps, cp, oo, run.V0P, full);
    std::vector<double> s;
    for (std::size_t k = 0; k < std::max({st.tot_cp.size(), st.ad_cp.size(), st.eff_cp.size()}); ++k)
        s.push_back(std::min(s_star, double(k * cp) * s_star / steps));
    run.stats.steps = steps;
    run.stats.converged = true;
    double defect = 0;
    if (o.want_tot) {
        PropagationResult r{"tot", tf, s, st.tot_cp, !full, {}};
        for (const auto& u : r.U) defect = std::max(defect, detail::isometry_defect(u));
        run.tot = std::move(r);
    }
    if (o.want_ad) {
        PropagationResult r{"ad", tf, s, st.ad_cp, !full, {}};
        for (const auto& u : r.U) defect = std::max(defect, detail::isometry_defect(u));
        run.ad = std::move(r);
    }
    if (o.want_eff) {
        EffectiveFrame f;
        f.V0 = run.V0P.adjoint();
        f.s = s;
        f.Y = st.eff_cp;
        f.gauge_zero = !o.gauge;
        f.eff = PropagationResult{o.gauge ? "eff(G)" : "eff(0)", tf, s, st.eff_cp, true, {}};
        for (const auto& y : f.Y) defect = std::max(defect, detail::isometry_defect(y));
        run.frame = std::move(f);
    }
    run.stats.unitarity_defect = defect;
    if (defect > o.control.unitarity)
        throw NumericalError("unitarity defect " + std::to_string(defect) + " exceeds tolerance");
    return run;
}

inline double whole_path_change(const EvolutionRun& a, const EvolutionRun& b) {
    double delta = 0;
    if (a.tot) delta = std::max(delta, op_norm(a.tot->final_columns(a.V0P) - b.tot->final_columns(b.V0P)));
    if (a.ad) delta = std::max(delta, op_norm(a.ad->final_columns(a.V0P) - b.ad->final_columns(b.V0P)));
    if (a.frame) delta = std::max(delta, op_norm(a.frame->Y.back() - b.frame->Y.back()));
    return delta;
}

// Doubles the number of midpoint steps until the final U P0 columns change by less than the tolerance.
inline EvolutionRun evolve(const OperatorPath& path, double tf, const EvolveOptions& o = {}) {
    int steps = o.control.initial_steps;
    EvolutionRun prev = evolve_fixed(path, tf, steps, o);
    std::vector<double> deltas;
    for (int k = 0; k < o.control.max_doublings; ++k) {
        steps *= 2;
        EvolutionRun cur = evolve_fixed(path, tf, steps, o);
        double delta = whole_path_change(prev, cur);
        deltas.push_back(delta);
        cur.stats.previous_steps = prev.stats.steps;
        cur.stats.deltas = deltas;
        cur.stats.converged = delta < o.control.tolerance;
        if (cur.stats.converged || k + 1 == o.control.max_doublings) {
            if (cur.tot) cur.tot->stats = cur.stats;
            if (cur.ad) cur.ad->stats = cur.stats;
            if (cur.frame) cur.frame->eff.stats = cur.stats;
            return cur;
        }
        prev = std::move(cur);
    }
    return prev;
}

inline void require_converged(const EvolutionRun& run) {
    if (run.stats.converged) return;
    std::ostringstream os;
    os << "step control did not converge at t_f = " << run.t_f << "; last deltas:";
    const auto& d = run.stats.deltas;
    for (std::size_t i = d.size() >= 2 ? d.size() - 2 : 0; i < d.size(); ++i) os << ' ' << d[i];
    throw NumericalError(os.str());
}

inline PropagationResult propagate_tot(const OperatorPath& path, double tf, EvolveOptions o = {}) {
    o.want_tot = true;
    o.want_ad = o.want_eff = false;
    if (tf == 0) {
        EvolutionRun r = evolve_fixed(path, 0, o.control.initial_steps, o);
        return *r.tot;
    }
    return *evolve(path, tf, o).tot;
}

inline PropagationResult propagate_ad(const OperatorPath& path, double tf, EvolveOptions o = {}) {
    o.want_ad = true;
    o.want_tot = o.want_eff = false;
    return *evolve(path, tf, o).ad;
}

inline EffectiveFrame propagate_eff(const OperatorPath& path, GaugeFn gauge = {}, EvolveOptions o = {}) {
    o.want_eff = true;
    o.want_tot = o.want_ad = false;
    o.gauge = std::move(gauge);
    return *evolve(path, 1.0, o).frame;
}

// H_eff(s) = V (H + (i/t_f) G^dagger) V^dagger at every checkpoint of the frame.
inline std::vector<cmat> effective_hamiltonian(const EffectiveFrame& f, const OperatorPath& path, double tf = 1,
                                               const GaugeFn& gauge = {}) {
    std::vector<cmat> out;
    for (std::size_t k = 0; k < f.s.size(); ++k) {
        cmat h = path.sample(f.s[k]).H;
        if (gauge && !f.gauge_zero) {
            SpectralSplit sp = split_from(eigensystem_of(h), path.d);
            h += cd(0, 1 / tf) * gauge(f.s[k], sp).adjoint();
        }
        cmat he = f.Y[k].adjoint() * h * f.Y[k];
        out.push_back(0.5 * (he + he.adjoint()));
    }
    return out;
}

// d/ds of V O V^dagger: V [O, G + [P', P]] V^dagger at s, using the frame's V(s).
inline cmat observable_derivative(const cmat& y, const PathSample& smp, const SpectralSplit& sp, const cmat& o,
                                  const cmat& g) {
    cmat pp = -twiddle(smp.Hp, sp);
    cmat a = g + commutator(pp, sp.P);
    return y.adjoint() * commutator(o, a) * y;
}

struct EvolutionReport {
    double t_f = 0, s_star = 1;
    double diff_norm = 0;        // ||(U_ad - U_tot) P0||
    double x_norm = 0;           // ||P0 U_ad^dagger U_tot - P0||
    double jrs_quantity = 0;     // ||U_tot P0 U_tot^dagger - U_ad P0 U_ad^dagger||
    double state_diff = 0;       // ||(U_ad - U_tot) phi||
    double p_leak = 0;
    double observable_error = 0;  // |<phi|U_tot^dagger O U_tot|phi> - <phi|U_ad^dagger O U_ad|phi>|
    double observable_norm = 0;
    double intertwining_ad = 0, intertwining_eff = 0;  // max over checkpoints of ||Q U P0||
    double effective_residual = 0;                      // ||u - V U_tot V0^dagger||
    double leak_bound = 0;                              // 2b + b^2 with b = x_norm
    int steps = 0, previous_steps = 0;
    double last_delta = 0;
    bool converged = false;
    double unitarity_defect = 0;
};

// phi: coefficients in the V0P basis (length d, normalized). O: n x n observable.
inline EvolutionReport diagnostics(const EvolutionRun& run, const OperatorPath& path, const cvec& phi_coeffs, const cmat& o) {
    if (!run.tot || !run.ad || !run.frame) throw ValidationError("diagnostics need tot, ad and eff propagations");
    if (std::abs(phi_coeffs.norm() - 1) > 1e-10) throw ValidationError("phi must be normalized");
    if (phi_coeffs.size() != run.d) throw ValidationError("phi must lie in the initial low-energy subspace");
    const cmat& v0p = run.V0P;
    const cmat yad = run.ad->final_columns(v0p);
    const cmat ytot = run.tot->final_columns(v0p);
    const cmat& yeff = run.frame->Y.back();
    SpectralSplit sp_end = split_from(eigensystem_of(path.sample(run.s_star).H), path.d);

    EvolutionReport r;
    r.t_f = run.t_f;
    r.s_star = run.s_star;
    r.diff_norm = op_norm(yad - ytot);
    // without the full U_tot, ||x|| = ||U_tot^dagger U_ad P0 - P0|| reduces to the column difference
    r.x_norm = run.tot->columns_only ? r.diff_norm : op_norm(yad.adjoint() * run.tot->U.back() - v0p.adjoint());
    r.jrs_quantity = op_norm(ytot * ytot.adjoint() - yad * yad.adjoint());
    cvec at = ytot * phi_coeffs, aa = yad * phi_coeffs;
    r.state_diff = (aa - at).norm();
    r.p_leak = std::max(0.0, (sp_end.Q * at).squaredNorm());
    r.observable_norm = op_norm(o);
    r.observable_error = std::abs(at.dot(o * at) - aa.dot(o * aa));
    r.leak_bound = 2 * r.x_norm + r.x_norm * r.x_norm;
    for (std::size_t k = 0; k < run.ad->U.size(); ++k) {
        SpectralSplit sp = split_from(eigensystem_of(path.sample(run.ad->s[k]).H), path.d);
        r.intertwining_ad = std::max(r.intertwining_ad, op_norm(sp.Q * run.ad->columns(k, v0p)));
        r.intertwining_eff = std::max(r.intertwining_eff, op_norm(sp.Q * run.frame->Y[k]));
    }
    r.effective_residual = op_norm(yeff.adjoint() * (yad - ytot));
    r.steps = run.stats.steps;
    r.previous_steps = run.stats.previous_steps;
    r.last_delta = run.stats.deltas.empty() ? 0 : run.stats.deltas.back();
    r.converged = run.stats.converged;
    r.unitarity_defect = run.stats.unitarity_defect;
    return r;
}

struct SweepRow {
    double t_f = 0, theta = 0, bound = 0;
    EvolutionReport report;
    bool within_bound = false;
};

// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ValidationError("regression needs at least two points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= double(x.size());
    my /= double(x.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double a = std::log(x[i]) - mx;
        sxy += a * (std::log(y[i]) - my);
        sxx += a * a;
    }
    return sxy / sxx;
}

inline std::vector<double> default_tf_multiples() { return {2, 4, 8, 16, 32}; }

}  // namespace adiabatic
