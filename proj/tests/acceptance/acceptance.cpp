// One PASS/FAIL line per acceptance criterion. Arguments select criteria by number (default: all).
#include <chrono>
#include <cstdio>
#include <map>
#include <set>

#include "adiabatic/cli.hpp"

using namespace adiabatic;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Line {
    int id;
    bool pass;
    std::string text;
};

std::vector<Line> results;

void report(int id, bool pass, const std::string& text, double secs) {
    char buf[64];
    std::snprintf(buf, sizeof buf, " (%.1f s)", secs);
    std::printf("[%s] %2d  %s%s\n", pass ? "PASS" : "FAIL", id, text.c_str(), buf);
    std::fflush(stdout);
    results.push_back({id, pass, text});
}

std::string fmt(double v, int prec = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    return buf;
}

struct PathCase {
    std::string label;
    OperatorPath path;
    double s_star = 1;
};

std::vector<PathCase> test_paths() {
    CsfqPathOptions o;
    o.s_star = 0.9;
    o.n_max = 20;
    return {{"two-level", two_level_path(), 1.0},
            {"random-5", random_smooth_path(11), 1.0},
            {"csfq", csfq_path(AnnealParams::from_delta(1e-9, 10), o), 0.9}};
}

struct Sweep {
    double theta = 0;
    std::vector<EvolutionReport> runs;
    std::vector<double> tf;
    EffectiveFrame frame;
    double seconds = 0;
};

// evolve sweep {2, 4, 8, 16, 32} theta_general, shared by criteria 2, 3, 5, 6, 7
std::map<std::string, Sweep>& sweeps() {
    static std::map<std::string, Sweep> cache;
    if (!cache.empty()) return cache;
    for (const PathCase& pc : test_paths()) {
        auto t0 = Clock::now();
        Sweep sw;
        sw.theta = evaluate_bounds(pc.path, pc.s_star).theta_general;
        const cmat obs = cli::seeded_observable(pc.path.dim(), 1);
        cvec phi = cvec::Zero(pc.path.d);
        phi(0) = 1;
        for (double m : default_tf_multiples()) {
            EvolveOptions o;
            o.s_star = pc.s_star;
            const double tf = m * sw.theta;
            EvolutionRun run = evolve(pc.path, tf, o);
            require_converged(run);
            sw.tf.push_back(tf);
            sw.runs.push_back(diagnostics(run, pc.path, phi, obs));
            if (m == default_tf_multiples().front()) sw.frame = *run.frame;
        }
        sw.seconds = seconds_since(t0);
        std::printf("      sweep %s: theta_general %s, %zu runs in %.0f s\n", pc.label.c_str(), fmt(sw.theta, 6).c_str(),
                    sw.runs.size(), sw.seconds);
        std::fflush(stdout);
        cache[pc.label] = std::move(sw);
    }
    return cache;
}

void criterion1() {
    auto t0 = Clock::now();
    const double b0 = solve_B0(1e-9, 10);
    const double secs = seconds_since(t0);
    report(1, b0 >= 10.5 && b0 <= 10.7 && secs < 1, "B0(1e-9, A=10) = " + fmt(b0, 6) + " in [10.5, 10.7], under 1 s", secs);
}

void criterion2() {
    auto t0 = Clock::now();
    bool ok = true;
    std::string txt = "diff <= theta/t_f at 2..32 theta:";
    for (const PathCase& pc : test_paths()) {
        const Sweep& sw = sweeps().at(pc.label);
        double worst = 0;
        for (std::size_t i = 0; i < sw.runs.size(); ++i) worst = std::max(worst, sw.runs[i].diff_norm * sw.tf[i] / sw.theta);
        ok = ok && worst <= 1;
        txt += " " + pc.label + " max diff*t_f/theta " + fmt(worst, 3) + ";";
    }
    report(2, ok, txt, seconds_since(t0));
}

void criterion3() {
    auto t0 = Clock::now();
    bool ok = true;
    std::string txt = "log-log slope in [-1.3, -0.7]:";
    for (const PathCase& pc : test_paths()) {
        const Sweep& sw = sweeps().at(pc.label);
        std::vector<double> y;
        for (const auto& r : sw.runs) y.push_back(r.diff_norm);
        const double slope = loglog_slope(sw.tf, y);
        ok = ok && slope >= -1.3 && slope <= -0.7 && sw.tf.back() / sw.tf.front() >= 10;
        txt += " " + pc.label + " " + fmt(slope, 4) + ";";
    }
    report(3, ok, txt, seconds_since(t0));
}

void criterion4() {
    auto t0 = Clock::now();
    cli::VerifySettings v;
    auto res = cli::run_invariants(v, 1);
    bool ok = true;
    std::string txt = "twiddle suite, 100 instances at dims 4, 8, 16:";
    int count = 0;
    for (const auto& r : res) {
        if (r.name.rfind("twiddle-", 0) != 0) continue;
        ++count;
        ok = ok && r.pass() && r.instances >= 300;
        txt += " " + r.name.substr(8) + " " + fmt(r.max_residual, 2) + ";";
    }
    const double secs = seconds_since(t0);
    ok = ok && count == 5 && secs < 30;
    report(4, ok, txt, secs);
}

void criterion5() {
    auto t0 = Clock::now();
    bool ok = true;
    std::string txt = "intertwining < 1e-7 and order under halving:";
    for (const PathCase& pc : test_paths()) {
        const Sweep& sw = sweeps().at(pc.label);
        double worst = 0;
        for (const auto& r : sw.runs) worst = std::max({worst, r.intertwining_ad, r.intertwining_eff});
        // fixed-step halving at t_f = 2 theta
        std::vector<double> res;
        const int base = 128;
        for (int steps : {base, 2 * base, 4 * base}) {
            EvolveOptions o;
            o.s_star = pc.s_star;
            EvolutionRun run = evolve_fixed(pc.path, sw.tf.front(), steps, o);
            cvec phi = cvec::Zero(pc.path.d);
            phi(0) = 1;
            EvolutionReport r = diagnostics(run, pc.path, phi, cmat::Identity(pc.path.dim(), pc.path.dim()));
            res.push_back(std::max(r.intertwining_ad, r.intertwining_eff));
        }
        const double p1 = std::log2(res[0] / res[1]), p2 = std::log2(res[1] / res[2]);
        ok = ok && worst < 1e-7 && p1 > 1.7 && p1 < 2.3 && p2 > 1.7 && p2 < 2.3;
        txt += " " + pc.label + " max " + fmt(worst, 2) + ", order " + fmt(p1, 3) + "/" + fmt(p2, 3) + ";";
    }
    report(5, ok, txt, seconds_since(t0));
}

void criterion6() {
    auto t0 = Clock::now();
    bool ok = true;
    std::string txt = "P_leak and unit-observable error <= 2b + b^2:";
    for (const PathCase& pc : test_paths()) {
        const Sweep& sw = sweeps().at(pc.label);
        double worst_leak = 0, worst_obs = 0;
        for (const auto& r : sw.runs) {
            worst_leak = std::max(worst_leak, r.p_leak / r.leak_bound);
            worst_obs = std::max(worst_obs, r.observable_error / (r.leak_bound * r.observable_norm));
            ok = ok && std::abs(r.observable_norm - 1) < 1e-12;
        }
        ok = ok && worst_leak <= 1 && worst_obs <= 1;
        txt += " " + pc.label + " leak/bound " + fmt(worst_leak, 3) + ", obs/bound " + fmt(worst_obs, 3) + ";";
    }
    report(6, ok, txt, seconds_since(t0));
}

cmat block_diagonal_random(const SpectralSplit& sp, std::mt19937_64& rng, bool anti) {
    const Index n = sp.dim(), d = sp.d;
    cmat g = cmat::Zero(n, n);
    g.topLeftCorner(d, d) = random_hermitian(d, rng);
    g.bottomRightCorner(n - d, n - d) = random_hermitian(n - d, rng);
    if (anti) g *= cd(0, 1);
    return sp.vectors * g * sp.vectors.adjoint();
}

void criterion7() {
    auto t0 = Clock::now();
    bool ok = true;
    std::string txt = "effective frame:";
    std::mt19937_64 rng(21);
    for (const PathCase& pc : test_paths()) {
        const Sweep& sw = sweeps().at(pc.label);
        const EffectiveFrame& f = sw.frame;
        auto heff = effective_hamiltonian(f, pc.path);
        double eig = 0;
        for (std::size_t k = 0; k < heff.size(); ++k) {
            rvec want = lowest_eigenvalues(pc.path.sample(f.s[k]).H, pc.path.d);
            eig = std::max(eig, (eigensystem_of(heff[k]).values - want).cwiseAbs().maxCoeff());
        }
        double resid = 0;
        for (const auto& r : sw.runs) resid = std::max(resid, r.effective_residual - r.x_norm);
        // G = 0 gives the smallest observable derivative among block-diagonal gauges
        int losses = 0;
        double at_zero_rel = 0;
        for (std::size_t k : {f.s.size() / 4, f.s.size() / 2, 3 * f.s.size() / 4}) {
            PathSample smp = pc.path.sample(f.s[k]);
            SpectralSplit sp = split_from(eigensystem_of(smp.H), pc.path.d);
            cmat o = block_diagonal_random(sp, rng, false);
            const Index n = pc.path.dim();
            const double z = op_norm(observable_derivative(f.Y[k], smp, sp, o, cmat::Zero(n, n)));
            at_zero_rel = std::max(at_zero_rel, z / op_norm(o));
            for (int j = 0; j < 10; ++j)
                if (op_norm(observable_derivative(f.Y[k], smp, sp, o, block_diagonal_random(sp, rng, true))) < z) ++losses;
        }
        ok = ok && eig < 1e-8 && resid <= 1e-7 && losses == 0;
        txt += " " + pc.label + " eig err " + fmt(eig, 2) + ", residual - b " + fmt(resid, 2) + ", gauge losses " +
               std::to_string(losses) + "/30;";
    }
    report(7, ok, txt, seconds_since(t0));
}

void criterion8() {
    auto t0 = Clock::now();
    bool ok = true;
    std::string txt = "CSFQ s* = 0.9:";
    int below = 0, rows = 0, violations = 0;
    for (double A : {10.0, 12.0, 14.0}) {
        AnnealParams ap = AnnealParams::from_delta(1e-9, A);
        CsfqPathOptions o;
        o.s_star = 0.9;
        BoundReport r = evaluate_bounds(csfq_path(ap, o), 0.9);
        for (const auto& w : r.rows) {
            ++rows;
            if (w.pHpQ < w.Hp / 8) {
                ++below;
                if (w.integrand_new > w.integrand_jrs) ++violations;
            }
        }
        const double b = schedule_point(0.9, ap, DerivativeMode::exact_implicit).b;
        const double ratio = r.theta_new / r.theta_jrs;
        const double q = ratio * A * std::sqrt(b);
        ClosedForms cf = csfq_closed_forms(ap, 0.9);
        const double q_log = ratio * -std::log(cf.log_argument);
        ok = ok && q >= 1.0 / 3 && q <= 3 && q_log >= 1.0 / 3 && q_log <= 3;
        txt += " A=" + fmt(A, 3) + " ratio*A*sqrt(b) " + fmt(q, 4) + " (log form " + fmt(q_log, 4) + ");";
    }
    ok = ok && violations == 0;
    txt += " rows with ||PH'Q||/||H'|| < 1/8: " + std::to_string(below) + " of " + std::to_string(rows) + ", violations " +
           std::to_string(violations);
    report(8, ok, txt, seconds_since(t0));
}

void criterion9() {
    auto t0 = Clock::now();
    bool ok = true;
    double worst_lambda = 0, worst_ae = 0;
    PhaseGrid g{3 * pi, 14};
    int n = 0;
    for (double s : {0.0, 0.25, 0.5, 0.75, 1.0})
        for (bool varying : {false, true}) {
            FluxNetworkParams net = two_mode_network(varying);
            FluxDiscretization fd = build_flux_network(net, s, g);
            CkList c = varying ? ck_time_dependent_M(net, s) : ck_constant_M(net, s);
            CkReport ck = verify_ck(fd.H, fd.dH, c);
            AvronElgart ae = avron_elgart_check(fd.H, fd.dH, c.c[0], c.c.size() > 1 ? c.c[1] : 0.0);
            ok = ok && ck.pass && ae.holds;
            worst_lambda = std::min(worst_lambda, ck.lambda_min / std::max(ck.tol, 1e-300));
            worst_ae = std::max(worst_ae, ae.lhs / ae.rhs);
            ++n;
        }
    report(9, ok,
           "c_k certificates on 2-mode grid (" + std::to_string(n) + " instances): min lambda/tol " + fmt(worst_lambda, 3) +
               ", max Avron-Elgart lhs/rhs " + fmt(worst_ae, 3),
           seconds_since(t0));
}

void criterion10() {
    auto t0 = Clock::now();
    bool ok = true;
    std::string txt = "splitting / 2 xi at b = 1, f = 0 within 30%:";
    for (double A : {10.0, 12.0, 14.0, 16.0}) {
        AnnealParams ap = AnnealParams::from_delta(1e-9, A);
        CSFQParams p;
        p.E_C = 1;
        p.E_J = ap.E_J();
        p.E_alpha = ap.E_alpha();
        p.b = 1;
        p.f = 0;
        p.n_max = 20;
        rvec e = lowest_eigenvalues(build_csfq_sin(p).H, 2);
        const double q = (e(1) - e(0)) / (2 * xi(1, ap));
        ok = ok && std::abs(q - 1) <= 0.3;
        txt += " A=" + fmt(A, 3) + " " + fmt(q, 4) + ";";
    }
    const double secs = seconds_since(t0);
    report(10, ok && secs < 60, txt, secs);
}

void criterion11() {
    auto t0 = Clock::now();
    double lo = 1e300, hi = 0;
    bool ok = true;
    for (double A : {10.0, 12.0, 14.0})
        for (double d : {1e-9, 1e-6}) {
            AnnealParams p = AnnealParams::from_delta(d, A);
            for (double K : {1e3, 1e4}) {
                OracleResult r = brute_force_leakage(p, K * appendix_trend(p.A, p.B));
                lo = std::min(lo, r.scaled_constant);
                hi = std::max(hi, r.scaled_constant);
                ok = ok && !r.flagged;
            }
        }
    AnnealParams p = AnnealParams::from_delta(1e-6, 10);
    WellLeakage w = compare_well_leakage(p, 200, 0.5, PhaseGrid{3 * pi, 64});
    ok = ok && hi / lo <= 3 && w.ratio >= 0.5 && w.ratio <= 2;
    report(11, ok,
           "oracle ||dc|| t_f / trend in [" + fmt(lo, 4) + ", " + fmt(hi, 4) + "] (spread " + fmt(hi / lo, 4) +
               "), well leakage oracle/propagator " + fmt(w.ratio, 4),
           seconds_since(t0));
}

void criterion12() {
    auto t0 = Clock::now();
    auto csv = [](const std::string& cmd, const std::string& cfg, int workers) {
        Config c = Config::parse(cfg);
        cli::RunContext ctx = cli::resolve_run(c, std::nullopt, workers);
        cli::Output o = cli::run_command(cmd, c, ctx);
        std::string all;
        for (const auto& f : o.files) all += f.first + "\n" + f.second;
        return all;
    };
    const std::string bcfg = "[bounds]\nA_list = 10,12\ns_star_list = 0.5,0.9\n[schedule]\nintervals = 100\n";
    const bool same_bounds = csv("bounds", bcfg, 1) == csv("bounds", bcfg, 3);
    auto tv = Clock::now();
    const std::string v1 = csv("verify", "", 1);
    const double verify_secs = seconds_since(tv);
    const bool same_verify = v1 == csv("verify", "", 1);
    const bool all_pass = v1.find(",false") == std::string::npos;
    report(12, same_bounds && same_verify && all_pass && verify_secs < 600,
           std::string("byte-identical CSVs: bounds (1 vs 3 workers) ") + (same_bounds ? "yes" : "no") + ", verify repeat " +
               (same_verify ? "yes" : "no") + "; default verify suite " + (all_pass ? "all pass" : "has failures") + " in " +
               fmt(verify_secs, 3) + " s",
           seconds_since(t0));
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> want;
    for (int i = 1; i < argc; ++i) want.insert(std::atoi(argv[i]));
    const std::vector<void (*)()> all = {criterion1, criterion2, criterion3,  criterion4,  criterion5,  criterion6,
                                         criterion7, criterion8, criterion9, criterion10, criterion11, criterion12};
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (!want.empty() && !want.count(int(i + 1))) continue;
        try {
            all[i]();
        } catch (const std::exception& e) {
            report(int(i + 1), false, std::string("error: ") + e.what(), 0);
        }
    }
    int failed = 0;
    for (const auto& r : results) failed += !r.pass;
    std::printf("acceptance: %zu criteria, %d failed\n", results.size(), failed);
    return failed ? 1 : 0;
}
