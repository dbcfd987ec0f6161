#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "schedule.hpp"

namespace adiabatic {

struct PathSample {
    cmat H, Hp, Hpp;
};

// A smooth family H(s) with its first two s-derivatives. Matrices are plain cmat for speed;
// Hermiticity is checked where operators enter the public operator_core API.
struct OperatorPath {
    std::string name;
    std::function<PathSample(double)> sample;
    std::function<CkList(double, const PathSample&)> ck;  // empty: c_0 = ||H'(s)||^2
    Index d = 1;
    BasisTag basis = BasisTag::abstract;
    std::string derivative_mode = "analytic";
    double s_star = 1;
    std::vector<double> s_grid;  // default quadrature nodes on [0, s_star]
    Flags warnings;

    Index dim() const { return sample(0).H.rows(); }
};

inline OperatorPath finite_difference_path(std::string name, std::function<cmat(double)> h, Index d, double step,
                                           double s_star = 1) {
    OperatorPath p;
    p.name = std::move(name);
    p.d = d;
    p.s_star = s_star;
    p.derivative_mode = "central-difference h=" + std::to_string(step);
    p.sample = [h, step](double s) {
        cmat a = h(s - step), c = h(s), e = h(s + step);
        return PathSample{c, (e - a) / (2 * step), (e - 2 * c + a) / (step * step)};
    };
    p.s_grid = uniform_grid(0, s_star, 200);
    return p;
}

// scale * ((1 - g) X + g Z) with g = s^2, d = 1.
inline OperatorPath two_level_path(double scale = 1.0) {
    OperatorPath p;
    p.name = "two-level";
    p.d = 1;
    p.sample = [scale](double s) {
        const double g = s * s, g1 = 2 * s, g2 = 2;
        cmat x = pauli_x(), z = pauli_z();
        return PathSample{scale * ((1 - g) * x + g * z), scale * g1 * (z - x), scale * g2 * (z - x)};
    };
    p.s_grid = uniform_grid(0, 1, 200);
    return p;
}

// diag(levels) + g W1 + g^2 W2, g = s^2, with seeded random Hermitian W of spectral norm `strength`.
inline OperatorPath random_smooth_path(std::uint64_t seed, Index d = 2, double strength = 0.3,
                                       std::vector<double> levels = {0.0, 0.3, 2.0, 3.0, 4.0}) {
    const Index n = Index(levels.size());
    std::mt19937_64 rng(seed);
    cmat w1 = random_hermitian(n, rng), w2 = random_hermitian(n, rng);
    w1 *= strength / op_norm(w1);
    w2 *= strength / op_norm(w2);
    rvec lv = Eigen::Map<rvec>(levels.data(), n);
    cmat h0 = lv.cast<cd>().asDiagonal();
    OperatorPath p;
    p.name = "random-smooth";
    p.d = d;
    p.sample = [h0, w1, w2](double s) {
        const double g = s * s, g1 = 2 * s, g2 = 2;
        return PathSample{h0 + g * w1 + g * g * w2, g1 * w1 + 2 * g * g1 * w2,
                          g2 * w1 + (2 * g1 * g1 + 2 * g * g2) * w2};
    };
    p.s_grid = uniform_grid(0, 1, 200);
    return p;
}

inline OperatorPath constant_path(cmat h, Index d) {
    OperatorPath p;
    p.name = "constant";
    p.d = d;
    const Index n = h.rows();
    p.sample = [h, n](double) { return PathSample{h, cmat::Zero(n, n), cmat::Zero(n, n)}; };
    p.s_grid = uniform_grid(0, 1, 16);
    return p;
}

// m + sin(s) m^2 on diag(0..n-1); every P.Q block of its derivatives vanishes.
inline OperatorPath diagonal_family_path(Index n, Index d) {
    OperatorPath p;
    p.name = "diagonal-family";
    p.d = d;
    rvec m = rvec::LinSpaced(n, 0, double(n - 1));
    p.sample = [m](double s) {
        rvec m2 = m.array().square();
        return PathSample{(m + std::sin(s) * m2).cast<cd>().asDiagonal(), (std::cos(s) * m2).cast<cd>().asDiagonal(),
                          (-std::sin(s) * m2).cast<cd>().asDiagonal()};
    };
    p.ck = [](double, const PathSample&) { return CkList{0.0, 0.0, 1.0}; };
    p.s_grid = uniform_grid(0, 1, 16);
    return p;
}

struct CsfqPathOptions {
    double n_max = 20;
    double s_star = 1;
    DerivativeMode mode = DerivativeMode::exact_implicit;
    CsfqGauge gauge = CsfqGauge::real;
    int intervals = 400;
};

inline OperatorPath csfq_path(const AnnealParams& ap, const CsfqPathOptions& o = {}) {
    OperatorPath p;
    p.name = "csfq-sin";
    p.d = 2;
    p.basis = BasisTag::half_integer_charge;
    p.s_star = o.s_star;
    p.derivative_mode = std::string("analytic/") + to_string(o.mode);
    p.warnings = ap.validate();
    if (o.n_max < 10) p.warnings.push_back("charge cutoff n_max < 10; spectrum may be truncation-limited");
    auto basis = std::make_shared<const CsfqBasis>(CsfqBasis::make(o.n_max, o.gauge));
    const DerivativeMode mode = o.mode;
    const cmat charging = basis->charging(ap.E_C);
    const double ej = ap.E_J(), ea = ap.E_alpha();
    // same operators as csfq_sin_from, assembled without per-sample validation
    p.sample = [ap, basis, mode, charging, ej, ea](double s) {
        SchedulePoint pt = schedule_point(std::clamp(s, 0.0, 1.0), ap, mode);
        const double sf = std::sin(pt.f / 2), cf = std::cos(pt.f / 2);
        PathSample out;
        out.H = charging + (ej * pt.b) * basis->cos_phi - (ea * sf) * basis->sin_half;
        out.Hp = (pt.b1 * ej) * basis->cos_phi - (pt.f1 * ea / 2 * cf) * basis->sin_half;
        out.Hpp = (ej * pt.b2) * basis->cos_phi - (ea / 2 * (pt.f2 * cf - 0.5 * pt.f1 * pt.f1 * sf)) * basis->sin_half;
        return out;
    };
    p.s_grid = anneal_grid(o.s_star, ap.delta_B(), o.intervals);
    return p;
}

}  // namespace adiabatic
