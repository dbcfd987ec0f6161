#pragma once

#include <functional>
#include <vector>

#include "operator_core.hpp"

namespace adiabatic {

// Uniform Dirichlet grid with n interior points on [-halfwidth, halfwidth].
struct PhaseGrid {
    double halfwidth = 3 * pi;
    Index points = 128;
    double spacing() const { return 2 * halfwidth / double(points + 1); }
    rvec nodes() const {
        rvec x(points);
        const double h = spacing();
        for (Index j = 0; j < points; ++j) x(j) = -halfwidth + double(j + 1) * h;
        return x;
    }
};

// -coeff * second central difference, i.e. coeff * n^2 with [phi, n] = i.
inline rmat kinetic_matrix(const PhaseGrid& g, double coeff) {
    const Index n = g.points;
    const double h2 = g.spacing() * g.spacing();
    rmat k = rmat::Zero(n, n);
    for (Index j = 0; j < n; ++j) {
        k(j, j) = 2 * coeff / h2;
        if (j + 1 < n) k(j, j + 1) = k(j + 1, j) = -coeff / h2;
    }
    return k;
}

struct CJJParams {
    double E_C = 1, E_J = 5, E_L = 0.1;
    double b = 1, f = 0;
    PhaseGrid grid{3 * pi, 128};

    void validate() const {
        if (!(E_C > 0 && E_J >= 0 && E_L >= 0)) throw ValidationError("CJJ energies must be positive");
        if (!(grid.halfwidth >= 3 * pi - 1e-12)) throw ValidationError("CJJ grid half-width must be at least 3*pi");
        if (grid.points < 64) throw ValidationError("CJJ grid needs at least 64 points");
    }
};

struct CircuitOperators {
    HermitianOperator H;
    cmat dH_db, dH_df;
    Flags warnings;
};

inline CircuitOperators build_cjj(const CJJParams& p) {
    p.validate();
    rvec x = p.grid.nodes();
    rmat h = kinetic_matrix(p.grid, p.E_C);
    rvec pot = p.E_J * p.b * x.array().cos() + p.E_L * (x.array() - p.f).square();
    h.diagonal() += pot;
    CircuitOperators out{HermitianOperator(h.cast<cd>(), BasisTag::phase_grid), {}, {}, {}};
    out.dH_db = (p.E_J * x.array().cos()).matrix().cast<cd>().asDiagonal();
    out.dH_df = (-2 * p.E_L * (x.array() - p.f)).matrix().cast<cd>().asDiagonal();
    if (p.E_J > 0 && !(p.E_J / p.E_C >= 3 && p.E_J / p.E_C <= 10))
        out.warnings.push_back("E_J/E_C outside [3, 10]; grid convergence not characterized there");
    return out;
}

// Half-integer charge lattice n_j = -n_max + j/2. In the charge gauge the shift operators are
// e^{i a phi}|n> = |n + a>. The real gauge conjugates by diag(i^j), which makes cos(phi) and
// sin(phi/2) real symmetric; spectra and every basis-independent quantity are unchanged.
enum class CsfqGauge { charge, real };

struct CsfqBasis {
    double n_max = 20;
    CsfqGauge gauge = CsfqGauge::charge;
    rvec charge;
    cmat cos_phi, sin_half, cos_half;

    Index dim() const { return charge.size(); }

    static CsfqBasis make(double n_max, CsfqGauge gauge = CsfqGauge::charge) {
        if (!(n_max > 0) || std::abs(2 * n_max - std::round(2 * n_max)) > 1e-12)
            throw ValidationError("charge cutoff must be a positive multiple of 1/2");
        CsfqBasis b;
        b.n_max = n_max;
        b.gauge = gauge;
        const Index n = Index(std::llround(4 * n_max)) + 1;
        b.charge.resize(n);
        for (Index j = 0; j < n; ++j) b.charge(j) = -n_max + 0.5 * double(j);
        b.cos_phi = cmat::Zero(n, n);
        b.sin_half = cmat::Zero(n, n);
        b.cos_half = cmat::Zero(n, n);
        for (Index j = 0; j + 1 < n; ++j) {
            b.sin_half(j + 1, j) = cd(0, -0.5);
            b.sin_half(j, j + 1) = cd(0, 0.5);
            b.cos_half(j + 1, j) = b.cos_half(j, j + 1) = 0.5;
        }
        for (Index j = 0; j + 2 < n; ++j) b.cos_phi(j + 2, j) = b.cos_phi(j, j + 2) = 0.5;
        if (gauge == CsfqGauge::real) {
            cvec ph(n);
            for (Index j = 0; j < n; ++j) ph(j) = std::pow(cd(0, 1), double(j % 4));
            auto rot = [&](cmat& m) { m = (ph.conjugate().asDiagonal() * m * ph.asDiagonal()).eval(); };
            rot(b.cos_phi);
            rot(b.sin_half);
            rot(b.cos_half);
            // remove round-off from the complex powers
            b.cos_phi = b.cos_phi.real().cast<cd>();
            b.sin_half = b.sin_half.real().cast<cd>();
        }
        return b;
    }

    cmat charging(double E_C) const { return (E_C * charge.array().square()).matrix().cast<cd>().asDiagonal(); }
};

struct CSFQParams {
    double E_C = 1, E_J = 3.125, E_alpha = 1e-3;
    double b = 1, f = 0;
    double n_max = 20;
    CsfqGauge gauge = CsfqGauge::charge;

    void validate() const {
        if (!(E_C > 0 && E_J > 0 && E_alpha >= 0)) throw ValidationError("CSFQ energies must be positive");
        if (!(b >= 1)) throw ValidationError("CSFQ barrier b must be >= 1");
        if (!(f >= 0 && f < pi)) throw ValidationError("CSFQ flux f must lie in [0, pi)");
    }
};

inline CircuitOperators csfq_sin_from(const CsfqBasis& basis, const CSFQParams& p) {
    cmat h = basis.charging(p.E_C) + p.E_J * p.b * basis.cos_phi - p.E_alpha * std::sin(p.f / 2) * basis.sin_half;
    CircuitOperators out{HermitianOperator(std::move(h), BasisTag::half_integer_charge), {}, {}, {}};
    out.dH_db = p.E_J * basis.cos_phi;
    out.dH_df = -(p.E_alpha / 2) * std::cos(p.f / 2) * basis.sin_half;
    if (basis.n_max < 10) out.warnings.push_back("charge cutoff n_max < 10; spectrum may be truncation-limited");
    return out;
}

inline CircuitOperators build_csfq_sin(const CSFQParams& p) {
    p.validate();
    return csfq_sin_from(CsfqBasis::make(p.n_max, p.gauge), p);
}

inline HermitianOperator build_csfq_full(const CSFQParams& p) {
    p.validate();
    CsfqBasis basis = CsfqBasis::make(p.n_max, p.gauge);
    cmat h = csfq_sin_from(basis, p).H.matrix() - p.E_alpha * std::cos(p.f / 2) * basis.cos_half;
    return HermitianOperator(std::move(h), BasisTag::half_integer_charge);
}

// Second derivative along a schedule for the sin variant.
inline cmat csfq_sin_second_derivative(const CsfqBasis& basis, const CSFQParams& p, double b2, double f1, double f2) {
    return p.E_J * b2 * basis.cos_phi -
           (p.E_alpha / 2) * (f2 * std::cos(p.f / 2) - 0.5 * f1 * f1 * std::sin(p.f / 2)) * basis.sin_half;
}

// E_C n^2 + (k/2)(phi - center)^2 on a phase grid.
inline HermitianOperator build_harmonic_well(double E_C, double k, double center, const PhaseGrid& g) {
    rvec x = g.nodes();
    rmat h = kinetic_matrix(g, E_C);
    h.diagonal() += (0.5 * k * (x.array() - center).square()).matrix();
    return HermitianOperator(h.cast<cd>(), BasisTag::phase_grid);
}

struct WellPair {
    HermitianOperator left, right;
};

inline WellPair build_wells(double E_C, double E_J, double b, const PhaseGrid& g) {
    if (!(b >= 1)) throw ValidationError("well barrier b must be >= 1");
    return {build_harmonic_well(E_C, E_J * b, -pi, g), build_harmonic_well(E_C, E_J * b, pi, g)};
}
inline WellPair build_wells(const CSFQParams& p, const PhaseGrid& g) { return build_wells(p.E_C, p.E_J, p.b, g); }
inline WellPair build_wells(const CJJParams& p) { return build_wells(p.E_C, p.E_J, p.b, p.grid); }

// Lowest k eigenvalues.
inline rvec lowest_eigenvalues(const cmat& h, Index k) {
    return eigensystem_of(h).values.head(std::min<Index>(k, h.rows()));
}

struct ConvergenceCheck {
    rvec coarse, fine;
    double max_relative_change = 0;
    bool flagged = false;
};

inline ConvergenceCheck compare_levels(const cmat& coarse, const cmat& fine, Index k = 4, double threshold = 0.01) {
    ConvergenceCheck c;
    c.coarse = lowest_eigenvalues(coarse, k);
    c.fine = lowest_eigenvalues(fine, k);
    for (Index i = 0; i < c.coarse.size(); ++i) {
        double rel = std::abs(c.fine(i) - c.coarse(i)) / std::max(std::abs(c.fine(i)), 1e-300);
        c.max_relative_change = std::max(c.max_relative_change, rel);
    }
    c.flagged = c.max_relative_change >= threshold;
    return c;
}

// Coupled flux network: sum_i p_i^2 + B_i cos(x_i + phi_i) + sum_ij M_ij x_i x_j.
struct FluxMode {
    std::function<double(double)> B, dB, phi, dphi;
};

struct FluxNetworkParams {
    std::vector<FluxMode> modes;
    std::function<rmat(double)> M, dM;
    Index size() const { return Index(modes.size()); }
};

inline double min_eigenvalue_symmetric(const rmat& m) {
    Eigen::SelfAdjointEigenSolver<rmat> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

inline double spectral_norm_symmetric(const rmat& m) {
    Eigen::SelfAdjointEigenSolver<rmat> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

inline void check_network(const FluxNetworkParams& net, double s) {
    if (net.modes.empty()) throw ValidationError("flux network has no modes");
    rmat m = net.M(s);
    if (m.rows() != net.size() || m.cols() != net.size()) throw ValidationError("mutual inductance matrix has wrong shape");
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw ValidationError("mutual inductance matrix not symmetric");
    for (const auto& mode : net.modes)
        if (mode.B(s) < 0) throw ValidationError("barrier heights must be nonnegative");
}

inline CkList ck_constant_M(const FluxNetworkParams& net, double s) {
    check_network(net, s);
    if (spectral_norm_symmetric(net.dM(s)) > 1e-12)
        throw ValidationError("mutual inductance varies with s; use ck_time_dependent_M");
    double a = 0;
    for (const auto& m : net.modes) a += std::abs(m.dB(s)) + m.B(s) * std::abs(m.dphi(s));
    return CkList{a * a};
}

inline CkList ck_time_dependent_M(const FluxNetworkParams& net, double s) {
    check_network(net, s);
    const double l = min_eigenvalue_symmetric(net.M(s));
    if (!(l > 0)) throw ValidationError("mutual inductance matrix is not positive definite");
    const double a1 = spectral_norm_symmetric(net.dM(s)) / l;
    double a0 = 0;
    for (const auto& m : net.modes) a0 += std::abs(m.dB(s)) + m.B(s) * std::abs(m.dphi(s)) + a1 * std::abs(m.B(s));
    return CkList{2 * a0 * a0, 2 * a1 * a1};
}

struct FluxDiscretization {
    HermitianOperator H, dH;
};

// Tensor-product grid, one PhaseGrid per mode (at most two modes).
inline FluxDiscretization build_flux_network(const FluxNetworkParams& net, double s, const PhaseGrid& g) {
    check_network(net, s);
    const Index modes = net.size();
    if (modes > 2) throw ValidationError("flux network discretization supports at most two modes");
    const Index n1 = g.points, n = modes == 1 ? n1 : n1 * n1;
    rvec x = g.nodes();
    rmat k1 = kinetic_matrix(g, 1.0);
    rmat m = net.M(s), dm = net.dM(s);
    rmat h = rmat::Zero(n, n);
    rvec hd = rvec::Zero(n);
    auto coord = [&](Index idx, Index mode) { return modes == 1 ? x(idx) : x(mode == 0 ? idx / n1 : idx % n1); };
    if (modes == 1) {
        h = k1;
    } else {
        for (Index a = 0; a < n1; ++a)
            for (Index c = 0; c < n1; ++c)
                for (Index t = 0; t < n1; ++t) {
                    h(a * n1 + c, t * n1 + c) += k1(a, t);
                    h(a * n1 + c, a * n1 + t) += k1(c, t);
                }
    }
    for (Index idx = 0; idx < n; ++idx) {
        double v = 0, dv = 0;
        for (Index i = 0; i < modes; ++i) {
            const auto& md = net.modes[i];
            double xi = coord(idx, i);
            v += md.B(s) * std::cos(xi + md.phi(s));
            dv += md.dB(s) * std::cos(xi + md.phi(s)) - md.B(s) * md.dphi(s) * std::sin(xi + md.phi(s));
            for (Index j = 0; j < modes; ++j) {
                double xj = coord(idx, j);
                v += m(i, j) * xi * xj;
                dv += dm(i, j) * xi * xj;
            }
        }
        h(idx, idx) += v;
        hd(idx) = dv;
    }
    return {HermitianOperator(h.cast<cd>(), BasisTag::phase_grid),
            HermitianOperator(cmat(hd.cast<cd>().asDiagonal()), BasisTag::phase_grid)};
}

// Two coupled modes with linear barrier and flux ramps; mutual inductance constant or ramped.
inline FluxNetworkParams two_mode_network(bool varying_m) {
    FluxNetworkParams net;
    for (int i = 0; i < 2; ++i) {
        const double a = 1.0 + 0.5 * i;
        FluxMode m;
        m.B = [a](double s) { return a * (1 + s); };
        m.dB = [a](double) { return a; };
        m.phi = [i](double s) { return 0.3 * s + 0.1 * i; };
        m.dphi = [](double) { return 0.3; };
        net.modes.push_back(m);
    }
    if (varying_m) {
        net.M = [](double s) { return rmat((rmat(2, 2) << 1 + 0.5 * s, 0.2, 0.2, 1.2).finished()); };
        net.dM = [](double) { return rmat((rmat(2, 2) << 0.5, 0, 0, 0).finished()); };
    } else {
        net.M = [](double) { return rmat((rmat(2, 2) << 1, 0.2, 0.2, 1.2).finished()); };
        net.dM = [](double) { return rmat(rmat::Zero(2, 2)); };
    }
    return net;
}

}  // namespace adiabatic
