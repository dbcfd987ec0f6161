#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"

namespace adiabatic {

using cd = std::complex<double>;
using cmat = Eigen::MatrixXcd;
using cvec = Eigen::VectorXcd;
using rmat = Eigen::MatrixXd;
using rvec = Eigen::VectorXd;
using Eigen::Index;

inline constexpr double pi = 3.14159265358979323846;

enum class BasisTag { phase_grid, half_integer_charge, oscillator_number, abstract };

inline const char* to_string(BasisTag t) {
    switch (t) {
        case BasisTag::phase_grid: return "phase-grid";
        case BasisTag::half_integer_charge: return "half-integer-charge";
        case BasisTag::oscillator_number: return "oscillator-number";
        default: return "abstract";
    }
}

struct Tolerances {
    double hermitian = 1e-12;       // relative to the largest entry
    double reconstruction = 1e-10;  // relative Frobenius residual of V E V^dagger
    double degeneracy = 1e-12;      // P/Q boundary gap, relative to max(1, |E|max)
    double ck_relative = 1e-8;      // verify_ck tolerance relative to ||sum c_k H^2k||
};

inline double max_abs(const cmat& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

inline double hermiticity_defect(const cmat& a) {
    if (a.rows() != a.cols()) return INFINITY;
    double scale = std::max(max_abs(a), 1e-300);
    return (a - a.adjoint()).cwiseAbs().maxCoeff() / scale;
}

inline bool all_finite(const cmat& a) { return a.allFinite(); }

class HermitianOperator {
public:
    HermitianOperator() = default;
    HermitianOperator(cmat m, BasisTag tag = BasisTag::abstract, double tol = Tolerances{}.hermitian)
        : m_(std::move(m)), tag_(tag) {
        if (m_.rows() != m_.cols()) throw ValidationError("operator is not square");
        if (m_.rows() < 2) throw ValidationError("operator dimension must be at least 2");
        if (!all_finite(m_)) throw ValidationError("operator has non-finite entries");
        double defect = hermiticity_defect(m_);
        if (defect > tol) {
            std::ostringstream os;
            os << "hermiticity violated: max|A - A^dagger| / max|A| = " << defect;
            throw ValidationError(os.str());
        }
    }
    const cmat& matrix() const { return m_; }
    Index dim() const { return m_.rows(); }
    BasisTag basis() const { return tag_; }
    operator const cmat&() const { return m_; }

private:
    cmat m_;
    BasisTag tag_ = BasisTag::abstract;
};

struct Eigensystem {
    rvec values;   // ascending
    cmat vectors;  // columns
};

inline std::string fingerprint(const cmat& a) {
    std::ostringstream os;
    os << "dim=" << a.rows() << " frob=" << a.norm() << " trace=" << a.trace().real();
    return os.str();
}

// Replace a symmetric / Hermitian matrix by its eigenvectors (ascending eigenvalues in w).
template <class M>
void eigh_inplace(M& a, rvec& w) {
    Eigen::SelfAdjointEigenSolver<M> solver(a);
    if (solver.info() != Eigen::Success)
        throw NumericalError("eigensolver did not converge: dim=" + std::to_string(a.rows()));
    w = solver.eigenvalues();
    a = solver.eigenvectors();
}

// Uses the real symmetric solver when the imaginary part is identically zero.
inline Eigensystem eigensystem_of(const cmat& h) {
    Eigensystem es;
    if (!h.allFinite()) throw NumericalError("non-finite matrix: " + fingerprint(h));
    if (h.imag().cwiseAbs().maxCoeff() == 0.0) {
        rmat a = h.real();
        eigh_inplace(a, es.values);
        es.vectors = a.cast<cd>();
    } else {
        es.vectors = h;
        eigh_inplace(es.vectors, es.values);
    }
    return es;
}

inline Eigensystem eigendecompose(const HermitianOperator& h, const Tolerances& tol = {}) {
    Eigensystem es = eigensystem_of(h.matrix());
    double scale = std::max(h.matrix().norm(), 1e-300);
    cmat rebuilt = es.vectors * es.values.cast<cd>().asDiagonal() * es.vectors.adjoint();
    double resid = (rebuilt - h.matrix()).norm() / scale;
    if (resid > tol.reconstruction) {
        std::ostringstream os;
        os << "eigendecomposition residual " << resid << " exceeds tolerance: " << fingerprint(h.matrix());
        throw NumericalError(os.str());
    }
    return es;
}

struct SpectralSplit {
    rvec values;
    cmat vectors;
    Index d = 1;
    cmat P, Q;
    double gap_delta = 0;   // half of E_d - E_{d-1}
    double diameter_r = 0;  // E_{d-1} - E_0
    Index dim() const { return values.size(); }
};

inline SpectralSplit split_from(Eigensystem es, Index d, const Tolerances& tol = {}) {
    const Index n = es.values.size();
    if (d < 1 || d >= n) throw ValidationError("split requires 1 <= d < dim");
    double lo = es.values(d - 1), up = es.values(d);
    double scale = std::max(1.0, es.values.cwiseAbs().maxCoeff());
    if (up - lo <= tol.degeneracy * scale) {
        std::ostringstream os;
        os.precision(17);
        os << "gap closes at the P/Q boundary: E_" << d - 1 << " = " << lo << ", E_" << d << " = " << up;
        throw GapClosureError(os.str(), lo, up);
    }
    SpectralSplit s;
    s.d = d;
    s.gap_delta = 0.5 * (up - lo);
    s.diameter_r = lo - es.values(0);
    auto vp = es.vectors.leftCols(d);
    s.P = vp * vp.adjoint();
    s.Q = cmat::Identity(n, n) - s.P;
    s.values = std::move(es.values);
    s.vectors = std::move(es.vectors);
    return s;
}

inline SpectralSplit split(const HermitianOperator& h, Index d, const Tolerances& tol = {}) {
    return split_from(eigendecompose(h, tol), d, tol);
}

// Largest singular value.
inline double op_norm(const cmat& a) {
    if (a.size() == 0) return 0.0;
    if (!a.allFinite()) throw ValidationError("op_norm of non-finite matrix");
    cmat g = a.rows() <= a.cols() ? cmat(a * a.adjoint()) : cmat(a.adjoint() * a);
    if (g.rows() == 1) return std::sqrt(std::max(0.0, g(0, 0).real()));
    Eigen::SelfAdjointEigenSolver<cmat> es(g, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

inline double op_norm_hermitian(const cmat& a) {
    Eigen::SelfAdjointEigenSolver<cmat> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

// Block-off-diagonal solution of [X,P] = [H,Xt], written in the eigenbasis of the split.
inline cmat twiddle_eigenbasis(const cmat& xe, const SpectralSplit& s) {
    const Index n = s.dim(), d = s.d;
    cmat t = cmat::Zero(n, n);
    for (Index j = 0; j < d; ++j)
        for (Index m = d; m < n; ++m) {
            double de = s.values(m) - s.values(j);
            t(m, j) = xe(m, j) / de;
            t(j, m) = xe(j, m) / de;
        }
    return t;
}

inline cmat twiddle(const cmat& x, const SpectralSplit& s) {
    if (x.rows() != s.dim() || x.cols() != s.dim()) throw ValidationError("twiddle: dimension mismatch");
    cmat xe = s.vectors.adjoint() * x * s.vectors;
    return s.vectors * twiddle_eigenbasis(xe, s) * s.vectors.adjoint();
}

inline double tau(const SpectralSplit& s) {
    const double delta = s.gap_delta, r = s.diameter_r;
    return std::min(std::sqrt(double(s.d)) / delta, (2 * r + 2 * pi * delta) / (2 * pi * delta * delta));
}

struct BlockNorms {
    double pxq = 0, pxp = 0;
    std::vector<double> pxhkq;  // index k: ||P X H^k Q||
};

inline BlockNorms block_norms_eigenbasis(const cmat& xe, const SpectralSplit& s, int kmax = 0) {
    const Index n = s.dim(), d = s.d;
    BlockNorms b;
    cmat pq = xe.block(0, d, d, n - d);
    b.pxq = op_norm(pq);
    b.pxp = op_norm(xe.block(0, 0, d, d));
    for (int k = 0; k <= kmax; ++k) {
        if (k == 0) {
            b.pxhkq.push_back(b.pxq);
            continue;
        }
        rvec ek = s.values.tail(n - d).array().pow(double(k));
        b.pxhkq.push_back(op_norm(pq * ek.cast<cd>().asDiagonal()));
    }
    return b;
}

inline BlockNorms block_norms(const cmat& x, const SpectralSplit& s, int kmax = 0) {
    return block_norms_eigenbasis(s.vectors.adjoint() * x * s.vectors, s, kmax);
}

inline cmat projector_derivative(const HermitianOperator& hprime, const SpectralSplit& s) {
    return -twiddle(hprime.matrix(), s);
}

struct CkList {
    std::vector<double> c;
    CkList() : c{0.0} {}
    CkList(std::initializer_list<double> v) : c(v) { validate(); }
    explicit CkList(std::vector<double> v) : c(std::move(v)) { validate(); }
    int k_max() const { return int(c.size()) - 1; }
    void validate() const {
        if (c.empty()) throw ValidationError("c_k list is empty");
        for (double v : c)
            if (!(v >= 0)) throw ValidationError("c_k coefficients must be nonnegative");
    }
};

struct CkReport {
    double lambda_min = 0, tol = 0;
    bool pass = false;
    Index dim = 0;
    BasisTag basis = BasisTag::abstract;
};

// Smallest eigenvalue of sum_k c_k H^2k - H'^2.
inline CkReport verify_ck(const HermitianOperator& h, const HermitianOperator& hprime, const CkList& c,
                          double tol_relative = Tolerances{}.ck_relative) {
    if (h.dim() != hprime.dim()) throw ValidationError("verify_ck: dimension mismatch");
    c.validate();
    Eigensystem es = eigensystem_of(h.matrix());
    rvec w = rvec::Zero(h.dim());
    for (int k = 0; k <= c.k_max(); ++k) w.array() += c.c[k] * es.values.array().pow(2.0 * k);
    cmat m = es.vectors * w.cast<cd>().asDiagonal() * es.vectors.adjoint() - hprime.matrix() * hprime.matrix();
    m = 0.5 * (m + m.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<cmat> ms(m, Eigen::EigenvaluesOnly);
    CkReport r;
    r.lambda_min = ms.eigenvalues()(0);
    r.tol = tol_relative * w.cwiseAbs().maxCoeff();
    r.pass = r.lambda_min >= -r.tol;
    r.dim = h.dim();
    r.basis = h.basis();
    return r;
}

struct AvronElgart {
    double lhs = 0, rhs = 0;
    bool holds = false;
};

inline AvronElgart avron_elgart_check(const HermitianOperator& h, const HermitianOperator& hprime, double c0, double c1) {
    const Index n = h.dim();
    cmat r = (h.matrix() - cd(0, 1) * cmat::Identity(n, n)).partialPivLu().inverse();
    cmat rp = -r * hprime.matrix() * r;
    AvronElgart a;
    a.lhs = op_norm(h.matrix() * rp);
    a.rhs = 2 * std::sqrt(c0 + 4 * c1);
    a.holds = a.lhs <= a.rhs * (1 + 1e-12);
    return a;
}

inline cmat pauli_x() { return (cmat(2, 2) << 0, 1, 1, 0).finished(); }
inline cmat pauli_y() { return (cmat(2, 2) << 0, cd(0, -1), cd(0, 1), 0).finished(); }
inline cmat pauli_z() { return (cmat(2, 2) << 1, 0, 0, -1).finished(); }

inline cmat random_complex(Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    cmat a(n, n);
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < n; ++i) a(i, j) = cd(g(rng), g(rng));
    return a;
}

inline cmat random_hermitian(Index n, std::mt19937_64& rng) {
    cmat a = random_complex(n, rng);
    return 0.5 * (a + a.adjoint());
}

inline cmat commutator(const cmat& a, const cmat& b) { return a * b - b * a; }

}  // namespace adiabatic
