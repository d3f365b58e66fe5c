#ifndef GME_TAKAGI_HPP
#define GME_TAKAGI_HPP

#include "gme/tensor.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>
#include <vector>

// Takagi (Autonne) factorization Psi = U^T D U of complex symmetric matrices,
// degenerate-block detection, and the orthonormal vector family that exists
// whenever a two-form has a non-symmetric maximizing pair.

namespace gme {

/// Psi = unitary^T diag(values) unitary, values non-negative and non-increasing.
struct TakagiDecomposition {
    MatrixXcd unitary;
    VectorXd values;

    MatrixXcd reconstruct() const {
        return unitary.transpose() * values.asDiagonal() * unitary;
    }
};

/// Maximal run of equal Takagi values. `start` is a 0-based index.
struct DegenerateBlock {
    int start;
    int size;
    double value;
};

struct ObservationVectors {
    UnitVector delta1;
    UnitVector delta2;
    UnitVector eta;
    UnitVector mu;
    UnitVector mu_prime;
};

namespace detail {

// Joint diagonalization of two commuting real symmetric matrices by Jacobi
// sweeps (Cardoso-Souloumiac angle). Returns orthogonal O with O^T A O and
// O^T B O both diagonal up to the pair's joint-diagonalizability limit.
inline Eigen::MatrixXd joint_diagonalize(Eigen::MatrixXd& a, Eigen::MatrixXd& b) {
    const int n = static_cast<int>(a.rows());
    Eigen::MatrixXd o = Eigen::MatrixXd::Identity(n, n);
    if (n < 2) return o;
    for (int sweep = 0; sweep < 60; ++sweep) {
        double largest = 0.0;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                // 2x2 objective matrix G = sum_M h h^T, h = (M_pp - M_qq, 2 M_pq).
                double g11 = 0.0, g12 = 0.0, g22 = 0.0;
                for (const Eigen::MatrixXd* m : {&a, &b}) {
                    const double hp = (*m)(p, p) - (*m)(q, q);
                    const double hq = (*m)(p, q) + (*m)(q, p);
                    g11 += hp * hp;
                    g12 += hp * hq;
                    g22 += hq * hq;
                }
                // Top eigenvector (x, y) of G with x >= 0 encodes (cos 2t, sin 2t).
                const double theta2 = 0.5 * std::atan2(2.0 * g12, g11 - g22);
                double x = std::cos(theta2);
                double y = std::sin(theta2);
                if (x < 0.0) {
                    x = -x;
                    y = -y;
                }
                const double r = std::hypot(x, y);
                if (r < 1e-300) continue;
                const double c = std::sqrt((x + r) / (2.0 * r));
                const double s = y / std::sqrt(2.0 * r * (x + r));
                if (std::abs(s) < 1e-16) continue;
                largest = std::max(largest, std::abs(s));
                for (Eigen::MatrixXd* m : {&a, &b}) {
                    Eigen::VectorXd colp = m->col(p), colq = m->col(q);
                    m->col(p) = c * colp + s * colq;
                    m->col(q) = -s * colp + c * colq;
                    Eigen::RowVectorXd rowp = m->row(p), rowq = m->row(q);
                    m->row(p) = c * rowp + s * rowq;
                    m->row(q) = -s * rowp + c * rowq;
                }
                Eigen::VectorXd op = o.col(p), oq = o.col(q);
                o.col(p) = c * op + s * oq;
                o.col(q) = -s * op + c * oq;
            }
        }
        if (largest < 1e-15) break;
    }
    return o;
}

// Factor a symmetric unitary block as Q^T Q: simultaneously diagonalize the
// commuting real and imaginary parts with a real orthogonal O, then take the
// principal square root of the resulting unit-modulus phases.
inline MatrixXcd factor_symmetric_unitary(const MatrixXcd& s) {
    const int n = static_cast<int>(s.rows());
    Eigen::MatrixXd c = s.real();
    Eigen::MatrixXd e = s.imag();
    c = 0.5 * (c + c.transpose()).eval();
    e = 0.5 * (e + e.transpose()).eval();
    const Eigen::MatrixXd o = joint_diagonalize(c, e);
    MatrixXcd q(n, n);
    for (int j = 0; j < n; ++j) {
        const double theta = std::atan2(e(j, j), c(j, j));
        q.row(j) = std::polar(1.0, 0.5 * theta) * o.col(j).transpose().cast<cplx>();
    }
    return q;
}

}  // namespace detail

/// Takagi factorization of a complex symmetric matrix via its SVD
/// Psi = V S W^+: the unitary mismatch W^T V is block-diagonal over equal
/// singular values and symmetric there; factoring each block as Q^T Q and
/// absorbing Q into W^+ yields the Takagi unitary.
inline TakagiDecomposition takagi_factorize(const MatrixXcd& m) {
    if (m.rows() != m.cols() || m.rows() < 1) {
        throw std::invalid_argument("takagi_factorize: matrix must be square");
    }
    const double scale = m.norm();
    if ((m - m.transpose()).norm() > 1e-10 * std::max(scale, 1e-300)) {
        throw std::invalid_argument("takagi_factorize: matrix is not symmetric");
    }
    const int k = static_cast<int>(m.rows());
    if (scale == 0.0) {
        return TakagiDecomposition{MatrixXcd::Identity(k, k), VectorXd::Zero(k)};
    }
    const MatrixXcd sym = 0.5 * (m + m.transpose());
    Eigen::JacobiSVD<MatrixXcd> svd(sym, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const MatrixXcd& v = svd.matrixU();
    const MatrixXcd& w = svd.matrixV();
    const VectorXd sig = svd.singularValues();

    const MatrixXcd mix = w.transpose() * v;
    // Group singular values; inside a group the SVD may rotate subspaces
    // freely, so the mismatch must be factored jointly there.
    const double group_tol = 1e-10 * sig(0);
    const double zero_tol = 1e-13 * sig(0);
    MatrixXcd q = MatrixXcd::Identity(k, k);
    int start = 0;
    while (start < k) {
        int stop = start + 1;
        while (stop < k && sig(stop - 1) - sig(stop) <= group_tol) ++stop;
        const int size = stop - start;
        if (sig(start) > zero_tol) {
            q.block(start, start, size, size) =
                detail::factor_symmetric_unitary(mix.block(start, start, size, size));
        }
        start = stop;
    }
    return TakagiDecomposition{q * w.adjoint(), sig};
}

/// Partition the Takagi values into maximal runs of (adjacent) equality
/// under `tol`. The leading block decides uniqueness of the maximizer.
inline std::vector<DegenerateBlock> degeneracy_blocks(const TakagiDecomposition& d, double tol) {
    if (tol <= 0.0) throw std::invalid_argument("degeneracy_blocks: tol must be > 0");
    std::vector<DegenerateBlock> blocks;
    const int k = static_cast<int>(d.values.size());
    int start = 0;
    while (start < k) {
        int stop = start + 1;
        while (stop < k && d.values(stop - 1) - d.values(stop) <= tol) ++stop;
        blocks.push_back(DegenerateBlock{start, stop - start, d.values(start)});
        start = stop;
    }
    return blocks;
}

namespace detail {

inline cplx two_form(const MatrixXcd& psi, const VectorXcd& a, const VectorXcd& b) {
    return (a.transpose() * psi * b)(0);
}

}  // namespace detail

/// Coefficient matrix of the two-form of a two-party state:
/// psi(a, b) = a^T Psi b with Psi_{ij} = conj(amplitude_{ij}).
inline MatrixXcd two_form_matrix(const StateTensor& state) {
    if (state.n_parties() != 2) {
        throw std::invalid_argument("two_form_matrix: state must have two parties");
    }
    const int k = state.local_dim();
    MatrixXcd psi(k, k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) psi(i, j) = std::conj(state[i * k + j]);
    }
    return psi;
}

/// For a degenerate two-form with a non-symmetric maximizing pair
/// (alpha, beta), construct orthonormal delta1, delta2 together with
/// eta = (d1+d2)/sqrt2, mu = (d1+i d2)/sqrt2, mu' = (d1-i d2)/sqrt2 such that
/// (i) span{delta1, delta2} = span{alpha, beta}, (ii) the forms at delta1,
/// delta2, eta and the (mu, mu') pair all attain the maximum, and
/// (iii) none of delta1, delta2, eta, mu' is phase-equal to alpha.
inline ObservationVectors observation1_vectors(const MatrixXcd& form, const UnitVector& alpha,
                                               const UnitVector& beta, double tol) {
    if (tol <= 0.0) throw std::invalid_argument("observation1_vectors: tol must be > 0");
    const TakagiDecomposition td = takagi_factorize(form);
    const double r1 = td.values(0);
    if (r1 <= 0.0) throw std::invalid_argument("observation1_vectors: zero form");
    const auto blocks = degeneracy_blocks(td, 1e-8 * r1);
    const int d = blocks.front().size;
    if (d < 2) {
        throw std::invalid_argument(
            "observation1_vectors: leading Takagi value is non-degenerate, "
            "no non-symmetric maximizer exists");
    }
    if (equal_up_to_phase(alpha, beta, tol)) {
        throw std::invalid_argument("observation1_vectors: alpha and beta are phase-equal");
    }
    const cplx val = detail::two_form(form, alpha.amplitudes(), beta.amplitudes());
    if (std::abs(val) < r1 - tol * std::max(r1, 1.0)) {
        throw std::invalid_argument("observation1_vectors: (alpha, beta) does not attain the maximum");
    }

    // Takagi-frame coordinates: beta = U^+ e, alpha = U^+ e* up to phases.
    VectorXcd e = td.unitary * beta.amplitudes();
    const int k = static_cast<int>(e.size());
    double outside = 0.0;
    for (int i = d; i < k; ++i) outside += std::norm(e(i));
    if (std::sqrt(outside) > 1e2 * std::sqrt(tol)) {
        throw std::invalid_argument(
            "observation1_vectors: maximizer does not lie in the degenerate block");
    }
    e = phase_fix(UnitVector(e)).amplitudes();
    e.tail(k - d).setZero();
    e.normalize();

    // Real orthonormal frame spanning span{e, e*}, from Re e and Im e.
    VectorXd x = e.real();
    VectorXd y = e.imag();
    if (y.norm() > x.norm()) std::swap(x, y);
    VectorXd f1 = x / x.norm();
    VectorXd f2 = y - f1.dot(y) * f1;
    if (f2.norm() < 1e-8) {
        throw std::invalid_argument(
            "observation1_vectors: alpha and beta are numerically phase-equal");
    }
    f2 /= f2.norm();

    const MatrixXcd udag = td.unitary.adjoint();
    const auto build = [&](const VectorXd& g1, const VectorXd& g2) {
        ObservationVectors out{
            UnitVector(udag * g1.cast<cplx>()), UnitVector(udag * g2.cast<cplx>()),
            UnitVector(udag * ((g1 + g2) / std::sqrt(2.0)).cast<cplx>()),
            UnitVector(udag * ((g1.cast<cplx>() + cplx(0, 1) * g2.cast<cplx>()) / std::sqrt(2.0))),
            UnitVector(udag * ((g1.cast<cplx>() - cplx(0, 1) * g2.cast<cplx>()) / std::sqrt(2.0)))};
        return out;
    };

    // Both orientations of (f1, f2) satisfy (i) and (ii); they swap the roles
    // of mu and mu', and at most one of the two can make mu' land on alpha.
    ObservationVectors plus = build(f1, f2);
    ObservationVectors minus = build(f1, -f2);
    const double overlap_plus = std::abs(plus.mu_prime.amplitudes().dot(alpha.amplitudes()));
    const double overlap_minus = std::abs(minus.mu_prime.amplitudes().dot(alpha.amplitudes()));
    ObservationVectors out = overlap_plus <= overlap_minus ? std::move(plus) : std::move(minus);

    const double clause_tol = 10.0 * tol;
    const auto attains = [&](const VectorXcd& a, const VectorXcd& b) {
        return std::abs(std::abs(detail::two_form(form, a, b)) - r1) <= clause_tol * std::max(r1, 1.0);
    };
    bool ok = attains(out.delta1.amplitudes(), out.delta1.amplitudes()) &&
              attains(out.delta2.amplitudes(), out.delta2.amplitudes()) &&
              attains(out.eta.amplitudes(), out.eta.amplitudes()) &&
              attains(out.mu.amplitudes(), out.mu_prime.amplitudes());
    ok = ok && std::abs(out.delta1.amplitudes().dot(out.delta2.amplitudes())) <= 1e-10;
    for (const UnitVector* u : {&out.delta1, &out.delta2, &out.eta, &out.mu_prime}) {
        ok = ok && !equal_up_to_phase(*u, alpha, clause_tol);
    }
    if (!ok) {
        throw std::runtime_error("observation1_vectors: constructed vectors fail the clauses");
    }
    return out;
}

}  // namespace gme

#endif  // GME_TAKAGI_HPP
