#ifndef GME_OPERATOR_OPT_HPP
#define GME_OPERATOR_OPT_HPP

#include "gme/optimizer.hpp"
#include "gme/tensor.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

// Maximization of |<phi|X|phi>| over product states (G-hat) and over
// symmetric product states (G-hat_S) for Hermitian observables, symmetry
// classification, and the Bloch correlation form of full-correlation qubit
// operators.

namespace gme {

class HermitianOperator {
  public:
    HermitianOperator(int n_parties, int local_dim, MatrixXcd matrix)
        : n_(n_parties), k_(local_dim), mat_(std::move(matrix)) {
        if (n_ < 1 || k_ < 2) throw std::invalid_argument("HermitianOperator: n >= 1, k >= 2");
        const std::int64_t dim = detail::ipow(k_, n_);
        if (mat_.rows() != dim || mat_.cols() != dim) {
            throw std::invalid_argument("HermitianOperator: matrix must be k^N x k^N");
        }
        const double scale = mat_.norm();
        if (scale > 0.0 && (mat_ - mat_.adjoint()).norm() > 1e-10 * scale) {
            throw std::invalid_argument("HermitianOperator: matrix is not Hermitian");
        }
        mat_ = 0.5 * (mat_ + mat_.adjoint()).eval();
    }

    int n_parties() const { return n_; }
    int local_dim() const { return k_; }
    std::int64_t dim() const { return mat_.rows(); }
    const MatrixXcd& matrix() const { return mat_; }

    /// Largest absolute eigenvalue; the default symmetric-mode shift.
    double spectral_norm() const {
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(mat_, Eigen::EigenvaluesOnly);
        return es.eigenvalues().cwiseAbs().maxCoeff();
    }

  private:
    int n_;
    int k_;
    MatrixXcd mat_;
};

struct SymmetryClass {
    bool perm_invariant = false;
    bool perm_symmetric = false;
    bool positive = false;
    bool full_correlation_qubit = false;
};

namespace detail {

inline VectorXcd product_vector(const std::vector<VectorXcd>& factors, int n, int k) {
    const std::int64_t total = ipow(k, n);
    VectorXcd phi(total);
    for (std::int64_t idx = 0; idx < total; ++idx) {
        cplx amp = 1.0;
        std::int64_t rest = idx;
        for (int party = n - 1; party >= 0; --party) {
            amp *= factors[party](static_cast<int>(rest % k));
            rest /= k;
        }
        phi(idx) = amp;
    }
    return phi;
}

// Effective k x k Hermitian matrix for one slot: X contracted on bra and ket
// with the other factors.
inline MatrixXcd effective_matrix(const HermitianOperator& x,
                                  const std::vector<VectorXcd>& factors, int slot) {
    const int n = x.n_parties();
    const int k = x.local_dim();
    const std::int64_t total = x.dim();
    const std::int64_t stride = ipow(k, n - 1 - slot);
    // Coefficient of each index with the slot digit removed.
    VectorXcd rest_amp(total);
    for (std::int64_t idx = 0; idx < total; ++idx) {
        cplx amp = 1.0;
        std::int64_t rest = idx;
        for (int party = n - 1; party >= 0; --party) {
            const int d = static_cast<int>(rest % k);
            rest /= k;
            if (party != slot) amp *= factors[party](d);
        }
        rest_amp(idx) = amp;
    }
    MatrixXcd h = MatrixXcd::Zero(k, k);
    for (std::int64_t r = 0; r < total; ++r) {
        const int a = static_cast<int>((r / stride) % k);
        const cplx bra = std::conj(rest_amp(r));
        for (std::int64_t c = 0; c < total; ++c) {
            const int b = static_cast<int>((c / stride) % k);
            h(a, b) += bra * x.matrix()(r, c) * rest_amp(c);
        }
    }
    return 0.5 * (h + h.adjoint()).eval();
}

inline double expectation(const HermitianOperator& x, const std::vector<VectorXcd>& factors) {
    const VectorXcd phi = product_vector(factors, x.n_parties(), x.local_dim());
    return std::real(phi.dot(x.matrix() * phi));
}

// (N+1)^2 popcount-collapsed coefficients of <(c0 a + c1 w)^N|X|(c0 a + c1 w)^N>
// restricted to the plane spanned by a and w.
inline MatrixXcd operator_plane_coefficients(const HermitianOperator& x, const VectorXcd& a,
                                             const VectorXcd& w) {
    const int n = x.n_parties();
    const int k = x.local_dim();
    MatrixXcd v(k, 2);
    v.col(0) = a;
    v.col(1) = w;
    // V^(x)N as a k^N x 2^N matrix, built party by party.
    MatrixXcd kron = MatrixXcd::Ones(1, 1);
    for (int party = 0; party < n; ++party) {
        MatrixXcd next(kron.rows() * k, kron.cols() * 2);
        for (Eigen::Index r = 0; r < kron.rows(); ++r) {
            for (Eigen::Index c = 0; c < kron.cols(); ++c) {
                next.block(r * k, c * 2, k, 2) = kron(r, c) * v;
            }
        }
        kron.swap(next);
    }
    const MatrixXcd restricted = kron.adjoint() * x.matrix() * kron;
    MatrixXcd coeff = MatrixXcd::Zero(n + 1, n + 1);
    const int patterns = 1 << n;
    for (int br = 0; br < patterns; ++br) {
        for (int bc = 0; bc < patterns; ++bc) {
            coeff(__builtin_popcount(static_cast<unsigned>(br)),
                  __builtin_popcount(static_cast<unsigned>(bc))) += restricted(br, bc);
        }
    }
    return coeff;
}

inline double operator_plane_value(const MatrixXcd& coeff, int n, double t, double phi) {
    const cplx c1 = std::polar(std::sin(t), phi);
    const double c0 = std::cos(t);
    VectorXcd d(n + 1);
    cplx c1pow = 1.0;
    for (int w = 0; w <= n; ++w) {
        d(w) = std::pow(c0, n - w) * c1pow;
        c1pow *= c1;
    }
    return std::real((d.adjoint() * coeff * d)(0));
}

// Ascent of sign * <a^N|X|a^N> with a single shared vector.
inline std::pair<double, VectorXcd> operator_symmetric_ascent(const HermitianOperator& x,
                                                              double sign, VectorXcd a,
                                                              double shift,
                                                              const OptimizerConfig& cfg) {
    const int n = x.n_parties();
    const int k = x.local_dim();
    std::vector<VectorXcd> factors(n, a);
    const auto value_of = [&](const VectorXcd& vec) {
        std::vector<VectorXcd> fs(n, vec);
        return sign * expectation(x, fs);
    };
    double val = value_of(a);
    double best_val = val;
    VectorXcd best_a = a;
    for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
        for (int j = 0; j < n; ++j) factors[j] = a;
        MatrixXcd h = MatrixXcd::Zero(k, k);
        for (int slot = 0; slot < n; ++slot) h += effective_matrix(x, factors, slot);
        h = (sign / n) * h + shift * MatrixXcd::Identity(k, k);
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
        const VectorXcd cand = es.eigenvectors().col(k - 1);
        const double cand_val = value_of(cand);
        double next_val;
        if (cand_val >= val) {
            a = cand;
            next_val = cand_val;
        } else {
            next_val = val;
        }
        if (next_val > best_val) {
            best_val = next_val;
            best_a = a;
        }
        if (next_val - val < cfg.convergence_tol) {
            // Stall: polish over the plane spanned by a and the residual of
            // the top eigenvector.
            VectorXcd w = cand - a.dot(cand) * a;
            bool improved = false;
            if (w.norm() > 1e-12) {
                w /= w.norm();
                const MatrixXcd coeff = operator_plane_coefficients(x, a, w);
                double pt_best = -1e300, pt_t = 0.0, pt_p = 0.0;
                double t_lo = 0.0, t_hi = M_PI / 2.0, p_lo = 0.0, p_hi = 2.0 * M_PI;
                const int nt = 33, np = 48;
                for (int level = 0; level < 6; ++level) {
                    const double dt = (t_hi - t_lo) / (nt - 1);
                    const double dp = (p_hi - p_lo) / np;
                    for (int i = 0; i < nt; ++i) {
                        for (int j = 0; j < np; ++j) {
                            const double tt = t_lo + i * dt;
                            const double pp = p_lo + j * dp;
                            const double pv = sign * operator_plane_value(coeff, n, tt, pp);
                            if (pv > pt_best) {
                                pt_best = pv;
                                pt_t = tt;
                                pt_p = pp;
                            }
                        }
                    }
                    t_lo = std::max(0.0, pt_t - 2 * dt);
                    t_hi = std::min(M_PI / 2.0, pt_t + 2 * dt);
                    p_lo = pt_p - 2 * dp;
                    p_hi = pt_p + 2 * dp;
                }
                if (pt_best > val + cfg.convergence_tol) {
                    VectorXcd cand2 = std::cos(pt_t) * a + std::polar(std::sin(pt_t), pt_p) * w;
                    cand2.normalize();
                    const double cv = value_of(cand2);
                    if (cv > val + cfg.convergence_tol) {
                        a = cand2;
                        val = cv;
                        if (cv > best_val) {
                            best_val = cv;
                            best_a = a;
                        }
                        improved = true;
                    }
                }
            }
            if (!improved) break;
        } else {
            val = next_val;
        }
    }
    return {best_val, best_a};
}

}  // namespace detail

/// G-hat(X) = max over product states |<phi|X|phi>|: alternating effective-
/// matrix eigenvector updates, largest-|eigenvalue| selection (ties toward
/// the positive eigenvalue), deterministic multi-start.
inline OptimizationResult g_hat(const HermitianOperator& x, const OptimizerConfig& cfg = {}) {
    cfg.validate();
    const int n = x.n_parties();
    const int k = x.local_dim();
    const double shift = x.spectral_norm();

    double best_val = -1.0;
    std::vector<UnitVector> best_factors;
    int best_iters = 0;
    bool best_conv = false;
    std::vector<double> restart_values;

    for (int restart = 0; restart < cfg.restarts; ++restart) {
        std::mt19937_64 rng(detail::subseed(cfg.master_seed, restart) ^ 0x0F0FULL);
        std::vector<VectorXcd> factors;
        for (int j = 0; j < n; ++j) factors.push_back(detail::random_factor(k, Field::Complex, rng));
        double value = std::abs(detail::expectation(x, factors));
        int used = 0;
        bool conv = false;
        for (int sweep = 1; sweep <= cfg.max_iterations; ++sweep) {
            used = sweep;
            for (int slot = 0; slot < n; ++slot) {
                const MatrixXcd h = detail::effective_matrix(x, factors, slot);
                Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
                const auto ev = es.eigenvalues();
                int pick = 0;
                double mag = -1.0;
                for (int i = 0; i < k; ++i) {
                    const double m = std::abs(ev(i));
                    if (m > mag + 1e-15 || (std::abs(m - mag) <= 1e-15 && ev(i) > 0.0)) {
                        mag = std::max(m, mag);
                        pick = i;
                    }
                }
                factors[slot] = es.eigenvectors().col(pick);
            }
            const double next = std::abs(detail::expectation(x, factors));
            if (next - value < cfg.convergence_tol) {
                value = std::max(value, next);
                // Stall: compare with the best symmetric product seeded from
                // the aligned factor mean, for both signs of the expectation.
                std::vector<UnitVector> uf;
                for (const auto& f : factors) uf.emplace_back(f);
                const VectorXcd seed = detail::phase_aligned_mean(uf);
                OptimizerConfig sub = cfg;
                sub.max_iterations = std::max(200, cfg.max_iterations / 4);
                double sym_best = -1.0;
                VectorXcd sym_a = seed;
                for (const double sign : {1.0, -1.0}) {
                    const auto [sv, sa] =
                        detail::operator_symmetric_ascent(x, sign, seed, shift, sub);
                    if (sv > sym_best) {
                        sym_best = sv;
                        sym_a = sa;
                    }
                }
                if (sym_best > value + cfg.convergence_tol) {
                    for (int j = 0; j < n; ++j) factors[j] = sym_a;
                    value = std::abs(detail::expectation(x, factors));
                    continue;
                }
                conv = true;
                break;
            }
            value = next;
        }
        restart_values.push_back(value);
        if (value > best_val + 1e-15) {
            best_val = value;
            best_factors.clear();
            for (const auto& f : factors) best_factors.emplace_back(f);
            best_iters = used;
            best_conv = conv;
        }
    }
    return OptimizationResult{best_val, ProductState(std::move(best_factors)), best_iters,
                              best_conv, std::move(restart_values)};
}

/// G-hat_S(X) = max over symmetric product states |<phi|X|phi>|: shifted
/// single-vector updates with the averaged effective matrix, run for both
/// signs of X.
inline std::pair<double, UnitVector> g_hat_symmetric(const HermitianOperator& x,
                                                     const OptimizerConfig& cfg = {}) {
    cfg.validate();
    const int k = x.local_dim();
    const double shift = x.spectral_norm();
    double best = -1.0;
    VectorXcd best_a = VectorXcd::Unit(k, 0);
    for (const double sign : {1.0, -1.0}) {
        for (int restart = 0; restart < cfg.restarts; ++restart) {
            std::mt19937_64 rng(detail::subseed(cfg.master_seed, restart) ^ 0x5E7AULL);
            VectorXcd a0 = detail::random_factor(k, Field::Complex, rng);
            const auto [val, a] = detail::operator_symmetric_ascent(x, sign, a0, shift, cfg);
            if (val > best + 1e-15) {
                best = val;
                best_a = a;
            }
        }
    }
    return {best, UnitVector(best_a)};
}

namespace detail {

inline std::int64_t permute_index_swap(std::int64_t idx, int n, int k, int p, int q) {
    return transpose_index(idx, n, k, p, q);
}

// Pi_S M Pi_S by averaging rows and columns over permutation orbits.
inline MatrixXcd project_symmetric_both_sides(const MatrixXcd& m, int n, int k) {
    const std::int64_t total = m.rows();
    std::vector<std::int64_t> key(total);
    std::unordered_map<std::int64_t, std::vector<std::int64_t>> orbits;
    for (std::int64_t idx = 0; idx < total; ++idx) {
        key[idx] = occupation_key(idx, n, k);
        orbits[key[idx]].push_back(idx);
    }
    MatrixXcd cols = MatrixXcd::Zero(total, total);
    for (const auto& [kk, members] : orbits) {
        VectorXcd mean = VectorXcd::Zero(total);
        for (const std::int64_t c : members) mean += m.col(c);
        mean /= static_cast<double>(members.size());
        for (const std::int64_t c : members) cols.col(c) = mean;
    }
    MatrixXcd both = MatrixXcd::Zero(total, total);
    for (const auto& [kk, members] : orbits) {
        Eigen::RowVectorXcd mean = Eigen::RowVectorXcd::Zero(total);
        for (const std::int64_t r : members) mean += cols.row(r);
        mean /= static_cast<double>(members.size());
        for (const std::int64_t r : members) both.row(r) = mean;
    }
    return both;
}

// One nonzero entry per column of a Pauli matrix: row index and value of
// sigma[., c].
inline void pauli_column(int pauli, int c, int& r, cplx& value) {
    switch (pauli) {
        case 0: r = c; value = 1.0; break;
        case 1: r = 1 - c; value = 1.0; break;
        case 2: r = 1 - c; value = c == 0 ? cplx(0.0, 1.0) : cplx(0.0, -1.0); break;
        default: r = c; value = c == 0 ? 1.0 : -1.0; break;
    }
}

// Tr(X sigma_s) for an N-qubit Pauli string s (digits base 4, party 1 most
// significant).
inline cplx pauli_trace(const MatrixXcd& x, int n, std::int64_t string_code) {
    const std::int64_t total = x.rows();
    cplx acc = 0.0;
    for (std::int64_t c = 0; c < total; ++c) {
        std::int64_t rest_s = string_code;
        std::int64_t rest_c = c;
        std::int64_t r = 0;
        cplx phase = 1.0;
        std::int64_t bitpos = 1;
        for (int party = n - 1; party >= 0; --party) {
            const int pauli = static_cast<int>(rest_s % 4);
            rest_s /= 4;
            const int cbit = static_cast<int>(rest_c % 2);
            rest_c /= 2;
            int rbit;
            cplx v;
            pauli_column(pauli, cbit, rbit, v);
            phase *= v;
            r += rbit * bitpos;
            bitpos *= 2;
        }
        acc += x(r, c) * phase;
    }
    return acc;
}

}  // namespace detail

/// Symmetry classification at tolerance 1e-10 (relative to the operator
/// norm): permutational invariance via all transposition conjugations,
/// permutational symmetry via Pi_S X Pi_S, positivity via the spectrum, and
/// for qubits the vanishing of every Pauli coefficient containing an
/// identity factor.
inline SymmetryClass classify(const HermitianOperator& x) {
    const int n = x.n_parties();
    const int k = x.local_dim();
    const std::int64_t total = x.dim();
    const double scale = std::max(x.matrix().norm(), 1e-300);
    SymmetryClass out;

    out.perm_invariant = true;
    for (int p = 0; p < n && out.perm_invariant; ++p) {
        for (int q = p + 1; q < n && out.perm_invariant; ++q) {
            double dev = 0.0;
            for (std::int64_t r = 0; r < total; ++r) {
                const std::int64_t rp = transpose_index(r, n, k, p, q);
                for (std::int64_t c = 0; c < total; ++c) {
                    const std::int64_t cp = transpose_index(c, n, k, p, q);
                    dev += std::norm(x.matrix()(rp, cp) - x.matrix()(r, c));
                }
            }
            if (std::sqrt(dev) > 1e-10 * scale) out.perm_invariant = false;
        }
    }

    const MatrixXcd projected = detail::project_symmetric_both_sides(x.matrix(), n, k);
    out.perm_symmetric = (x.matrix() - projected).norm() <= 1e-10 * scale;

    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(x.matrix(), Eigen::EigenvaluesOnly);
    out.positive = es.eigenvalues().minCoeff() >= -1e-10 * scale;

    if (k == 2) {
        out.full_correlation_qubit = true;
        const std::int64_t strings = detail::ipow(4, n);
        const double thresh = 1e-10 * scale;
        for (std::int64_t s = 0; s < strings && out.full_correlation_qubit; ++s) {
            bool has_identity = false;
            std::int64_t rest = s;
            for (int j = 0; j < n; ++j) {
                if (rest % 4 == 0) has_identity = true;
                rest /= 4;
            }
            if (!has_identity) continue;
            const double coeff =
                std::abs(detail::pauli_trace(x.matrix(), n, s)) / static_cast<double>(total);
            if (coeff > thresh) out.full_correlation_qubit = false;
        }
    }
    return out;
}

/// Real symmetric N-linear form over R^3 equivalent to a full-correlation
/// permutationally invariant qubit observable; lambda(r_1, ..., r_N) equals
/// <phi|X|phi> at the product state with those Bloch vectors.
struct BlochForm {
    int n_parties;
    VectorXd coefficients;  // 3^N entries, row-major over {x, y, z}

    double evaluate(const std::vector<Eigen::Vector3d>& bloch) const {
        const std::int64_t total = coefficients.size();
        double acc = 0.0;
        for (std::int64_t idx = 0; idx < total; ++idx) {
            double term = coefficients(idx);
            std::int64_t rest = idx;
            for (int party = n_parties - 1; party >= 0; --party) {
                term *= bloch[party](static_cast<int>(rest % 3));
                rest /= 3;
            }
            acc += term;
        }
        return acc;
    }
};

inline BlochForm bloch_correlation_form(const HermitianOperator& x) {
    if (x.local_dim() != 2) {
        throw std::invalid_argument("bloch_correlation_form: requires qubits (k = 2)");
    }
    const SymmetryClass cls = classify(x);
    if (!cls.full_correlation_qubit || !cls.perm_invariant) {
        throw std::invalid_argument(
            "bloch_correlation_form: operator must be permutationally invariant with only "
            "full correlation terms");
    }
    const int n = x.n_parties();
    const std::int64_t total = detail::ipow(3, n);
    const double denom = static_cast<double>(x.dim());
    VectorXd coeff(total);
    for (std::int64_t idx = 0; idx < total; ++idx) {
        // Map base-3 digits {0,1,2} to Pauli labels {1,2,3}.
        std::int64_t code = 0;
        std::int64_t rest = idx;
        std::int64_t base = 1;
        for (int j = 0; j < n; ++j) {
            code += (rest % 3 + 1) * base;
            rest /= 3;
            base *= 4;
        }
        const cplx t = detail::pauli_trace(x.matrix(), n, code) / denom;
        coeff(idx) = std::real(t);
    }
    return BlochForm{n, std::move(coeff)};
}

/// Maximum of |lambda| over unit Bloch vectors via the real-field product
/// optimizer; returns the value and the maximizing vectors.
inline std::pair<double, std::vector<Eigen::Vector3d>> bloch_form_max(const BlochForm& form,
                                                                      OptimizerConfig cfg = {}) {
    const double scale = form.coefficients.norm();
    if (scale == 0.0) return {0.0, {}};
    cfg.field = Field::Real;
    const StateTensor as_state(form.n_parties, 3, (form.coefficients / scale).cast<cplx>());
    const OptimizationResult res = closest_product_state(as_state, cfg);
    std::vector<Eigen::Vector3d> bloch;
    bloch.reserve(form.n_parties);
    for (const auto& f : res.maximizer.factors()) bloch.push_back(f.amplitudes().real());
    return {scale * res.overlap_g, std::move(bloch)};
}

/// Restriction of the Bloch maximization to a single shared vector.
inline std::pair<double, Eigen::Vector3d> bloch_form_symmetric_max(const BlochForm& form,
                                                                   OptimizerConfig cfg = {}) {
    const double scale = form.coefficients.norm();
    if (scale == 0.0) return {0.0, Eigen::Vector3d::UnitZ()};
    cfg.field = Field::Real;
    const StateTensor as_state(form.n_parties, 3, (form.coefficients / scale).cast<cplx>());
    const SymmetricOptimizationResult res = closest_symmetric_product_state(as_state, cfg);
    return {scale * res.value, res.maximizer.amplitudes().real()};
}

}  // namespace gme

#endif  // GME_OPERATOR_OPT_HPP
