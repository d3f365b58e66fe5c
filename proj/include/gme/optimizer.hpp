#ifndef GME_OPTIMIZER_HPP
#define GME_OPTIMIZER_HPP

#include "gme/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

// Maximal product-state overlap G(psi) by alternating rank-one updates, the
// symmetric-restricted maximum over |a>^(x)N, the pairwise symmetrization of
// a maximizer, and the derived entanglement measures.

namespace gme {

struct OptimizerConfig {
    int max_iterations = 2000;
    double convergence_tol = 1e-12;
    int restarts = 20;
    std::uint64_t master_seed = 0;
    double shift = 1.0;
    Field field = Field::Complex;

    void validate() const {
        if (max_iterations < 1) throw std::invalid_argument("OptimizerConfig: max_iterations >= 1");
        if (convergence_tol <= 0.0) throw std::invalid_argument("OptimizerConfig: convergence_tol > 0");
        if (restarts < 1) throw std::invalid_argument("OptimizerConfig: restarts >= 1");
        if (shift < 0.0) throw std::invalid_argument("OptimizerConfig: shift >= 0");
    }
};

struct OptimizationResult {
    double overlap_g = 0.0;
    ProductState maximizer;
    int iterations_used = 0;
    bool converged = false;
    std::vector<double> restart_values;
};

struct SymmetricOptimizationResult {
    double value = 0.0;
    UnitVector maximizer;
    int iterations_used = 0;
    bool converged = false;
    std::vector<double> restart_values;
    std::vector<UnitVector> restart_maximizers;
};

namespace detail {

inline VectorXcd random_factor(int k, Field field, std::mt19937_64& rng) {
    VectorXcd v = gaussian_complex(k, rng);
    if (field == Field::Real) v = v.real().cast<cplx>();
    const double n = v.norm();
    return n > 0.0 ? VectorXcd(v / n) : VectorXcd::Unit(k, 0);
}

inline ProductState uniform_product(const StateTensor& state, const VectorXcd& a) {
    std::vector<UnitVector> fs(state.n_parties(), UnitVector(a));
    return ProductState(std::move(fs));
}

// <psi|(c0 a + c1 w)^(x)N> collapsed over the plane spanned by a and w:
// the value is sum_w S_w c0^(N-w) c1^w, so the whole restricted polynomial
// is N+1 complex coefficients.
inline VectorXcd plane_coefficients(const StateTensor& state, const VectorXcd& a,
                                    const VectorXcd& w) {
    const int n = state.n_parties();
    const int k = state.local_dim();
    std::vector<VectorXcd> cur{state.amplitudes().conjugate()};
    std::vector<int> weight{0};
    for (int party = n - 1; party >= 0; --party) {
        std::vector<VectorXcd> next;
        std::vector<int> next_weight;
        next.reserve(cur.size() * 2);
        for (std::size_t t = 0; t < cur.size(); ++t) {
            const std::int64_t rows = cur[t].size() / k;
            VectorXcd with_a(rows), with_w(rows);
            for (std::int64_t r = 0; r < rows; ++r) {
                cplx acc_a = 0.0, acc_w = 0.0;
                for (int i = 0; i < k; ++i) {
                    acc_a += cur[t](r * k + i) * a(i);
                    acc_w += cur[t](r * k + i) * w(i);
                }
                with_a(r) = acc_a;
                with_w(r) = acc_w;
            }
            next.push_back(std::move(with_a));
            next_weight.push_back(weight[t]);
            next.push_back(std::move(with_w));
            next_weight.push_back(weight[t] + 1);
        }
        cur = std::move(next);
        weight = std::move(next_weight);
    }
    VectorXcd coeff = VectorXcd::Zero(n + 1);
    for (std::size_t t = 0; t < cur.size(); ++t) coeff(weight[t]) += cur[t](0);
    return coeff;
}

inline double plane_value(const VectorXcd& coeff, double t, double phi) {
    const int n = static_cast<int>(coeff.size()) - 1;
    const cplx c1 = std::polar(std::sin(t), phi);
    const double c0 = std::cos(t);
    cplx acc = 0.0;
    cplx c1pow = 1.0;
    for (int w = 0; w <= n; ++w) {
        acc += coeff(w) * std::pow(c0, n - w) * c1pow;
        c1pow *= c1;
    }
    return std::abs(acc);
}

// Maximize |sum_w S_w cos(t)^(N-w) (sin(t) e^{i phi})^w| by a coarse grid
// with window refinements. Returns (value, t, phi).
inline std::tuple<double, double, double> plane_grid_max(const VectorXcd& coeff, Field field) {
    const int nt = 33;
    const int np = field == Field::Real ? 2 : 64;
    double t_lo = 0.0, t_hi = M_PI / 2.0;
    double p_lo = 0.0, p_hi = 2.0 * M_PI;
    double best = -1.0, best_t = 0.0, best_p = 0.0;
    for (int level = 0; level < 6; ++level) {
        const double dt = (t_hi - t_lo) / (nt - 1);
        const double dp = field == Field::Real ? M_PI : (p_hi - p_lo) / np;
        for (int i = 0; i < nt; ++i) {
            const double t = t_lo + i * dt;
            for (int j = 0; j < np; ++j) {
                const double phi = field == Field::Real ? j * M_PI : p_lo + j * dp;
                const double v = plane_value(coeff, t, phi);
                if (v > best) {
                    best = v;
                    best_t = t;
                    best_p = phi;
                }
            }
        }
        if (field == Field::Real) {
            const double w = 2.0 * dt;
            t_lo = std::max(0.0, best_t - w);
            t_hi = std::min(M_PI / 2.0, best_t + w);
        } else {
            const double wt = 2.0 * dt, wp = 2.0 * dp;
            t_lo = std::max(0.0, best_t - wt);
            t_hi = std::min(M_PI / 2.0, best_t + wt);
            p_lo = best_p - wp;
            p_hi = best_p + wp;
        }
    }
    return {best, best_t, best_p};
}

inline cplx symmetric_value(const StateTensor& state, const VectorXcd& a) {
    const int n = state.n_parties();
    const int k = state.local_dim();
    VectorXcd work = state.amplitudes().conjugate();
    for (int party = 0; party < n; ++party) {
        const std::int64_t rows = work.size() / k;
        VectorXcd next(rows);
        for (std::int64_t r = 0; r < rows; ++r) {
            cplx acc = 0.0;
            for (int i = 0; i < k; ++i) acc += work(r * k + i) * a(i);
            next(r) = acc;
        }
        work.swap(next);
    }
    return work(0);
}

// Contraction of all slots but one against a shared factor.
inline VectorXcd symmetric_contraction(const StateTensor& state, const VectorXcd& a) {
    const int k = state.local_dim();
    const int n = state.n_parties();
    // Contract parties 2..N, leaving party 1; symmetry of use sites does not
    // require the state itself to be symmetric.
    VectorXcd work = state.amplitudes().conjugate();
    for (int party = n - 1; party >= 1; --party) {
        const std::int64_t rows = work.size() / k;
        VectorXcd next(rows);
        for (std::int64_t r = 0; r < rows; ++r) {
            cplx acc = 0.0;
            for (int i = 0; i < k; ++i) acc += work(r * k + i) * a(i);
            next(r) = acc;
        }
        work.swap(next);
    }
    return work;
}

// Single-vector ascent on |<psi|a^(x)N>|: shifted power steps with a
// 2D-subspace polish whenever the first-order steps stall.
inline std::pair<double, VectorXcd> symmetric_ascent(const StateTensor& state, VectorXcd a,
                                                     const OptimizerConfig& cfg,
                                                     std::mt19937_64& rng, int* iterations_used,
                                                     bool* converged) {
    const int n = state.n_parties();
    double best_val = std::abs(symmetric_value(state, a));
    VectorXcd best_a = a;
    int used = 0;
    bool done = false;
    double prev = best_val;
    for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
        used = iter;
        VectorXcd v = symmetric_contraction(state, a);
        if (cfg.field == Field::Real) v = v.real().cast<cplx>();
        if (v.norm() < 1e-14) {
            a = random_factor(state.local_dim(), cfg.field, rng);
            prev = std::abs(symmetric_value(state, a));
            continue;
        }
        const cplx z = symmetric_value(state, a);
        const cplx zeta = std::abs(z) > 1e-300 ? z / std::abs(z) : cplx(1.0, 0.0);
        VectorXcd u = zeta * v.conjugate() + cfg.shift * a;
        if (cfg.field == Field::Real) u = u.real().cast<cplx>();
        const double un = u.norm();
        if (un < 1e-14) {
            a = random_factor(state.local_dim(), cfg.field, rng);
            prev = std::abs(symmetric_value(state, a));
            continue;
        }
        a = u / un;
        double val = std::abs(symmetric_value(state, a));
        if (val > best_val) {
            best_val = val;
            best_a = a;
        }
        if (std::abs(val - prev) < cfg.convergence_tol) {
            // First-order stall: maximize over the plane spanned by the
            // iterate and the gradient residual.
            VectorXcd g = v.conjugate();
            if (cfg.field == Field::Real) g = g.real().cast<cplx>();
            VectorXcd w = g - a.dot(g) * a;
            bool improved = false;
            if (w.norm() > 1e-15) {
                w /= w.norm();
                const VectorXcd coeff = plane_coefficients(state, a, w);
                const auto [pv, pt, pp] = plane_grid_max(coeff, cfg.field);
                if (pv > val + cfg.convergence_tol) {
                    VectorXcd cand =
                        std::cos(pt) * a + std::polar(std::sin(pt), pp) * w;
                    if (cfg.field == Field::Real) cand = cand.real().cast<cplx>();
                    cand.normalize();
                    const double cv = std::abs(symmetric_value(state, cand));
                    if (cv > val + cfg.convergence_tol) {
                        a = cand;
                        val = cv;
                        if (cv > best_val) {
                            best_val = cv;
                            best_a = a;
                        }
                        improved = true;
                    }
                }
            }
            if (!improved) {
                done = true;
                break;
            }
        }
        prev = val;
    }
    if (iterations_used) *iterations_used = used;
    if (converged) *converged = done;
    return {best_val, best_a};
}

inline VectorXcd phase_aligned_mean(const std::vector<UnitVector>& factors) {
    VectorXcd m = factors.front().amplitudes();
    for (std::size_t j = 1; j < factors.size(); ++j) {
        const cplx c = factors.front().amplitudes().dot(factors[j].amplitudes());
        if (std::abs(c) > 1e-12) m += factors[j].amplitudes() * (c / std::abs(c));
    }
    const double n = m.norm();
    return n > 0.5 ? VectorXcd(m / n) : factors.front().amplitudes();
}

}  // namespace detail

/// One alternating update: replace `slot` by the normalized conjugate of the
/// contraction against the other factors (its exact slot-wise optimum). The
/// objective |evaluate_form| never decreases under these updates.
inline ProductState single_slot_update(const StateTensor& state, const ProductState& product,
                                       int slot, Field field = Field::Complex) {
    VectorXcd v = contract_all_but(state, product, slot);
    if (field == Field::Real) v = v.real().cast<cplx>();
    const double n = v.norm();
    if (n < 1e-14) return product;
    return product.with_factor(slot, UnitVector(v.conjugate() / n));
}

/// G(psi) = max over product states of |<psi|phi>|, by alternating
/// rank-one updates with deterministic multi-start.
inline OptimizationResult closest_product_state(const StateTensor& state,
                                                const OptimizerConfig& cfg = {}) {
    cfg.validate();
    const int n = state.n_parties();
    const int k = state.local_dim();

    double best_val = -1.0;
    std::vector<UnitVector> best_factors;
    int best_iters = 0;
    bool best_conv = false;
    std::vector<double> restart_values;
    restart_values.reserve(cfg.restarts);

    for (int restart = 0; restart < cfg.restarts; ++restart) {
        std::mt19937_64 rng(detail::subseed(cfg.master_seed, restart));
        std::vector<UnitVector> factors;
        factors.reserve(n);
        for (int j = 0; j < n; ++j) factors.emplace_back(detail::random_factor(k, cfg.field, rng));
        ProductState prod(factors);

        double value = std::abs(evaluate_form(state, prod));
        int used = 0;
        bool conv = false;
        for (int sweep = 1; sweep <= cfg.max_iterations; ++sweep) {
            used = sweep;
            for (int slot = 0; slot < n; ++slot) {
                VectorXcd v = contract_all_but(state, prod, slot);
                if (cfg.field == Field::Real) v = v.real().cast<cplx>();
                const double nv = v.norm();
                if (nv < 1e-14) {
                    prod = prod.with_factor(slot,
                                            UnitVector(detail::random_factor(k, cfg.field, rng)));
                    continue;
                }
                prod = prod.with_factor(slot, UnitVector(v.conjugate() / nv));
            }
            const double next = std::abs(evaluate_form(state, prod));
            if (next - value < cfg.convergence_tol) {
                value = std::max(value, next);
                // Stall: try the best symmetric product reachable from the
                // aligned mean of the factors; keep it only if strictly better.
                std::mt19937_64 polish_rng(detail::subseed(cfg.master_seed, restart) ^ 0xACEDULL);
                OptimizerConfig sub = cfg;
                sub.max_iterations = std::max(200, cfg.max_iterations / 4);
                const VectorXcd seed_vec = detail::phase_aligned_mean(prod.factors());
                const auto [sym_val, sym_a] =
                    detail::symmetric_ascent(state, seed_vec, sub, polish_rng, nullptr, nullptr);
                if (sym_val > value + cfg.convergence_tol) {
                    prod = detail::uniform_product(state, sym_a);
                    value = std::abs(evaluate_form(state, prod));
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
            best_factors = prod.factors();
            best_iters = used;
            best_conv = conv;
        }
    }

    OptimizationResult out{best_val, ProductState(std::move(best_factors)), best_iters, best_conv,
                           std::move(restart_values)};
    return out;
}

/// Norm of the associated homogeneous polynomial: max_a |<psi|a^(x)N>| over
/// a single shared unit vector, by shifted symmetric power iteration.
/// Requires a symmetric state.
inline SymmetricOptimizationResult closest_symmetric_product_state(const StateTensor& state,
                                                                   const OptimizerConfig& cfg = {}) {
    cfg.validate();
    if (!is_symmetric(state, 1e-8)) {
        throw std::invalid_argument("closest_symmetric_product_state: state is not symmetric");
    }
    const int k = state.local_dim();

    double best_val = -1.0;
    VectorXcd best_a = VectorXcd::Unit(k, 0);
    int best_iters = 0;
    bool best_conv = false;
    std::vector<double> values;
    std::vector<UnitVector> maximizers;
    values.reserve(cfg.restarts);
    maximizers.reserve(cfg.restarts);

    for (int restart = 0; restart < cfg.restarts; ++restart) {
        std::mt19937_64 rng(detail::subseed(cfg.master_seed, restart) ^ 0x51A3ULL);
        VectorXcd a0 = detail::random_factor(k, cfg.field, rng);
        int used = 0;
        bool conv = false;
        const auto [val, a] = detail::symmetric_ascent(state, a0, cfg, rng, &used, &conv);
        values.push_back(val);
        maximizers.emplace_back(UnitVector(a));
        if (val > best_val + 1e-15) {
            best_val = val;
            best_a = a;
            best_iters = used;
            best_conv = conv;
        }
    }

    return SymmetricOptimizationResult{best_val,  UnitVector(best_a),   best_iters,
                                       best_conv, std::move(values),    std::move(maximizers)};
}

/// Pairwise symmetrization of a stationary maximizer for
/// N = 2^l parties: repeatedly replace vector pairs by their normalized sum
/// (keeping the first vector when the pair cancels). The result attains the
/// same form magnitude.
inline UnitVector symmetrize_maximizer(const StateTensor& state, const ProductState& maximizer) {
    const int n = state.n_parties();
    if ((n & (n - 1)) != 0) {
        throw std::invalid_argument("symmetrize_maximizer: n_parties must be a power of two");
    }
    detail::check_pairing(state, maximizer);
    const cplx lambda = evaluate_form(state, maximizer);
    // A maximizer satisfies the stationarity relation
    // psi(., a2, a3, ...) = Lambda <a1, .> at every slot.
    for (int slot = 0; slot < n; ++slot) {
        const VectorXcd v = contract_all_but(state, maximizer, slot);
        const VectorXcd residual =
            v - lambda * maximizer.factor(slot).amplitudes().conjugate();
        if (residual.norm() > 1e-5) {
            throw std::invalid_argument("symmetrize_maximizer: input is not a maximizer");
        }
    }
    std::vector<VectorXcd> vecs;
    vecs.reserve(n);
    for (const auto& f : maximizer.factors()) vecs.push_back(f.amplitudes());
    while (vecs.size() > 1) {
        std::vector<VectorXcd> next;
        next.reserve(vecs.size() / 2);
        for (std::size_t i = 0; i + 1 < vecs.size(); i += 2) {
            VectorXcd s = vecs[i] + vecs[i + 1];
            const double nrm = s.norm();
            next.push_back(nrm < 1e-8 ? vecs[i] : VectorXcd(s / nrm));
        }
        vecs = std::move(next);
    }
    return UnitVector(vecs.front());
}

/// E_G = 1 - g^2.
inline double geometric_measure(double g) {
    if (g < 0.0 || g > 1.0 + 1e-12) {
        throw std::invalid_argument("geometric_measure: g must lie in [0, 1]");
    }
    return 1.0 - std::min(g, 1.0) * std::min(g, 1.0);
}

/// eps_G = -2 log2 g; g = 0 reports an infinite measure.
inline double log_geometric_measure(double g) {
    if (g < 0.0 || g > 1.0 + 1e-12) {
        throw std::invalid_argument("log_geometric_measure: g must lie in [0, 1]");
    }
    if (g == 0.0) return std::numeric_limits<double>::infinity();
    return -2.0 * std::log2(std::min(g, 1.0));
}

/// True iff every pair of maximizer factors is phase-equal within tol.
inline bool verify_symmetric_maximizer(const OptimizationResult& result, double tol) {
    const auto& fs = result.maximizer.factors();
    for (std::size_t i = 0; i < fs.size(); ++i) {
        for (std::size_t j = i + 1; j < fs.size(); ++j) {
            if (!equal_up_to_phase(fs[i], fs[j], tol)) return false;
        }
    }
    return true;
}

}  // namespace gme

#endif  // GME_OPTIMIZER_HPP
