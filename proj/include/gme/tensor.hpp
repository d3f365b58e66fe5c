#ifndef GME_TENSOR_HPP
#define GME_TENSOR_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

// Pure multiparticle states as dense coefficient tensors, product states,
// and the N-linear form <psi|a1,...,aN>. Everything here is an immutable
// value; all functions are pure.

namespace gme {

using cplx = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

constexpr double kNormTol = 1e-12;

/// Scalar field of the optimization: full complex maximization, or the
/// restriction to real product vectors.
enum class Field { Complex, Real };

namespace detail {

inline void require_finite(const VectorXcd& v, const char* what) {
    if (!v.allFinite()) {
        throw std::invalid_argument(std::string(what) + ": non-finite amplitude");
    }
}

// Deterministic seed derivation; avalanche so nearby master seeds decouple.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t subseed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master + 0x9E3779B97F4A7C15ULL * (index + 1));
}

inline std::int64_t ipow(std::int64_t base, int exp) {
    std::int64_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

}  // namespace detail

/// Normalized vector in the k-dimensional local space, k >= 2.
class UnitVector {
  public:
    explicit UnitVector(VectorXcd amplitudes) : amps_(std::move(amplitudes)) {
        if (amps_.size() < 2) throw std::invalid_argument("UnitVector: dim must be >= 2");
        detail::require_finite(amps_, "UnitVector");
        const double n = amps_.norm();
        if (std::abs(n - 1.0) > kNormTol) {
            if (n == 0.0) throw std::invalid_argument("UnitVector: zero vector");
            amps_ /= n;
        }
    }

    int dim() const { return static_cast<int>(amps_.size()); }
    const VectorXcd& amplitudes() const { return amps_; }
    cplx operator[](int i) const { return amps_(i); }

  private:
    VectorXcd amps_;
};

/// Pure N-party, k-level state. Amplitudes are stored row-major with party 1
/// as the most significant base-k digit: flat(i1,...,iN) = sum_j i_j k^(N-j).
class StateTensor {
  public:
    StateTensor(int n_parties, int local_dim, VectorXcd amplitudes)
        : n_(n_parties), k_(local_dim), amps_(std::move(amplitudes)) {
        if (n_ < 1) throw std::invalid_argument("StateTensor: n_parties must be >= 1");
        if (k_ < 2) throw std::invalid_argument("StateTensor: local_dim must be >= 2");
        const std::int64_t want = detail::ipow(k_, n_);
        if (amps_.size() != want) {
            throw std::invalid_argument("StateTensor: expected " + std::to_string(want) +
                                        " amplitudes, got " + std::to_string(amps_.size()));
        }
        detail::require_finite(amps_, "StateTensor");
        const double n = amps_.norm();
        if (n == 0.0) throw std::invalid_argument("StateTensor: zero vector");
        if (std::abs(n - 1.0) > kNormTol) amps_ /= n;
    }

    int n_parties() const { return n_; }
    int local_dim() const { return k_; }
    std::int64_t size() const { return amps_.size(); }
    const VectorXcd& amplitudes() const { return amps_; }
    cplx operator[](std::int64_t idx) const { return amps_(idx); }

    /// Base-k digit of `idx` belonging to party `party` (0-based).
    int digit(std::int64_t idx, int party) const {
        const std::int64_t stride = detail::ipow(k_, n_ - 1 - party);
        return static_cast<int>((idx / stride) % k_);
    }

  private:
    int n_;
    int k_;
    VectorXcd amps_;
};

/// List of per-party unit vectors |a>|b>|c>..., all sharing one local dimension.
class ProductState {
  public:
    explicit ProductState(std::vector<UnitVector> factors) : factors_(std::move(factors)) {
        if (factors_.empty()) throw std::invalid_argument("ProductState: no factors");
        const int k = factors_.front().dim();
        for (const auto& f : factors_) {
            if (f.dim() != k) throw std::invalid_argument("ProductState: mixed local dimensions");
        }
    }

    int n_parties() const { return static_cast<int>(factors_.size()); }
    int local_dim() const { return factors_.front().dim(); }
    const UnitVector& factor(int i) const { return factors_.at(i); }
    const std::vector<UnitVector>& factors() const { return factors_; }

    /// Replace one factor, returning a new value.
    ProductState with_factor(int slot, UnitVector v) const {
        auto fs = factors_;
        fs.at(slot) = std::move(v);
        return ProductState(std::move(fs));
    }

  private:
    std::vector<UnitVector> factors_;
};

namespace detail {

inline void check_pairing(const StateTensor& state, const ProductState& product) {
    if (product.n_parties() != state.n_parties() || product.local_dim() != state.local_dim()) {
        throw std::invalid_argument("state/product dimension mismatch");
    }
}

}  // namespace detail

/// psi(a1,...,aN) = <psi|a1,...,aN> = sum_idx conj(psi_idx) prod_j (a_j)_{i_j}.
inline cplx evaluate_form(const StateTensor& state, const ProductState& product) {
    detail::check_pairing(state, product);
    const int n = state.n_parties();
    const int k = state.local_dim();
    // Contract one party at a time, last party first (contiguous blocks).
    VectorXcd work = state.amplitudes().conjugate();
    for (int party = n - 1; party >= 0; --party) {
        const VectorXcd& a = product.factor(party).amplitudes();
        const std::int64_t rows = detail::ipow(k, party);
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

/// Vector v with v_i = psi evaluated with basis vector e_i placed in `slot`
/// (0-based) and the product's other factors kept fixed. Satisfies
/// evaluate_form(state, product-with-slot-replaced-by-b) = sum_i v_i b_i.
inline VectorXcd contract_all_but(const StateTensor& state, const ProductState& product,
                                  int slot) {
    detail::check_pairing(state, product);
    const int n = state.n_parties();
    const int k = state.local_dim();
    if (slot < 0 || slot >= n) throw std::invalid_argument("contract_all_but: slot out of range");
    VectorXcd v = VectorXcd::Zero(k);
    const std::int64_t total = state.size();
    for (std::int64_t idx = 0; idx < total; ++idx) {
        cplx term = std::conj(state[idx]);
        if (term == cplx(0.0)) continue;
        std::int64_t rest = idx;
        int slot_digit = 0;
        for (int party = n - 1; party >= 0; --party) {
            const int d = static_cast<int>(rest % k);
            rest /= k;
            if (party == slot) {
                slot_digit = d;
            } else {
                term *= product.factor(party)[d];
            }
        }
        v(slot_digit) += term;
    }
    return v;
}

/// k x k matrix M with M_{ab} = psi evaluated with e_a at slot_a, e_b at
/// slot_b and the product's remaining factors fixed. For a symmetric state
/// this is a complex symmetric matrix.
inline MatrixXcd quadratic_form_matrix(const StateTensor& state, const ProductState& product,
                                       int slot_a, int slot_b) {
    detail::check_pairing(state, product);
    const int n = state.n_parties();
    const int k = state.local_dim();
    if (slot_a == slot_b) throw std::invalid_argument("quadratic_form_matrix: equal slots");
    if (slot_a < 0 || slot_a >= n || slot_b < 0 || slot_b >= n) {
        throw std::invalid_argument("quadratic_form_matrix: slot out of range");
    }
    MatrixXcd m = MatrixXcd::Zero(k, k);
    const std::int64_t total = state.size();
    for (std::int64_t idx = 0; idx < total; ++idx) {
        cplx term = std::conj(state[idx]);
        if (term == cplx(0.0)) continue;
        std::int64_t rest = idx;
        int da = 0, db = 0;
        for (int party = n - 1; party >= 0; --party) {
            const int d = static_cast<int>(rest % k);
            rest /= k;
            if (party == slot_a) {
                da = d;
            } else if (party == slot_b) {
                db = d;
            } else {
                term *= product.factor(party)[d];
            }
        }
        m(da, db) += term;
    }
    return m;
}

namespace detail {

// Orbit key of a flat index under party permutations: digits sorted, i.e.
// the occupation signature packed base k.
inline std::int64_t occupation_key(std::int64_t idx, int n, int k) {
    if (k > 16) throw std::invalid_argument("occupation_key: local_dim > 16 unsupported");
    int counts[16] = {0};
    std::int64_t rest = idx;
    for (int j = 0; j < n; ++j) {
        ++counts[rest % k];
        rest /= k;
    }
    std::int64_t key = 0;
    for (int level = 0; level < k; ++level) {
        for (int c = 0; c < counts[level]; ++c) key = key * k + level;
    }
    return key;
}

}  // namespace detail

/// Projection onto the symmetric subspace followed by renormalization.
/// Throws if the projection annihilates the state.
inline StateTensor symmetrize(const StateTensor& state) {
    const int n = state.n_parties();
    const int k = state.local_dim();
    const std::int64_t total = state.size();
    // Pi_S averages amplitudes over each permutation orbit of indices.
    std::unordered_map<std::int64_t, cplx> sums;
    std::unordered_map<std::int64_t, std::int64_t> counts;
    for (std::int64_t idx = 0; idx < total; ++idx) {
        const std::int64_t key = detail::occupation_key(idx, n, k);
        sums[key] += state[idx];
        counts[key] += 1;
    }
    VectorXcd out(total);
    for (std::int64_t idx = 0; idx < total; ++idx) {
        const std::int64_t key = detail::occupation_key(idx, n, k);
        out(idx) = sums[key] / static_cast<double>(counts[key]);
    }
    const double nrm = out.norm();
    if (nrm <= 1e-12) throw std::runtime_error("symmetrize: projection annihilates the state");
    return StateTensor(n, k, out / nrm);
}

/// Swap the digits of two parties inside a flat index.
inline std::int64_t transpose_index(std::int64_t idx, int n, int k, int p, int q) {
    const std::int64_t sp = detail::ipow(k, n - 1 - p);
    const std::int64_t sq = detail::ipow(k, n - 1 - q);
    const int dp = static_cast<int>((idx / sp) % k);
    const int dq = static_cast<int>((idx / sq) % k);
    return idx + (dq - dp) * sp + (dp - dq) * sq;
}

/// Cyclic shift of parties (party j takes the digit of party j+1, the last
/// takes the first).
inline std::int64_t cycle_index(std::int64_t idx, int n, int k) {
    std::int64_t rest = idx;
    const std::int64_t lead = detail::ipow(k, n - 1);
    const int first = static_cast<int>(idx / lead);
    rest = idx % lead;
    return rest * k + first;
}

/// True iff the max amplitude deviation under every party transposition is <= tol.
inline bool is_symmetric(const StateTensor& state, double tol = 1e-10) {
    const int n = state.n_parties();
    const int k = state.local_dim();
    for (int p = 0; p < n; ++p) {
        for (int q = p + 1; q < n; ++q) {
            for (std::int64_t idx = 0; idx < state.size(); ++idx) {
                const std::int64_t jdx = transpose_index(idx, n, k, p, q);
                if (std::abs(state[idx] - state[jdx]) > tol) return false;
            }
        }
    }
    return true;
}

/// True iff the max amplitude deviation under the cyclic shift is <= tol.
inline bool is_translation_invariant(const StateTensor& state, double tol = 1e-10) {
    for (std::int64_t idx = 0; idx < state.size(); ++idx) {
        const std::int64_t jdx = cycle_index(idx, state.n_parties(), state.local_dim());
        if (std::abs(state[idx] - state[jdx]) > tol) return false;
    }
    return true;
}

namespace detail {

inline VectorXcd gaussian_complex(std::int64_t len, std::mt19937_64& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    VectorXcd v(len);
    for (std::int64_t i = 0; i < len; ++i) {
        const double re = dist(rng);
        const double im = dist(rng);
        v(i) = cplx(re, im);
    }
    return v;
}

}  // namespace detail

/// Haar-like sampling: i.i.d. complex Gaussian amplitudes, normalized.
inline StateTensor random_state(int n, int k, std::uint64_t seed) {
    std::mt19937_64 rng(detail::splitmix64(seed));
    VectorXcd v = detail::gaussian_complex(detail::ipow(k, n), rng);
    return StateTensor(n, k, v / v.norm());
}

/// Gaussian unit vector in C^k.
inline UnitVector random_unit_vector(int k, std::uint64_t seed) {
    std::mt19937_64 rng(detail::splitmix64(seed));
    VectorXcd v = detail::gaussian_complex(k, rng);
    return UnitVector(v / v.norm());
}

/// Haar-distributed k x k unitary: QR of a complex Gaussian matrix with the
/// R diagonal phases absorbed into Q.
inline MatrixXcd random_unitary(int k, std::uint64_t seed) {
    std::mt19937_64 rng(detail::splitmix64(seed ^ 0x5EEDULL));
    std::normal_distribution<double> dist(0.0, 1.0);
    MatrixXcd g(k, k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            const double re = dist(rng);
            const double im = dist(rng);
            g(i, j) = cplx(re, im);
        }
    }
    Eigen::HouseholderQR<MatrixXcd> qr(g);
    MatrixXcd q = qr.householderQ();
    const MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < k; ++j) {
        const cplx d = r(j, j);
        q.col(j) *= std::abs(d) > 0.0 ? d / std::abs(d) : cplx(1.0, 0.0);
    }
    return q;
}

/// Uniform sample from the symmetric subspace: Gaussian coefficients in the
/// occupation-number (Dicke) orthonormal basis. Exactly symmetric by
/// construction.
inline StateTensor random_symmetric_state(int n, int k, std::uint64_t seed) {
    std::mt19937_64 rng(detail::splitmix64(seed ^ 0xD1C3ULL));
    const std::int64_t total = detail::ipow(k, n);
    // First pass: orbit sizes per occupation class.
    std::unordered_map<std::int64_t, double> orbit_size;
    for (std::int64_t idx = 0; idx < total; ++idx) {
        orbit_size[detail::occupation_key(idx, n, k)] += 1.0;
    }
    // One Gaussian coefficient per Dicke basis vector, in key order.
    std::vector<std::int64_t> keys;
    keys.reserve(orbit_size.size());
    for (const auto& [key, _] : orbit_size) keys.push_back(key);
    std::sort(keys.begin(), keys.end());
    std::unordered_map<std::int64_t, cplx> coeff;
    std::normal_distribution<double> dist(0.0, 1.0);
    for (const auto key : keys) {
        const double re = dist(rng);
        const double im = dist(rng);
        coeff[key] = cplx(re, im);
    }
    // |D_mu> has amplitude 1/sqrt(|orbit|) on every index of its orbit.
    VectorXcd v(total);
    for (std::int64_t idx = 0; idx < total; ++idx) {
        const std::int64_t key = detail::occupation_key(idx, n, k);
        v(idx) = coeff[key] / std::sqrt(orbit_size[key]);
    }
    return StateTensor(n, k, v / v.norm());
}

/// Multiply by the phase that makes the first component of largest magnitude
/// real and positive.
inline UnitVector phase_fix(const UnitVector& v) {
    int best = 0;
    double mag = 0.0;
    for (int i = 0; i < v.dim(); ++i) {
        const double m = std::abs(v[i]);
        if (m > mag + 1e-15) {
            mag = m;
            best = i;
        }
    }
    if (mag == 0.0) throw std::invalid_argument("phase_fix: zero vector");
    const cplx phase = std::conj(v[best]) / mag;
    return UnitVector(v.amplitudes() * phase);
}

/// alpha == beta up to a global phase: 1 - |<u|v>| <= tol.
inline bool equal_up_to_phase(const UnitVector& u, const UnitVector& v, double tol) {
    if (u.dim() != v.dim()) return false;
    return 1.0 - std::abs(u.amplitudes().dot(v.amplitudes())) <= tol;
}

/// Equality up to a phase as a reusable predicate with a fixed tolerance.
struct PhaseEquivalence {
    double tolerance;

    explicit PhaseEquivalence(double tol) : tolerance(tol) {
        if (tol <= 0.0) throw std::invalid_argument("PhaseEquivalence: tolerance must be > 0");
    }
    bool operator()(const UnitVector& u, const UnitVector& v) const {
        return equal_up_to_phase(u, v, tolerance);
    }
};

/// Computational basis vector e_i in C^k.
inline UnitVector basis_vector(int k, int i) {
    VectorXcd v = VectorXcd::Zero(k);
    v(i) = 1.0;
    return UnitVector(std::move(v));
}

/// Named states used throughout the tests and campaigns.
inline StateTensor ghz_state(int n) {
    const std::int64_t total = detail::ipow(2, n);
    VectorXcd v = VectorXcd::Zero(total);
    v(0) = 1.0 / std::sqrt(2.0);
    v(total - 1) = 1.0 / std::sqrt(2.0);
    return StateTensor(n, 2, std::move(v));
}

inline StateTensor w_state(int n) {
    const std::int64_t total = detail::ipow(2, n);
    VectorXcd v = VectorXcd::Zero(total);
    const double a = 1.0 / std::sqrt(static_cast<double>(n));
    for (int j = 0; j < n; ++j) v(detail::ipow(2, j)) = a;
    return StateTensor(n, 2, std::move(v));
}

}  // namespace gme

#endif  // GME_TENSOR_HPP
