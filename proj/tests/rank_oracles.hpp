#ifndef GME_TESTS_RANK_ORACLES_HPP
#define GME_TESTS_RANK_ORACLES_HPP

#include "gme/tensor.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <numeric>
#include <vector>

// Brute-force subspace-dimension oracles for the tests: the rank of the
// group-averaging projector obtained by explicit orbit enumeration, plus
// dense numerical ranks for sizes where the projector matrix is affordable.
// None of these touch the totient or binomial formulas under test.

namespace gme_tests {

// Rank of the cyclic averaging projector: its image is spanned by one orbit
// sum per cyclic orbit, so enumerate the orbits.
inline std::int64_t cyclic_projector_rank_by_orbits(int n, int k) {
    const std::int64_t total = gme::detail::ipow(k, n);
    std::vector<bool> seen(total, false);
    std::int64_t orbits = 0;
    for (std::int64_t idx = 0; idx < total; ++idx) {
        if (seen[idx]) continue;
        ++orbits;
        std::int64_t cur = idx;
        do {
            seen[cur] = true;
            cur = gme::cycle_index(cur, n, k);
        } while (cur != idx);
    }
    return orbits;
}

// Rank of the symmetrization projector by enumerating occupation classes.
inline std::int64_t symmetric_projector_rank_by_orbits(int n, int k) {
    const std::int64_t total = gme::detail::ipow(k, n);
    std::vector<std::int64_t> keys;
    keys.reserve(total);
    for (std::int64_t idx = 0; idx < total; ++idx) {
        keys.push_back(gme::detail::occupation_key(idx, n, k));
    }
    std::sort(keys.begin(), keys.end());
    return std::unique(keys.begin(), keys.end()) - keys.begin();
}

// Dense numerical rank of the cyclic averaging projector.
inline std::int64_t cyclic_projector_rank_dense(int n, int k) {
    const std::int64_t total = gme::detail::ipow(k, n);
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(total, total);
    for (std::int64_t idx = 0; idx < total; ++idx) {
        std::int64_t cur = idx;
        for (int t = 0; t < n; ++t) {
            p(cur, idx) += 1.0 / n;
            cur = gme::cycle_index(cur, n, k);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p, Eigen::EigenvaluesOnly);
    return (es.eigenvalues().array() > 0.5).count();
}

// Dense numerical rank of the full symmetrization projector (N! terms).
inline std::int64_t symmetric_projector_rank_dense(int n, int k) {
    const std::int64_t total = gme::detail::ipow(k, n);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(total, total);
    std::int64_t nperm = 0;
    do {
        ++nperm;
        for (std::int64_t idx = 0; idx < total; ++idx) {
            std::int64_t digits[16];
            std::int64_t rest = idx;
            for (int j = n - 1; j >= 0; --j) {
                digits[j] = rest % k;
                rest /= k;
            }
            std::int64_t dest = 0;
            for (int j = 0; j < n; ++j) dest = dest * k + digits[perm[j]];
            p(dest, idx) += 1.0;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    p /= static_cast<double>(nperm);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p, Eigen::EigenvaluesOnly);
    return (es.eigenvalues().array() > 0.5).count();
}

}  // namespace gme_tests

#endif  // GME_TESTS_RANK_ORACLES_HPP
