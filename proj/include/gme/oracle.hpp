#ifndef GME_ORACLE_HPP
#define GME_ORACLE_HPP

#include "gme/operator_opt.hpp"
#include "gme/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <tuple>
#include <vector>

// Brute-force grid maximization over product states. Entirely independent of
// the iterative optimizers: every reported value is an evaluation of the
// objective at an explicitly enumerated product state, hence a guaranteed
// lower bound on the true maximum.

namespace gme {

struct GridSpec {
    int points_per_angle = 24;
    int refinement_levels = 3;
    Field field = Field::Complex;
    std::int64_t evaluation_budget = 500000000;

    void validate() const {
        if (points_per_angle < 4) throw std::invalid_argument("GridSpec: m >= 4");
        if (refinement_levels < 0) throw std::invalid_argument("GridSpec: refinement_levels >= 0");
        if (evaluation_budget < 1) throw std::invalid_argument("GridSpec: budget >= 1");
    }
};

namespace detail {

// Angle chart of the unit sphere in C^k (or R^k) with the global phase fixed:
// the first component is real and non-negative.
struct FactorChart {
    int k = 2;
    Field field = Field::Complex;
    std::vector<double> lo, hi;      // closed ranges; phases wrap
    std::vector<bool> periodic;
    std::vector<int> counts;

    static FactorChart make(int k, Field field, int m) {
        FactorChart c;
        c.k = k;
        c.field = field;
        if (k == 2 && field == Field::Complex) {
            c.lo = {0.0, 0.0};
            c.hi = {M_PI, 2.0 * M_PI};
            c.periodic = {false, true};
            c.counts = {m, m};
        } else if (k == 2 && field == Field::Real) {
            c.lo = {-M_PI / 2.0};
            c.hi = {M_PI / 2.0};
            c.periodic = {false};
            c.counts = {m};
        } else if (k == 3 && field == Field::Complex) {
            const int mt = std::max(3, m / 8 + 1);
            const int mp = std::max(6, m / 4);
            c.lo = {0.0, 0.0, 0.0, 0.0};
            c.hi = {M_PI / 2.0, M_PI / 2.0, 2.0 * M_PI, 2.0 * M_PI};
            c.periodic = {false, false, true, true};
            c.counts = {mt, mt, mp, mp};
        } else if (k == 3 && field == Field::Real) {
            const int mt = std::max(3, m / 4);
            const int mp = std::max(6, m / 2);
            c.lo = {0.0, 0.0};
            c.hi = {M_PI / 2.0, 2.0 * M_PI};
            c.periodic = {false, true};
            c.counts = {mt, mp};
        } else {
            throw std::invalid_argument("grid oracle: unsupported (k, field) combination");
        }
        return c;
    }

    VectorXcd vector_at(const std::vector<double>& ang) const {
        VectorXcd v(k);
        if (k == 2 && field == Field::Complex) {
            v(0) = std::cos(ang[0] / 2.0);
            v(1) = std::polar(std::sin(ang[0] / 2.0), ang[1]);
        } else if (k == 2 && field == Field::Real) {
            v(0) = std::cos(ang[0]);
            v(1) = std::sin(ang[0]);
        } else if (k == 3 && field == Field::Complex) {
            v(0) = std::cos(ang[0]);
            v(1) = std::polar(std::sin(ang[0]) * std::cos(ang[1]), ang[2]);
            v(2) = std::polar(std::sin(ang[0]) * std::sin(ang[1]), ang[3]);
        } else {
            v(0) = std::cos(ang[0]);
            v(1) = std::sin(ang[0]) * std::cos(ang[1]);
            v(2) = std::sin(ang[0]) * std::sin(ang[1]);
        }
        return v;
    }
};

struct GridPoint {
    std::vector<double> angles;
    VectorXcd vec;
};

// All grid points of a chart given per-angle axes (values lists).
inline std::vector<GridPoint> chart_points(const FactorChart& chart,
                                           const std::vector<std::vector<double>>& axes) {
    std::vector<GridPoint> pts;
    std::vector<double> ang(axes.size(), 0.0);
    std::vector<std::size_t> idx(axes.size(), 0);
    std::int64_t total = 1;
    for (const auto& a : axes) total *= static_cast<std::int64_t>(a.size());
    pts.reserve(total);
    for (std::int64_t flat = 0; flat < total; ++flat) {
        std::int64_t rest = flat;
        for (int j = static_cast<int>(axes.size()) - 1; j >= 0; --j) {
            idx[j] = rest % axes[j].size();
            rest /= axes[j].size();
            ang[j] = axes[j][idx[j]];
        }
        pts.push_back(GridPoint{ang, chart.vector_at(ang)});
    }
    return pts;
}

inline std::vector<std::vector<double>> coarse_axes(const FactorChart& chart) {
    std::vector<std::vector<double>> axes(chart.lo.size());
    for (std::size_t j = 0; j < chart.lo.size(); ++j) {
        const int m = chart.counts[j];
        std::vector<double> vals(m);
        if (chart.periodic[j]) {
            const double step = (chart.hi[j] - chart.lo[j]) / m;
            for (int i = 0; i < m; ++i) vals[i] = chart.lo[j] + i * step;
        } else {
            const double step = (chart.hi[j] - chart.lo[j]) / (m - 1);
            for (int i = 0; i < m; ++i) vals[i] = chart.lo[j] + i * step;
        }
        axes[j] = std::move(vals);
    }
    return axes;
}

// axes zoomed to +/- 2 old steps around the incumbent, step halved.
inline std::vector<std::vector<double>> refined_axes(const FactorChart& chart,
                                                     const std::vector<double>& center,
                                                     const std::vector<double>& old_step) {
    std::vector<std::vector<double>> axes(chart.lo.size());
    for (std::size_t j = 0; j < chart.lo.size(); ++j) {
        const double h = old_step[j] / 2.0;
        std::vector<double> vals;
        vals.reserve(9);
        for (int i = -4; i <= 4; ++i) {
            double v = center[j] + i * h;
            if (!chart.periodic[j]) v = std::clamp(v, chart.lo[j], chart.hi[j]);
            vals.push_back(v);
        }
        axes[j] = std::move(vals);
    }
    return axes;
}

inline std::vector<double> axes_steps(const std::vector<std::vector<double>>& axes) {
    std::vector<double> steps(axes.size(), 0.0);
    for (std::size_t j = 0; j < axes.size(); ++j) {
        steps[j] = axes[j].size() > 1 ? axes[j][1] - axes[j][0] : 0.0;
    }
    return steps;
}

inline void check_budget(const std::vector<std::vector<GridPoint>>& factor_points,
                         std::int64_t budget) {
    double total = 1.0;
    for (const auto& pts : factor_points) total *= static_cast<double>(pts.size());
    if (total > static_cast<double>(budget)) {
        throw std::invalid_argument(
            "grid oracle: unsupported (k, N, m) combination, grid exceeds the evaluation budget");
    }
}

// Depth-first product enumeration with partial state contraction. Depth j
// contracts party j (the most significant remaining digit); ties are
// resolved toward the lexicographically first grid index.
inline void enumerate_overlap(const std::vector<std::vector<GridPoint>>& factor_points,
                              const VectorXcd& conj_state, int k, int depth, int n,
                              std::vector<std::size_t>& pick, double& best,
                              std::vector<std::size_t>& best_pick) {
    const auto& pts = factor_points[depth];
    if (depth == n - 1) {
        for (std::size_t t = 0; t < pts.size(); ++t) {
            cplx acc = 0.0;
            for (int i = 0; i < k; ++i) acc += conj_state(i) * pts[t].vec(i);
            const double val = std::abs(acc);
            if (val > best + 1e-15) {
                best = val;
                pick[depth] = t;
                best_pick = pick;
            }
        }
        return;
    }
    const std::int64_t rows = conj_state.size() / k;
    for (std::size_t t = 0; t < pts.size(); ++t) {
        VectorXcd next(rows);
        for (std::int64_t r = 0; r < rows; ++r) {
            cplx acc = 0.0;
            for (int i = 0; i < k; ++i) acc += conj_state(i * rows + r) * pts[t].vec(i);
            next(r) = acc;
        }
        pick[depth] = t;
        enumerate_overlap(factor_points, next, k, depth + 1, n, pick, best, best_pick);
    }
}

}  // namespace detail

/// Enumerate every factor over its angle grid and return the best overlap
/// magnitude found together with the attaining product state. The value is a
/// lower bound on G(psi); refinements zoom around the incumbent.
inline std::pair<double, ProductState> grid_max_overlap(const StateTensor& state,
                                                        const GridSpec& spec) {
    spec.validate();
    const int n = state.n_parties();
    const int k = state.local_dim();
    const detail::FactorChart chart = detail::FactorChart::make(k, spec.field, spec.points_per_angle);

    std::vector<std::vector<double>> axes = detail::coarse_axes(chart);
    std::vector<std::vector<std::vector<double>>> per_factor_axes(n, axes);

    double best = -1.0;
    std::vector<std::vector<double>> best_angles(n);
    for (int level = 0; level <= spec.refinement_levels; ++level) {
        std::vector<std::vector<detail::GridPoint>> factor_points;
        factor_points.reserve(n);
        for (int j = 0; j < n; ++j) {
            factor_points.push_back(detail::chart_points(chart, per_factor_axes[j]));
        }
        detail::check_budget(factor_points, spec.evaluation_budget);

        std::vector<std::size_t> pick(n, 0), best_pick(n, 0);
        double level_best = -1.0;
        detail::enumerate_overlap(factor_points, state.amplitudes().conjugate(), k, 0, n, pick,
                                  level_best, best_pick);
        if (level_best > best) {
            best = level_best;
            for (int j = 0; j < n; ++j) best_angles[j] = factor_points[j][best_pick[j]].angles;
        }
        if (level == spec.refinement_levels) break;
        for (int j = 0; j < n; ++j) {
            per_factor_axes[j] = detail::refined_axes(chart, best_angles[j],
                                                      detail::axes_steps(per_factor_axes[j]));
        }
    }
    std::vector<UnitVector> factors;
    factors.reserve(n);
    for (int j = 0; j < n; ++j) factors.emplace_back(chart.vector_at(best_angles[j]));
    return {best, ProductState(std::move(factors))};
}

/// Grid maximization with one shared factor: a lower bound on the symmetric
/// product maximum max_a |<psi|a^(x)N>|.
inline std::pair<double, UnitVector> grid_max_symmetric(const StateTensor& state,
                                                        const GridSpec& spec) {
    spec.validate();
    const int k = state.local_dim();
    const detail::FactorChart chart = detail::FactorChart::make(k, spec.field, spec.points_per_angle);
    std::vector<std::vector<double>> axes = detail::coarse_axes(chart);

    double best = -1.0;
    std::vector<double> best_angles;
    for (int level = 0; level <= spec.refinement_levels; ++level) {
        const auto pts = detail::chart_points(chart, axes);
        if (static_cast<std::int64_t>(pts.size()) > spec.evaluation_budget) {
            throw std::invalid_argument("grid oracle: unsupported grid size");
        }
        for (const auto& p : pts) {
            const double val = std::abs(detail::symmetric_value(state, p.vec));
            if (val > best + 1e-15) {
                best = val;
                best_angles = p.angles;
            }
        }
        if (level == spec.refinement_levels) break;
        axes = detail::refined_axes(chart, best_angles, detail::axes_steps(axes));
    }
    return {best, UnitVector(chart.vector_at(best_angles))};
}

/// Grid maximization of |<phi|X|phi>| over product states (or symmetric
/// product states when `symmetric` is set).
inline double grid_max_operator(const HermitianOperator& x, const GridSpec& spec,
                                bool symmetric = false) {
    spec.validate();
    const int n = x.n_parties();
    const int k = x.local_dim();
    const detail::FactorChart chart = detail::FactorChart::make(k, spec.field, spec.points_per_angle);

    if (symmetric) {
        std::vector<std::vector<double>> axes = detail::coarse_axes(chart);
        double best = -1.0;
        std::vector<double> best_angles;
        for (int level = 0; level <= spec.refinement_levels; ++level) {
            const auto pts = detail::chart_points(chart, axes);
            for (const auto& p : pts) {
                std::vector<VectorXcd> fs(n, p.vec);
                const double val = std::abs(detail::expectation(x, fs));
                if (val > best + 1e-15) {
                    best = val;
                    best_angles = p.angles;
                }
            }
            if (level == spec.refinement_levels) break;
            axes = detail::refined_axes(chart, best_angles, detail::axes_steps(axes));
        }
        return best;
    }

    std::vector<std::vector<double>> axes = detail::coarse_axes(chart);
    std::vector<std::vector<std::vector<double>>> per_factor_axes(n, axes);
    double best = -1.0;
    std::vector<std::vector<double>> best_angles(n);
    for (int level = 0; level <= spec.refinement_levels; ++level) {
        std::vector<std::vector<detail::GridPoint>> factor_points;
        for (int j = 0; j < n; ++j) {
            factor_points.push_back(detail::chart_points(chart, per_factor_axes[j]));
        }
        detail::check_budget(factor_points, spec.evaluation_budget);

        // Recursive two-sided contraction of X with the chosen factors.
        std::vector<std::size_t> pick(n, 0), best_pick(n, 0);
        double level_best = -1.0;
        const std::function<void(const MatrixXcd&, int)> recurse = [&](const MatrixXcd& m,
                                                                       int depth) {
            const auto& pts = factor_points[depth];
            const std::int64_t rows = m.rows() / k;
            if (depth == n - 1) {
                for (std::size_t t = 0; t < pts.size(); ++t) {
                    const double val = std::abs(std::real(pts[t].vec.dot(m * pts[t].vec)));
                    if (val > level_best + 1e-15) {
                        level_best = val;
                        pick[depth] = t;
                        best_pick = pick;
                    }
                }
                return;
            }
            for (std::size_t t = 0; t < pts.size(); ++t) {
                MatrixXcd next(rows, rows);
                for (std::int64_t r = 0; r < rows; ++r) {
                    for (std::int64_t c = 0; c < rows; ++c) {
                        cplx acc = 0.0;
                        for (int a = 0; a < k; ++a) {
                            cplx inner = 0.0;
                            for (int b = 0; b < k; ++b) {
                                inner += m(a * rows + r, b * rows + c) * pts[t].vec(b);
                            }
                            acc += std::conj(pts[t].vec(a)) * inner;
                        }
                        next(r, c) = acc;
                    }
                }
                pick[depth] = t;
                recurse(next, depth + 1);
            }
        };
        recurse(x.matrix(), 0);
        if (level_best > best) {
            best = level_best;
            for (int j = 0; j < n; ++j) best_angles[j] = factor_points[j][best_pick[j]].angles;
        }
        if (level == spec.refinement_levels) break;
        for (int j = 0; j < n; ++j) {
            per_factor_axes[j] = detail::refined_axes(chart, best_angles[j],
                                                      detail::axes_steps(per_factor_axes[j]));
        }
    }
    return best;
}

}  // namespace gme

#endif  // GME_ORACLE_HPP
