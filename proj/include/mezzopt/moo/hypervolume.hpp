#pragma once

// Exact hypervolume by slicing along the last objective, with a 2D sweep at
// the bottom of the recursion. Practical up to four objectives.

#include "mezzopt/moo/pareto.hpp"

namespace mezzopt::moo {

namespace detail {

// Rows are minimized points strictly better than `ref` in every column.
inline double hv_minimized(Eigen::MatrixXd pts, const Eigen::VectorXd& ref) {
    const Eigen::Index n = pts.rows();
    const Eigen::Index d = pts.cols();
    if (n == 0) return 0.0;
    if (d == 1) return ref(0) - pts.col(0).minCoeff();

    IndexList order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return pts(a, d - 1) < pts(b, d - 1); });

    if (d == 2) {
        double area = 0.0;
        double best_x = ref(0);
        for (std::size_t k = 0; k < order.size(); ++k) {
            best_x = std::min(best_x, pts(order[k], 0));
            const double next_y = k + 1 < order.size() ? pts(order[k + 1], 1) : ref(1);
            area += (ref(0) - best_x) * (next_y - pts(order[k], 1));
        }
        return area;
    }

    double volume = 0.0;
    const Eigen::VectorXd sub_ref = ref.head(d - 1);
    for (std::size_t k = 0; k < order.size(); ++k) {
        const double lo = pts(order[k], d - 1);
        const double hi = k + 1 < order.size() ? pts(order[k + 1], d - 1) : ref(d - 1);
        if (hi <= lo) continue;
        Eigen::MatrixXd slice(static_cast<Eigen::Index>(k + 1), d - 1);
        for (std::size_t j = 0; j <= k; ++j) slice.row(static_cast<Eigen::Index>(j)) = pts.row(order[j]).head(d - 1);
        const Eigen::MatrixXd nd = select_rows(slice, nondominated_indices(slice, minimize_all(d - 1)));
        volume += hv_minimized(unique_rows(nd), sub_ref) * (hi - lo);
    }
    return volume;
}

}  // namespace detail

/// Volume dominated by `front` and bounded by `reference`. The reference
/// point must be strictly worse than every front point in every objective.
template <typename DF, typename DR>
double hypervolume(const Eigen::MatrixBase<DF>& front, const Eigen::MatrixBase<DR>& reference, const Orientation& o) {
    if (front.rows() == 0) return 0.0;
    detail::check_arity(front.cols(), o);
    if (reference.size() != front.cols()) throw UsageError("hypervolume: reference point arity mismatch");
    const Eigen::MatrixXd pts = to_minimization(front.template cast<double>(), o);
    Eigen::VectorXd ref = reference.template cast<double>();
    for (Eigen::Index j = 0; j < ref.size(); ++j)
        if (o[static_cast<std::size_t>(j)] == Sense::maximize) ref(j) = -ref(j);
    for (Eigen::Index i = 0; i < pts.rows(); ++i)
        if (!(pts.row(i).transpose().array() < ref.array()).all())
            throw UsageError("hypervolume: reference point not strictly worse than every front point");
    const Eigen::MatrixXd nd = select_rows(pts, nondominated_indices(pts, minimize_all(pts.cols())));
    return detail::hv_minimized(unique_rows(nd), ref);
}

}  // namespace mezzopt::moo
