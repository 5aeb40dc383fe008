#pragma once

// Dominance, non-dominated sorting, crowding distance and reference fronts.
// Objective sets are Eigen matrices with one solution per row.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "mezzopt/errors.hpp"

namespace mezzopt::moo {

enum class Sense { minimize, maximize };
using Orientation = std::vector<Sense>;

inline Orientation minimize_all(Eigen::Index m) { return Orientation(static_cast<std::size_t>(m), Sense::minimize); }
inline Orientation maximize_all(Eigen::Index m) { return Orientation(static_cast<std::size_t>(m), Sense::maximize); }

template <typename Scalar>
using PointSet = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Point = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Index list of rows, e.g. one front of a sorted population.
using IndexList = std::vector<Eigen::Index>;

namespace detail {

template <typename Scalar>
bool better(Scalar a, Scalar b, Sense s) {
    return s == Sense::minimize ? a < b : a > b;
}

inline void check_arity(Eigen::Index n, const Orientation& o) {
    if (static_cast<std::size_t>(n) != o.size()) throw UsageError("objective arity does not match orientation");
}

}  // namespace detail

/// True iff `a` is no worse than `b` in every objective and strictly better
/// in at least one.
template <typename DA, typename DB>
bool dominates(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b, const Orientation& o) {
    if (a.size() != b.size()) throw UsageError("dominates: arity mismatch");
    detail::check_arity(a.size(), o);
    bool strictly = false;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        const auto s = o[static_cast<std::size_t>(i)];
        if (detail::better(b(i), a(i), s)) return false;
        if (detail::better(a(i), b(i), s)) strictly = true;
    }
    return strictly;
}

/// Dominates or equal.
template <typename DA, typename DB>
bool weakly_dominates(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b, const Orientation& o) {
    if (a.size() != b.size()) throw UsageError("weakly_dominates: arity mismatch");
    for (Eigen::Index i = 0; i < a.size(); ++i)
        if (detail::better(b(i), a(i), o[static_cast<std::size_t>(i)])) return false;
    return true;
}

/// Negates maximized columns so every objective is minimized.
template <typename Derived>
PointSet<typename Derived::Scalar> to_minimization(const Eigen::MatrixBase<Derived>& points, const Orientation& o) {
    detail::check_arity(points.cols(), o);
    PointSet<typename Derived::Scalar> out = points;
    for (Eigen::Index j = 0; j < out.cols(); ++j)
        if (o[static_cast<std::size_t>(j)] == Sense::maximize) out.col(j) = -out.col(j);
    return out;
}

template <typename DA, typename DB>
bool nearly_equal(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b, double eps = 1e-9) {
    return a.size() == b.size() && ((a - b).cwiseAbs().array() <= eps).all();
}

struct SortedPopulation {
    std::vector<IndexList> fronts;  // fronts[0] holds rank 1
    std::vector<int> rank;          // per row, 1-based
};

/// Fast non-dominated sort: rank 1 is the non-dominated set, rank k+1 the
/// non-dominated set after removing ranks <= k.
template <typename Derived>
SortedPopulation nondominated_sort(const Eigen::MatrixBase<Derived>& points, const Orientation& o) {
    const Eigen::Index n = points.rows();
    if (n == 0) throw UsageError("nondominated_sort: empty population");
    detail::check_arity(points.cols(), o);

    std::vector<IndexList> dominated(static_cast<std::size_t>(n));
    std::vector<int> counter(static_cast<std::size_t>(n), 0);
    SortedPopulation out;
    out.rank.assign(static_cast<std::size_t>(n), 0);
    IndexList current;
    for (Eigen::Index p = 0; p < n; ++p) {
        for (Eigen::Index q = p + 1; q < n; ++q) {
            if (dominates(points.row(p), points.row(q), o)) {
                dominated[static_cast<std::size_t>(p)].push_back(q);
                ++counter[static_cast<std::size_t>(q)];
            } else if (dominates(points.row(q), points.row(p), o)) {
                dominated[static_cast<std::size_t>(q)].push_back(p);
                ++counter[static_cast<std::size_t>(p)];
            }
        }
    }
    for (Eigen::Index p = 0; p < n; ++p)
        if (counter[static_cast<std::size_t>(p)] == 0) current.push_back(p);

    int rank = 1;
    while (!current.empty()) {
        IndexList next;
        for (auto p : current) {
            out.rank[static_cast<std::size_t>(p)] = rank;
            for (auto q : dominated[static_cast<std::size_t>(p)])
                if (--counter[static_cast<std::size_t>(q)] == 0) next.push_back(q);
        }
        std::sort(next.begin(), next.end());
        out.fronts.push_back(std::move(current));
        current = std::move(next);
        ++rank;
    }
    return out;
}

/// Indices of the rows no other row dominates, in ascending order.
template <typename Derived>
IndexList nondominated_indices(const Eigen::MatrixBase<Derived>& points, const Orientation& o) {
    IndexList out;
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        bool dominated = false;
        for (Eigen::Index j = 0; j < points.rows() && !dominated; ++j)
            dominated = j != i && dominates(points.row(j), points.row(i), o);
        if (!dominated) out.push_back(i);
    }
    return out;
}

/// First index of every distinct row (equality within `eps`), ascending.
template <typename Derived>
IndexList unique_indices(const Eigen::MatrixBase<Derived>& points, double eps = 1e-9) {
    IndexList out;
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        const bool seen = std::any_of(out.begin(), out.end(),
                                      [&](Eigen::Index j) { return nearly_equal(points.row(i), points.row(j), eps); });
        if (!seen) out.push_back(i);
    }
    return out;
}

template <typename Derived>
PointSet<typename Derived::Scalar> select_rows(const Eigen::MatrixBase<Derived>& points, const IndexList& rows) {
    PointSet<typename Derived::Scalar> out(static_cast<Eigen::Index>(rows.size()), points.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = points.row(rows[i]);
    return out;
}

template <typename Derived>
PointSet<typename Derived::Scalar> unique_rows(const Eigen::MatrixBase<Derived>& points, double eps = 1e-9) {
    return select_rows(points, unique_indices(points, eps));
}

/// Crowding distance of every row of one front. Per objective the two
/// boundary rows get +infinity and interior rows add the normalized gap
/// between their neighbours. Repeated copies of an objective vector
/// contribute nothing: only the first copy is crowded, the others get 0.
template <typename Derived>
Point<typename Derived::Scalar> crowding_distance(const Eigen::MatrixBase<Derived>& front) {
    using Scalar = typename Derived::Scalar;
    const Eigen::Index n = front.rows();
    if (n == 0) throw UsageError("crowding_distance: empty front");
    constexpr Scalar inf = std::numeric_limits<Scalar>::infinity();

    const IndexList uniq = unique_indices(front, 0.0);
    Point<Scalar> out = Point<Scalar>::Zero(n);
    const auto u = static_cast<Eigen::Index>(uniq.size());
    if (u <= 2) {
        for (auto i : uniq) out(i) = inf;
        return out;
    }
    for (Eigen::Index m = 0; m < front.cols(); ++m) {
        IndexList order = uniq;
        std::stable_sort(order.begin(), order.end(),
                         [&](Eigen::Index a, Eigen::Index b) { return front(a, m) < front(b, m); });
        const Scalar lo = front(order.front(), m);
        const Scalar hi = front(order.back(), m);
        out(order.front()) = inf;
        out(order.back()) = inf;
        if (hi - lo <= Scalar(0)) continue;
        for (Eigen::Index k = 1; k + 1 < u; ++k) {
            const auto i = order[static_cast<std::size_t>(k)];
            if (std::isinf(out(i))) continue;
            out(i) += (front(order[static_cast<std::size_t>(k + 1)], m) - front(order[static_cast<std::size_t>(k - 1)], m)) /
                      (hi - lo);
        }
    }
    return out;
}

/// Lexicographic row order, used to make fronts deterministic.
template <typename Derived>
IndexList lexicographic_order(const Eigen::MatrixBase<Derived>& points) {
    IndexList order(static_cast<std::size_t>(points.rows()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        for (Eigen::Index j = 0; j < points.cols(); ++j) {
            if (points(a, j) < points(b, j)) return true;
            if (points(b, j) < points(a, j)) return false;
        }
        return false;
    });
    return order;
}

/// Non-dominated, duplicate-free subset of the union of several fronts,
/// rows in lexicographic order.
template <typename Scalar>
PointSet<Scalar> reference_front(std::span<const PointSet<Scalar>> fronts, const Orientation& o) {
    if (fronts.empty()) throw UsageError("reference_front: no fronts");
    Eigen::Index rows = 0;
    const Eigen::Index cols = static_cast<Eigen::Index>(o.size());
    for (const auto& f : fronts) {
        if (f.rows() > 0 && f.cols() != cols) throw UsageError("reference_front: arity mismatch");
        rows += f.rows();
    }
    PointSet<Scalar> all(rows, cols);
    Eigen::Index at = 0;
    for (const auto& f : fronts) {
        if (f.rows() == 0) continue;
        all.middleRows(at, f.rows()) = f;
        at += f.rows();
    }
    const PointSet<Scalar> nd = unique_rows(select_rows(all, nondominated_indices(all, o)));
    return select_rows(nd, lexicographic_order(nd));
}

template <typename Scalar>
PointSet<Scalar> reference_front(const std::vector<PointSet<Scalar>>& fronts, const Orientation& o) {
    return reference_front(std::span<const PointSet<Scalar>>(fronts), o);
}

}  // namespace mezzopt::moo
