#pragma once

// Pareto-front quality indicators on raw objective values. All indicators
// collapse duplicate objective vectors before counting.

#include <optional>

#include "mezzopt/moo/hypervolume.hpp"
#include "mezzopt/moo/pareto.hpp"

namespace mezzopt::moo {

inline constexpr double kMembershipEps = 1e-9;

/// Smallest Euclidean distance from `p` to any row of `set`.
template <typename DP, typename DS>
double distance_to_set(const Eigen::MatrixBase<DP>& p, const Eigen::MatrixBase<DS>& set) {
    if (set.rows() == 0) throw UsageError("distance_to_set: empty set");
    if (p.size() != set.cols()) throw UsageError("distance_to_set: arity mismatch");
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < set.rows(); ++i) {
        double sq = 0.0;
        for (Eigen::Index j = 0; j < set.cols(); ++j) {
            const double diff = static_cast<double>(set(i, j)) - static_cast<double>(p(j));
            sq += diff * diff;
        }
        best = std::min(best, sq);
    }
    return std::sqrt(best);
}

/// Share of the reference front's distinct vectors that also appear in the
/// computed front.
template <typename DC, typename DR>
double coverage(const Eigen::MatrixBase<DC>& computed, const Eigen::MatrixBase<DR>& reference) {
    const auto ref = unique_rows(reference, kMembershipEps);
    if (ref.rows() == 0) throw UsageError("coverage: empty reference front");
    Eigen::Index hits = 0;
    for (Eigen::Index i = 0; i < ref.rows(); ++i) {
        for (Eigen::Index j = 0; j < computed.rows(); ++j) {
            if (nearly_equal(ref.row(i), computed.row(j), kMembershipEps)) {
                ++hits;
                break;
            }
        }
    }
    return static_cast<double>(hits) / static_cast<double>(ref.rows());
}

/// sqrt(sum of squared distances from computed to reference) / |computed|
template <typename DC, typename DR>
double generational_distance(const Eigen::MatrixBase<DC>& computed, const Eigen::MatrixBase<DR>& reference) {
    if (computed.rows() == 0 || reference.rows() == 0) throw UsageError("generational_distance: empty front");
    const auto pc = unique_rows(computed, kMembershipEps);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < pc.rows(); ++i) {
        const double d = distance_to_set(pc.row(i), reference);
        sum += d * d;
    }
    return std::sqrt(sum) / static_cast<double>(pc.rows());
}

/// Same as generational distance with the roles of the fronts swapped.
template <typename DC, typename DR>
double inverted_generational_distance(const Eigen::MatrixBase<DC>& computed, const Eigen::MatrixBase<DR>& reference) {
    if (computed.rows() == 0 || reference.rows() == 0)
        throw UsageError("inverted_generational_distance: empty front");
    const auto ref = unique_rows(reference, kMembershipEps);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < ref.rows(); ++i) {
        const double d = distance_to_set(ref.row(i), computed);
        sum += d * d;
    }
    return std::sqrt(sum) / static_cast<double>(ref.rows());
}

/// Per-objective best value over all given rows.
template <typename Derived>
Point<typename Derived::Scalar> ideal_point(const Eigen::MatrixBase<Derived>& points, const Orientation& o) {
    detail::check_arity(points.cols(), o);
    if (points.rows() == 0) throw UsageError("ideal_point: empty set");
    Point<typename Derived::Scalar> out(points.cols());
    for (Eigen::Index j = 0; j < points.cols(); ++j)
        out(j) = o[static_cast<std::size_t>(j)] == Sense::minimize ? points.col(j).minCoeff() : points.col(j).maxCoeff();
    return out;
}

/// Distance from the reference solution to the closest computed solution.
template <typename DC, typename DS>
double euclidean_distance_indicator(const Eigen::MatrixBase<DC>& computed, const Eigen::MatrixBase<DS>& reference_solution) {
    if (computed.rows() == 0) throw UsageError("euclidean_distance_indicator: empty front");
    return distance_to_set(reference_solution, computed);
}

template <typename Derived>
Eigen::Index pareto_front_size(const Eigen::MatrixBase<Derived>& computed) {
    return unique_indices(computed, kMembershipEps).size();
}

/// Spread of the computed front relative to the reference front's extreme
/// solutions. Undefined (nullopt) for fewer than two distinct solutions.
/// The nearest-neighbour distance of a solution ignores the solution itself.
template <typename DC, typename DR>
std::optional<double> generated_spread(const Eigen::MatrixBase<DC>& computed, const Eigen::MatrixBase<DR>& reference,
                                       const Orientation& o) {
    const auto pc = unique_rows(computed, kMembershipEps);
    if (pc.rows() < 2) return std::nullopt;
    if (reference.rows() == 0) throw UsageError("generated_spread: empty reference front");
    detail::check_arity(reference.cols(), o);

    double extreme_sum = 0.0;
    for (Eigen::Index k = 0; k < reference.cols(); ++k) {
        Eigen::Index best = 0;
        for (Eigen::Index i = 1; i < reference.rows(); ++i)
            if (detail::better(reference(i, k), reference(best, k), o[static_cast<std::size_t>(k)])) best = i;
        extreme_sum += distance_to_set(reference.row(best), pc);
    }

    const Eigen::Index n = pc.rows();
    Eigen::VectorXd nn(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < n; ++j)
            if (j != i) best = std::min(best, static_cast<double>((pc.row(i) - pc.row(j)).norm()));
        nn(i) = best;
    }
    const double mean = nn.mean();
    const double denom = extreme_sum + static_cast<double>(n) * mean;
    if (denom <= 0.0) return 0.0;
    return (extreme_sum + (nn.array() - mean).abs().sum()) / denom;
}

struct IndicatorReport {
    double coverage = 0.0;
    double generational_distance = 0.0;
    double euclidean_distance = 0.0;
    long pareto_front_size = 0;
    std::optional<double> generated_spread;
    double inverted_generational_distance = 0.0;
    double hypervolume = 0.0;
};

struct IndicatorOptions {
    /// Rescale every objective to [0,1] using the reference front's range.
    /// Diagnostic only; reported tables use raw values.
    bool normalize = false;
};

/// Every indicator of one computed front against a reference front.
/// `reference_solution` is the ideal point over all retrieved solutions and
/// `hv_reference` the hypervolume reference point.
template <typename Scalar>
IndicatorReport compute_indicators(const PointSet<Scalar>& computed, const PointSet<Scalar>& reference,
                                   const Point<Scalar>& reference_solution, const Point<Scalar>& hv_reference,
                                   const Orientation& o, IndicatorOptions options = {}) {
    PointSet<Scalar> pc = computed;
    PointSet<Scalar> ref = reference;
    Point<Scalar> sref = reference_solution;
    if (options.normalize && ref.rows() > 0) {
        const Point<Scalar> lo = ref.colwise().minCoeff().transpose();
        const Point<Scalar> span = (ref.colwise().maxCoeff().transpose() - lo).cwiseMax(Scalar(1e-12));
        const auto scale = [&](PointSet<Scalar>& m) {
            m = (m.rowwise() - lo.transpose()).array().rowwise() / span.transpose().array();
        };
        scale(pc);
        scale(ref);
        sref = (sref - lo).cwiseQuotient(span);
    }
    IndicatorReport r;
    r.coverage = coverage(pc, ref);
    r.pareto_front_size = static_cast<long>(pareto_front_size(pc));
    if (pc.rows() > 0) {
        r.generational_distance = generational_distance(pc, ref);
        r.euclidean_distance = euclidean_distance_indicator(pc, sref);
        r.inverted_generational_distance = inverted_generational_distance(pc, ref);
        r.generated_spread = generated_spread(pc, ref, o);
        r.hypervolume = hypervolume(computed, hv_reference, o);
    }
    return r;
}

/// Component-wise worst value over `points` pushed outwards by `margin`
/// times the observed range (at least `margin` in absolute terms).
template <typename Derived>
Point<typename Derived::Scalar> nadir_with_margin(const Eigen::MatrixBase<Derived>& points, const Orientation& o,
                                                  double margin = 0.1) {
    using Scalar = typename Derived::Scalar;
    detail::check_arity(points.cols(), o);
    Point<Scalar> out(points.cols());
    for (Eigen::Index j = 0; j < points.cols(); ++j) {
        const Scalar lo = points.col(j).minCoeff();
        const Scalar hi = points.col(j).maxCoeff();
        const Scalar pad = std::max<Scalar>(Scalar(margin) * (hi - lo), Scalar(margin));
        out(j) = o[static_cast<std::size_t>(j)] == Sense::minimize ? hi + pad : lo - pad;
    }
    return out;
}

}  // namespace mezzopt::moo
