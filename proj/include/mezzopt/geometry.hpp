#pragma once

#include <Eigen/Core>

#include <cmath>

#include "mezzopt/errors.hpp"

namespace mezzopt {

/// Floor coordinates in grid units.
using Point2 = Eigen::Vector2d;

/// Sum of absolute coordinate differences. Works for any pair of Eigen
/// vectors of equal length; a length mismatch is a usage error.
template <typename A, typename B>
auto manhattan_distance(const Eigen::MatrixBase<A>& p, const Eigen::MatrixBase<B>& q) {
    if (p.size() != q.size()) throw UsageError("manhattan_distance: dimension mismatch");
    return (p - q).cwiseAbs().sum();
}

}  // namespace mezzopt
