#ifndef WNN_METRIC_HPP
#define WNN_METRIC_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "error.hpp"

/**
 * @file metric.hpp
 *
 * @brief Base metrics, the weighted distance and the two-point decision boundary.
 */

namespace wnn {

/**
 * Coordinates of a single point. Functions that only read coordinates take a
 * `std::span<const double>` so that rows of a `Dataset` can be passed without copying.
 */
using Point = std::vector<double>;

/**
 * Positive infinity, used as the weight of the sole prototype of a single-class sample.
 */
inline constexpr double infinite_weight = std::numeric_limits<double>::infinity();

enum class MetricKind { euclidean, manhattan, chebyshev };

inline std::string_view to_string(MetricKind m) {
    switch (m) {
        case MetricKind::euclidean: return "euclidean";
        case MetricKind::manhattan: return "manhattan";
        case MetricKind::chebyshev: return "chebyshev";
    }
    return "unknown";
}

inline std::optional<MetricKind> parse_metric(std::string_view name) {
    if (name == "euclidean") return MetricKind::euclidean;
    if (name == "manhattan") return MetricKind::manhattan;
    if (name == "chebyshev") return MetricKind::chebyshev;
    return std::nullopt;
}

namespace internal {

// No dimension check; callers guarantee equal lengths.
inline double distance_unchecked(std::span<const double> a, std::span<const double> b, MetricKind m) noexcept {
    const std::size_t dim = a.size();
    switch (m) {
        case MetricKind::euclidean: {
            double sum = 0;
            for (std::size_t d = 0; d < dim; ++d) {
                const double delta = a[d] - b[d];
                sum += delta * delta;
            }
            return std::sqrt(sum);
        }
        case MetricKind::manhattan: {
            double sum = 0;
            for (std::size_t d = 0; d < dim; ++d) {
                sum += std::abs(a[d] - b[d]);
            }
            return sum;
        }
        case MetricKind::chebyshev: {
            double best = 0;
            for (std::size_t d = 0; d < dim; ++d) {
                best = std::max(best, std::abs(a[d] - b[d]));
            }
            return best;
        }
    }
    return 0;
}

}

/**
 * Distance between two points under the given metric. The result is bit-for-bit
 * symmetric in its arguments.
 */
inline double distance(std::span<const double> a, std::span<const double> b, MetricKind m = MetricKind::euclidean) {
    if (a.size() != b.size()) {
        internal::fail(ErrorKind::invalid_argument, "distance: dimension mismatch (" + std::to_string(a.size()) +
                                                        " vs " + std::to_string(b.size()) + ")");
    }
    return internal::distance_unchecked(a, b, m);
}

/**
 * Distance divided by the product of both weights. An infinite weight on either
 * side yields zero.
 *
 * Note that this quantity is not a metric: it can violate the triangle inequality.
 */
inline double weighted_distance(std::span<const double> a, std::span<const double> b, double weight_a,
                                double weight_b, MetricKind m = MetricKind::euclidean) {
    if (!(weight_a > 0) || !(weight_b > 0)) {
        internal::fail(ErrorKind::invalid_argument, "weighted_distance: weights must be positive");
    }
    const double d = distance(a, b, m);
    if (std::isinf(weight_a) || std::isinf(weight_b)) {
        return 0;
    }
    return d / (weight_a * weight_b);
}

/**
 * Circle in the plane.
 */
struct Circle {
    std::array<double, 2> center{};
    double radius = 0;
};

/**
 * Line `normal[0] * x + normal[1] * y = offset`.
 */
struct Line {
    std::array<double, 2> normal{};
    double offset = 0;
};

using Boundary = std::variant<Circle, Line>;

/**
 * Locus of planar points equidistant, under the weighted distance with unit query
 * weight, from two weighted prototypes. Equal weights give the perpendicular
 * bisector; unequal weights give an Apollonius circle that encloses the lighter
 * prototype. Euclidean metric only.
 */
inline Boundary decision_boundary(std::span<const double> p1, double w1, std::span<const double> p2, double w2) {
    internal::require(p1.size() == 2 && p2.size() == 2, "decision_boundary: points must be 2-dimensional");
    internal::require(w1 > 0 && w2 > 0 && std::isfinite(w1) && std::isfinite(w2),
                      "decision_boundary: weights must be positive and finite");
    const double separation = distance(p1, p2, MetricKind::euclidean);
    internal::require(separation > 0, "decision_boundary: coincident points");

    if (w1 == w2) {
        Line line;
        line.normal = {p2[0] - p1[0], p2[1] - p1[1]};
        line.offset = 0.5 * ((p2[0] * p2[0] + p2[1] * p2[1]) - (p1[0] * p1[0] + p1[1] * p1[1]));
        return line;
    }

    const double a = w2 * w2;
    const double b = w1 * w1;
    const double denom = a - b;
    Circle circle;
    circle.center = {(a * p1[0] - b * p2[0]) / denom, (a * p1[1] - b * p2[1]) / denom};
    circle.radius = w1 * w2 * separation / std::abs(denom);
    return circle;
}

}

#endif
