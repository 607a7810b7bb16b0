#ifndef WNN_DATASET_HPP
#define WNN_DATASET_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "metric.hpp"

/**
 * @file dataset.hpp
 *
 * @brief Labeled samples and nearest-enemy queries.
 */

namespace wnn {

using Label = int;

struct LabeledPoint {
    Point point;
    Label label = 0;
};

/**
 * Immutable labeled sample in a metric space.
 *
 * Coordinates are stored row-major in a single buffer. Construction checks that
 * the sample is non-empty, all coordinates are finite, dimensions agree, labels
 * are non-negative, and no two differently labeled points coincide. Violations
 * throw `Error` with `ErrorKind::data`.
 */
class Dataset {
public:
    Dataset(std::size_t dimension, std::vector<double> coords, std::vector<Label> labels,
            MetricKind metric = MetricKind::euclidean)
        : dimension_(dimension), coords_(std::move(coords)), labels_(std::move(labels)), metric_(metric) {
        validate();
    }

    explicit Dataset(const std::vector<LabeledPoint>& points, MetricKind metric = MetricKind::euclidean)
        : metric_(metric) {
        if (points.empty()) {
            internal::fail(ErrorKind::data, "dataset must contain at least one point");
        }
        dimension_ = points.front().point.size();
        coords_.reserve(points.size() * dimension_);
        labels_.reserve(points.size());
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (points[i].point.size() != dimension_) {
                internal::fail(ErrorKind::data, "point " + std::to_string(i) + " has dimension " +
                                                    std::to_string(points[i].point.size()) + ", expected " +
                                                    std::to_string(dimension_));
            }
            coords_.insert(coords_.end(), points[i].point.begin(), points[i].point.end());
            labels_.push_back(points[i].label);
        }
        validate();
    }

    std::size_t size() const noexcept { return labels_.size(); }
    std::size_t dimension() const noexcept { return dimension_; }
    MetricKind metric() const noexcept { return metric_; }

    std::span<const double> point(std::size_t i) const noexcept {
        return {coords_.data() + i * dimension_, dimension_};
    }

    Label label(std::size_t i) const noexcept { return labels_[i]; }
    const std::vector<Label>& labels() const noexcept { return labels_; }
    const std::vector<double>& coords() const noexcept { return coords_; }

    LabeledPoint labeled_point(std::size_t i) const {
        auto p = point(i);
        return LabeledPoint{Point(p.begin(), p.end()), labels_[i]};
    }

    double distance(std::size_t i, std::size_t j) const noexcept {
        return internal::distance_unchecked(point(i), point(j), metric_);
    }

    double distance_to(std::size_t i, std::span<const double> q) const {
        if (q.size() != dimension_) {
            internal::fail(ErrorKind::invalid_argument, "query dimension does not match the dataset");
        }
        return internal::distance_unchecked(point(i), q, metric_);
    }

    /**
     * Sorted distinct labels.
     */
    std::vector<Label> classes() const {
        std::vector<Label> out(labels_);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    std::size_t num_classes() const { return classes().size(); }

    /**
     * New dataset holding the listed points, in the listed order.
     */
    Dataset subset(std::span<const std::size_t> indices) const {
        std::vector<double> coords;
        std::vector<Label> labels;
        coords.reserve(indices.size() * dimension_);
        labels.reserve(indices.size());
        for (auto i : indices) {
            auto p = point(i);
            coords.insert(coords.end(), p.begin(), p.end());
            labels.push_back(labels_[i]);
        }
        return Dataset(dimension_, std::move(coords), std::move(labels), metric_);
    }

    friend bool operator==(const Dataset& a, const Dataset& b) {
        return a.dimension_ == b.dimension_ && a.metric_ == b.metric_ && a.labels_ == b.labels_ &&
               a.coords_ == b.coords_;
    }

private:
    void validate() {
        if (labels_.empty()) {
            internal::fail(ErrorKind::data, "dataset must contain at least one point");
        }
        if (dimension_ == 0) {
            internal::fail(ErrorKind::data, "points must have at least one coordinate");
        }
        if (coords_.size() != labels_.size() * dimension_) {
            internal::fail(ErrorKind::data, "coordinate buffer does not match the number of labels");
        }
        for (std::size_t i = 0; i < labels_.size(); ++i) {
            if (labels_[i] < 0) {
                internal::fail(ErrorKind::data, "point " + std::to_string(i) + " has a negative label");
            }
            for (double c : point(i)) {
                if (!std::isfinite(c)) {
                    internal::fail(ErrorKind::data, "point " + std::to_string(i) + " has a non-finite coordinate");
                }
            }
        }

        // Zero distance means identical coordinates for every supported metric, so
        // coincident points are adjacent after a lexicographic sort.
        std::vector<std::size_t> order(labels_.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        auto less = [&](std::size_t a, std::size_t b) {
            auto pa = point(a), pb = point(b);
            return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
        };
        std::sort(order.begin(), order.end(), less);
        for (std::size_t k = 1; k < order.size(); ++k) {
            const auto a = order[k - 1], b = order[k];
            if (labels_[a] != labels_[b] && internal::distance_unchecked(point(a), point(b), metric_) == 0) {
                internal::fail(ErrorKind::data, "points " + std::to_string(std::min(a, b)) + " and " +
                                                    std::to_string(std::max(a, b)) +
                                                    " coincide but carry different labels");
            }
        }
    }

    std::size_t dimension_ = 0;
    std::vector<double> coords_;
    std::vector<Label> labels_;
    MetricKind metric_ = MetricKind::euclidean;
};

struct Enemy {
    std::size_t index = 0;
    double distance = 0;
};

/**
 * Closest differently labeled sample point to point `i`, ties resolved toward
 * the lowest index. Empty when the sample has a single class.
 */
inline std::optional<Enemy> nearest_enemy(const Dataset& ds, std::size_t i) {
    internal::require(i < ds.size(), "nearest_enemy: index out of range");
    std::optional<Enemy> best;
    const Label own = ds.label(i);
    for (std::size_t j = 0; j < ds.size(); ++j) {
        if (ds.label(j) == own) {
            continue;
        }
        const double d = ds.distance(i, j);
        if (!best || d < best->distance) {
            best = Enemy{j, d};
        }
    }
    return best;
}

inline std::optional<double> nearest_enemy_distance(const Dataset& ds, std::size_t i) {
    auto e = nearest_enemy(ds, i);
    if (!e) {
        return std::nullopt;
    }
    return e->distance;
}

/**
 * Nearest-enemy distance of every sample point, with `infinite_weight` standing in
 * for "no enemy".
 */
inline std::vector<double> enemy_radii(const Dataset& ds) {
    std::vector<double> out(ds.size(), infinite_weight);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (auto d = nearest_enemy_distance(ds, i)) {
            out[i] = *d;
        }
    }
    return out;
}

}

#endif
