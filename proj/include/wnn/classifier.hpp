#ifndef WNN_CLASSIFIER_HPP
#define WNN_CLASSIFIER_HPP

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dataset.hpp"
#include "error.hpp"
#include "metric.hpp"

/**
 * @file classifier.hpp
 *
 * @brief The weighted-distance nearest-neighbor rule, consistency checks and
 * compression-based generalization bounds.
 */

namespace wnn {

/**
 * Subset of a sample with one positive weight per selected point.
 *
 * Holds a non-owning pointer to its source `Dataset`, which must outlive it.
 * The order of `indices()` matters: ties in weighted distance are resolved in
 * favor of the point that appears first.
 */
class WeightedCondensedSet {
public:
    WeightedCondensedSet(const Dataset& source, std::vector<std::size_t> indices, std::vector<double> weights)
        : source_(&source), indices_(std::move(indices)), weights_(std::move(weights)) {
        internal::require(!indices_.empty(), "condensed set must be non-empty");
        internal::require(indices_.size() == weights_.size(), "condensed set needs one weight per index");
        std::vector<bool> seen(source.size(), false);
        for (std::size_t k = 0; k < indices_.size(); ++k) {
            const auto i = indices_[k];
            internal::require(i < source.size(), "condensed index " + std::to_string(i) + " is out of range");
            internal::require(!seen[i], "condensed index " + std::to_string(i) + " appears twice");
            seen[i] = true;
            internal::require(weights_[k] > 0 && !std::isnan(weights_[k]),
                              "condensed weight for index " + std::to_string(i) + " must be positive");
        }
    }

    /**
     * Every listed point with weight 1.
     */
    static WeightedCondensedSet unit(const Dataset& source, std::vector<std::size_t> indices) {
        std::vector<double> weights(indices.size(), 1.0);
        return WeightedCondensedSet(source, std::move(indices), std::move(weights));
    }

    /**
     * Whole sample with unit weights.
     */
    static WeightedCondensedSet full(const Dataset& source) {
        std::vector<std::size_t> all(source.size());
        for (std::size_t i = 0; i < all.size(); ++i) {
            all[i] = i;
        }
        return unit(source, std::move(all));
    }

    const Dataset& source() const noexcept { return *source_; }
    const std::vector<std::size_t>& indices() const noexcept { return indices_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    std::size_t size() const noexcept { return indices_.size(); }

private:
    const Dataset* source_;
    std::vector<std::size_t> indices_;
    std::vector<double> weights_;
};

namespace internal {

// Queries carry weight 1, so only the prototype's weight divides the distance.
inline double query_weighted_distance(double d, double weight) noexcept {
    if (std::isinf(weight)) {
        return 0;
    }
    return d / weight;
}

}

/**
 * Position (within `c.indices()`) of the prototype closest to `q` in weighted distance.
 */
inline std::size_t nearest_prototype(std::span<const double> q, const WeightedCondensedSet& c) {
    const Dataset& ds = c.source();
    if (q.size() != ds.dimension()) {
        internal::fail(ErrorKind::invalid_argument, "classify: query dimension does not match the dataset");
    }
    std::size_t best = 0;
    double best_value = infinite_weight;
    for (std::size_t k = 0; k < c.size(); ++k) {
        const double d = internal::distance_unchecked(q, ds.point(c.indices()[k]), ds.metric());
        const double value = internal::query_weighted_distance(d, c.weights()[k]);
        if (k == 0 || value < best_value) {
            best = k;
            best_value = value;
        }
    }
    return best;
}

inline Label classify(std::span<const double> q, const WeightedCondensedSet& c) {
    return c.source().label(c.indices()[nearest_prototype(q, c)]);
}

struct Violation {
    std::size_t index = 0;
    Label predicted = 0;
};

struct ConsistencyReport {
    bool consistent = true;
    std::vector<Violation> violations;
};

/**
 * Classifies every sample point of `ds` with `c` and collects the mismatches.
 */
inline ConsistencyReport consistency_check(const Dataset& ds, const WeightedCondensedSet& c) {
    internal::require(&ds == &c.source() || ds == c.source(), "consistency_check: condensed set belongs to another dataset");
    ConsistencyReport report;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const Label predicted = classify(ds.point(i), c);
        if (predicted != ds.label(i)) {
            report.violations.push_back({i, predicted});
        }
    }
    report.consistent = report.violations.empty();
    return report;
}

/**
 * Self-contained weighted prototype classifier that owns its points. Produced by
 * decoding a compression code, or by copying a condensed set out of its sample.
 */
class PrototypeClassifier {
public:
    PrototypeClassifier(std::size_t dimension, MetricKind metric) : dimension_(dimension), metric_(metric) {}

    static PrototypeClassifier from(const WeightedCondensedSet& c) {
        const Dataset& ds = c.source();
        PrototypeClassifier out(ds.dimension(), ds.metric());
        for (std::size_t k = 0; k < c.size(); ++k) {
            out.add(ds.point(c.indices()[k]), ds.label(c.indices()[k]), c.weights()[k]);
        }
        return out;
    }

    void add(std::span<const double> point, Label label, double weight) {
        internal::require(point.size() == dimension_, "prototype dimension mismatch");
        internal::require(weight > 0 && !std::isnan(weight), "prototype weight must be positive");
        coords_.insert(coords_.end(), point.begin(), point.end());
        labels_.push_back(label);
        weights_.push_back(weight);
    }

    std::size_t size() const noexcept { return labels_.size(); }
    std::size_t dimension() const noexcept { return dimension_; }
    MetricKind metric() const noexcept { return metric_; }
    std::span<const double> point(std::size_t k) const noexcept {
        return {coords_.data() + k * dimension_, dimension_};
    }
    Label label(std::size_t k) const noexcept { return labels_[k]; }
    double weight(std::size_t k) const noexcept { return weights_[k]; }
    const std::vector<double>& weights() const noexcept { return weights_; }

    Label classify(std::span<const double> q) const {
        internal::require(size() > 0, "classify: empty prototype set");
        internal::require(q.size() == dimension_, "classify: query dimension mismatch");
        std::size_t best = 0;
        double best_value = infinite_weight;
        for (std::size_t k = 0; k < size(); ++k) {
            const double d = internal::distance_unchecked(q, point(k), metric_);
            const double value = internal::query_weighted_distance(d, weights_[k]);
            if (k == 0 || value < best_value) {
                best = k;
                best_value = value;
            }
        }
        return labels_[best];
    }

private:
    std::size_t dimension_;
    MetricKind metric_;
    std::vector<double> coords_;
    std::vector<Label> labels_;
    std::vector<double> weights_;
};

/**
 * Upper bound on the true error of a weighted prototype classifier with
 * `condensed` prototypes that is consistent on a sample of size `n`, holding with
 * probability at least `1 - delta`. Natural logarithms throughout.
 *
 * The permutation-invariant form applies when the decoder ignores the order of
 * the compression set, and is smaller whenever `condensed >= 3`.
 */
inline double generalization_bound(std::size_t n, std::size_t condensed, double delta, bool permutation_invariant) {
    internal::require(condensed >= 1, "generalization_bound: condensed size must be at least 1");
    internal::require(condensed < n, "generalization_bound: condensed size must be smaller than the sample size");
    internal::require(delta > 0 && delta < 1, "generalization_bound: delta must lie in (0, 1)");
    const double nn = static_cast<double>(n);
    const double m = static_cast<double>(condensed);
    const double complexity = permutation_invariant ? m * std::log(2 * std::numbers::e * nn / m) : m * std::log(2 * nn);
    return 2.0 / (nn - m) * (complexity + std::log(nn / delta));
}

}

#endif
