#ifndef WNN_NAVNET_HPP
#define WNN_NAVNET_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "classifier.hpp"
#include "error.hpp"
#include "metric.hpp"

/**
 * @file navnet.hpp
 *
 * @brief Navigating net with heaviest-descendant annotations, for approximate
 * weighted nearest-neighbor queries.
 */

namespace wnn {

struct QueryResult {
    std::size_t index = 0;
    double wdist = 0;
    std::size_t nodes_visited = 0;
    std::size_t max_list = 0; ///< Largest candidate list held at any level.
};

namespace internal {

inline double unit_query_wdist(double d, double weight) noexcept {
    return std::isinf(weight) ? 0.0 : d / weight;
}

}

/**
 * Exact weighted nearest neighbor by linear scan; ties go to the lowest index.
 * `coords` holds `weights.size()` rows of `dimension` values.
 */
inline QueryResult brute_force_wnn(std::span<const double> coords, std::size_t dimension,
                                   std::span<const double> weights, std::span<const double> q,
                                   MetricKind metric = MetricKind::euclidean) {
    internal::require(!weights.empty(), "brute_force_wnn: empty point set");
    internal::require(coords.size() == weights.size() * dimension, "brute_force_wnn: coordinate count mismatch");
    internal::require(q.size() == dimension, "brute_force_wnn: query dimension mismatch");
    QueryResult best;
    best.wdist = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < weights.size(); ++k) {
        const double d = internal::distance_unchecked(q, coords.subspan(k * dimension, dimension), metric);
        const double wd = internal::unit_query_wdist(d, weights[k]);
        ++best.nodes_visited;
        if (k == 0 || wd < best.wdist) {
            best.index = k;
            best.wdist = wd;
        }
    }
    return best;
}

/**
 * Hierarchy of nested nets over a weighted point set, with a parent tree.
 *
 * Distances are rescaled so that the closest pair is exactly 1 apart. Level 0
 * holds every point; level `i` is a `2^i`-net of level `i - 1`, built greedily
 * in input order; level `t`, the smallest with `2^t` at least the diameter,
 * holds a single root. Every node records the heaviest point in its subtree.
 */
class NavigatingNet {
public:
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

    struct Node {
        std::size_t level = 0;
        std::size_t point = 0;
        std::size_t parent = npos;
        std::vector<std::size_t> children;
        std::size_t heaviest = 0; ///< Point index of the heaviest point in the subtree.
    };

    NavigatingNet(std::vector<double> coords, std::size_t dimension, std::vector<double> weights,
                  MetricKind metric = MetricKind::euclidean)
        : dimension_(dimension), metric_(metric), coords_(std::move(coords)), weights_(std::move(weights)) {
        internal::require(!weights_.empty(), "navigating net: need at least one point");
        internal::require(dimension_ > 0 && coords_.size() == weights_.size() * dimension_,
                          "navigating net: coordinate count mismatch");
        for (double w : weights_) {
            internal::require(w > 0 && !std::isnan(w), "navigating net: weights must be positive");
        }
        build();
    }

    static NavigatingNet from(const PrototypeClassifier& prototypes) {
        std::vector<double> coords;
        for (std::size_t k = 0; k < prototypes.size(); ++k) {
            auto p = prototypes.point(k);
            coords.insert(coords.end(), p.begin(), p.end());
        }
        return NavigatingNet(std::move(coords), prototypes.dimension(), prototypes.weights(), prototypes.metric());
    }

    std::size_t size() const noexcept { return weights_.size(); }
    std::size_t dimension() const noexcept { return dimension_; }
    std::size_t top_level() const noexcept { return levels_.size() - 1; }
    double scale() const noexcept { return scale_; }

    std::span<const double> point(std::size_t k) const noexcept {
        return {coords_.data() + k * dimension_, dimension_};
    }
    double weight(std::size_t k) const noexcept { return weights_[k]; }

    /// Node ids of each level, bottom (0) to top.
    const std::vector<std::vector<std::size_t>>& levels() const noexcept { return levels_; }
    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    const Node& node(std::size_t id) const { return nodes_[id]; }
    std::size_t root() const noexcept { return levels_.back().front(); }

    /// Distance in the rescaled units used by the hierarchy.
    double scaled_distance(std::size_t a, std::size_t b) const noexcept {
        return internal::distance_unchecked(point(a), point(b), metric_) * scale_;
    }

    /**
     * Approximate weighted nearest neighbor of `q`. The returned weighted
     * distance is at most `1 + 8 * eps` times the optimum.
     */
    QueryResult query(std::span<const double> q, double eps) const {
        internal::require(eps > 0 && eps < 1, "query: eps must lie in (0, 1)");
        internal::require(q.size() == dimension_, "query: dimension mismatch");

        QueryResult best;
        best.wdist = std::numeric_limits<double>::infinity();
        best.index = npos;
        auto consider = [&](std::size_t p, double d) {
            const double wd = internal::unit_query_wdist(d, weights_[p]);
            if (wd < best.wdist || (wd == best.wdist && p < best.index)) {
                best.wdist = wd;
                best.index = p;
            }
        };
        auto examine = [&](const Node& v, double d) {
            consider(v.point, d);
            if (v.heaviest != v.point) {
                consider(v.heaviest, internal::distance_unchecked(q, point(v.heaviest), metric_));
            }
        };

        const Node& top = nodes_[root()];
        examine(top, internal::distance_unchecked(q, point(top.point), metric_));
        ++best.nodes_visited;

        std::vector<std::size_t> list{root()}, next;
        best.max_list = 1;
        for (std::size_t i = top_level(); i >= 1 && !list.empty(); --i) {
            const double radius = 2.0 * std::ldexp(1.0, static_cast<int>(i)) / eps;
            next.clear();
            for (auto v : list) {
                for (auto c : nodes_[v].children) {
                    ++best.nodes_visited;
                    const double d = internal::distance_unchecked(q, point(nodes_[c].point), metric_);
                    if (d * scale_ <= radius) {
                        next.push_back(c);
                        examine(nodes_[c], d);
                    }
                }
            }
            list.swap(next);
            best.max_list = std::max(best.max_list, list.size());
        }
        return best;
    }

    /// Query tuned so that the result is within `1 + eps` of the optimum.
    QueryResult query_within(std::span<const double> q, double eps) const { return query(q, eps / 8); }

    /// One line per node: `level point parent` (parent -1 for the root).
    void dump(std::ostream& out) const {
        for (std::size_t l = levels_.size(); l-- > 0;) {
            for (auto id : levels_[l]) {
                const auto& v = nodes_[id];
                out << v.level << ' ' << v.point << ' ';
                if (v.parent == npos) {
                    out << -1;
                } else {
                    out << nodes_[v.parent].point;
                }
                out << '\n';
            }
        }
    }

private:
    void build() {
        const std::size_t n = size();
        double min_d = std::numeric_limits<double>::infinity(), max_d = 0;
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a + 1; b < n; ++b) {
                const double d = internal::distance_unchecked(point(a), point(b), metric_);
                if (d == 0) {
                    internal::fail(ErrorKind::invalid_argument, "navigating net: points " + std::to_string(a) +
                                                                    " and " + std::to_string(b) + " coincide");
                }
                min_d = std::min(min_d, d);
                max_d = std::max(max_d, d);
            }
        }
        scale_ = n > 1 ? 1.0 / min_d : 1.0;

        // Level 0 keeps every point, so a sample of two or more needs a level above it.
        std::size_t top = n > 1 ? 1 : 0;
        while (std::ldexp(1.0, static_cast<int>(top)) < max_d * scale_) {
            ++top;
        }

        // Point indices per level.
        std::vector<std::vector<std::size_t>> members(top + 1);
        members[0].resize(n);
        for (std::size_t p = 0; p < n; ++p) members[0][p] = p;
        for (std::size_t i = 1; i <= top; ++i) {
            const double r = std::ldexp(1.0, static_cast<int>(i));
            for (auto p : members[i - 1]) {
                bool packed = true;
                for (auto a : members[i]) {
                    if (scaled_distance(p, a) <= r) {
                        packed = false;
                        break;
                    }
                }
                if (packed) members[i].push_back(p);
            }
        }

        levels_.assign(top + 1, {});
        std::vector<std::vector<std::size_t>> node_of(top + 1, std::vector<std::size_t>(n, npos));
        for (std::size_t i = 0; i <= top; ++i) {
            for (auto p : members[i]) {
                Node v;
                v.level = i;
                v.point = p;
                v.heaviest = p;
                node_of[i][p] = nodes_.size();
                levels_[i].push_back(nodes_.size());
                nodes_.push_back(std::move(v));
            }
        }

        for (std::size_t i = 0; i < top; ++i) {
            const double r = std::ldexp(1.0, static_cast<int>(i + 1));
            for (auto id : levels_[i]) {
                const auto p = nodes_[id].point;
                std::size_t chosen = npos;
                for (auto a : members[i + 1]) {
                    if (scaled_distance(p, a) <= r && (chosen == npos || a < chosen)) {
                        chosen = a;
                    }
                }
                if (chosen == npos) {
                    internal::fail(ErrorKind::assertion, "navigating net: level " + std::to_string(i + 1) +
                                                             " does not cover point " + std::to_string(p));
                }
                nodes_[id].parent = node_of[i + 1][chosen];
                nodes_[node_of[i + 1][chosen]].children.push_back(id);
            }
        }

        // Heaviest annotations, bottom-up.
        for (std::size_t i = 1; i <= top; ++i) {
            for (auto id : levels_[i]) {
                auto& v = nodes_[id];
                for (auto c : v.children) {
                    const auto h = nodes_[c].heaviest;
                    if (weights_[h] > weights_[v.heaviest] || (weights_[h] == weights_[v.heaviest] && h < v.heaviest)) {
                        v.heaviest = h;
                    }
                }
            }
        }
    }

    std::size_t dimension_;
    MetricKind metric_;
    std::vector<double> coords_;
    std::vector<double> weights_;
    double scale_ = 1;
    std::vector<std::vector<std::size_t>> levels_;
    std::vector<Node> nodes_;
};

}

#endif
