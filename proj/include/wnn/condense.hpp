#ifndef WNN_CONDENSE_HPP
#define WNN_CONDENSE_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "bitset.hpp"
#include "classifier.hpp"
#include "dataset.hpp"
#include "error.hpp"
#include "random.hpp"

/**
 * @file condense.hpp
 *
 * @brief Greedy weighted condensing by nearest-enemy balls, plus the unweighted
 * baselines Hart CNN, MSS and RSS.
 */

namespace wnn {

struct GreedyPick {
    std::size_t index = 0;
    double radius = 0;        ///< Nearest-enemy distance of the picked point, also its weight.
    std::size_t covered = 0;  ///< Points newly covered by this pick.
};

struct GreedyTrace {
    std::vector<GreedyPick> picks;
};

struct GreedyOptions {
    /**
     * Largest sample size for which the open-ball membership relation is kept as
     * an n-by-n bit matrix. Larger samples re-evaluate distances on demand. Both
     * paths give identical output.
     */
    std::size_t matrix_limit = 20000;
};

struct GreedyResult {
    WeightedCondensedSet condensed;
    GreedyTrace trace;
};

namespace internal {

[[noreturn]] inline void fail_postcondition(const char* method, const ConsistencyReport& report) {
    fail(ErrorKind::assertion, std::string(method) + ": output is inconsistent on " +
                                   std::to_string(report.violations.size()) + " sample point(s), first at index " +
                                   std::to_string(report.violations.front().index));
}

inline void ensure_consistent(const char* method, const Dataset& ds, const WeightedCondensedSet& c) {
    auto report = consistency_check(ds, c);
    if (!report.consistent) {
        fail_postcondition(method, report);
    }
}

inline bool single_class(const std::vector<double>& radii) {
    return std::all_of(radii.begin(), radii.end(), [](double r) { return std::isinf(r); });
}

}

/**
 * Greedy weighted condensing.
 *
 * Each round selects the sample point whose open ball of radius equal to its
 * nearest-enemy distance contains the most still-uncovered points (ties go to
 * the lowest index), gives it that radius as weight, and marks the ball's
 * contents covered. Every ball holds only same-label points, so the result is
 * always consistent on `ds`; this is re-checked before returning.
 *
 * A single-class sample condenses to its first point with infinite weight.
 */
inline GreedyResult greedy_wnn(const Dataset& ds, const GreedyOptions& options = {}) {
    const std::size_t n = ds.size();
    const std::vector<double> radii = enemy_radii(ds);

    if (internal::single_class(radii)) {
        GreedyTrace trace;
        trace.picks.push_back({0, infinite_weight, n});
        return {WeightedCondensedSet(ds, {0}, {infinite_weight}), std::move(trace)};
    }

    const bool use_matrix = n <= options.matrix_limit;
    std::vector<internal::Bitset> balls;
    std::vector<std::size_t> counts(n, 0);
    if (use_matrix) {
        balls.assign(n, internal::Bitset(n));
        for (std::size_t x = 0; x < n; ++x) {
            for (std::size_t y = 0; y < n; ++y) {
                if (ds.distance(x, y) < radii[x]) {
                    balls[x].set(y);
                }
            }
            counts[x] = balls[x].count();
        }
    } else {
        for (std::size_t x = 0; x < n; ++x) {
            for (std::size_t y = 0; y < n; ++y) {
                counts[x] += ds.distance(x, y) < radii[x];
            }
        }
    }
    auto in_ball = [&](std::size_t center, std::size_t y) {
        return use_matrix ? balls[center].test(y) : ds.distance(center, y) < radii[center];
    };

    std::vector<bool> uncovered(n, true);
    std::size_t remaining = n;
    std::vector<std::size_t> picked;
    std::vector<double> weights;
    GreedyTrace trace;

    while (remaining > 0) {
        std::size_t best = 0;
        for (std::size_t x = 1; x < n; ++x) {
            if (counts[x] > counts[best]) {
                best = x;
            }
        }
        const std::size_t gained = counts[best];
        if (gained == 0) {
            internal::fail(ErrorKind::assertion, "greedy_wnn: no ball covers the remaining points");
        }

        for (std::size_t y = 0; y < n; ++y) {
            if (!uncovered[y] || !in_ball(best, y)) {
                continue;
            }
            uncovered[y] = false;
            --remaining;
            for (std::size_t z = 0; z < n; ++z) {
                if (in_ball(z, y)) {
                    --counts[z];
                }
            }
        }

        picked.push_back(best);
        weights.push_back(radii[best]);
        trace.picks.push_back({best, radii[best], gained});
    }

    WeightedCondensedSet out(ds, std::move(picked), std::move(weights));
    internal::ensure_consistent("greedy_wnn", ds, out);
    return {std::move(out), std::move(trace)};
}

/**
 * Hart's condensed nearest neighbor rule: scan the sample in a seeded random
 * order, adding every point that the current subset misclassifies, until a full
 * pass adds nothing. Unit weights.
 */
inline WeightedCondensedSet hart_cnn(const Dataset& ds, std::uint64_t seed) {
    const std::size_t n = ds.size();
    Rng rng(seed);
    const auto order = rng.permutation(n);

    std::vector<std::size_t> store{order.front()};
    std::vector<bool> stored(n, false);
    stored[order.front()] = true;

    auto predict = [&](std::size_t i) {
        std::size_t best = store.front();
        double best_distance = ds.distance(i, best);
        for (std::size_t k = 1; k < store.size(); ++k) {
            const double d = ds.distance(i, store[k]);
            if (d < best_distance) {
                best = store[k];
                best_distance = d;
            }
        }
        return ds.label(best);
    };

    bool changed = true;
    while (changed) {
        changed = false;
        for (auto i : order) {
            if (stored[i] || predict(i) == ds.label(i)) {
                continue;
            }
            store.push_back(i);
            stored[i] = true;
            changed = true;
        }
    }

    auto out = WeightedCondensedSet::unit(ds, std::move(store));
    internal::ensure_consistent("hart_cnn", ds, out);
    return out;
}

/**
 * Modified selected subset: visit points by increasing nearest-enemy distance;
 * an unmarked point is selected and marks every point `x` lying strictly closer
 * to it than `x`'s own nearest enemy. Unit weights.
 */
inline WeightedCondensedSet mss(const Dataset& ds) {
    const std::size_t n = ds.size();
    const auto radii = enemy_radii(ds);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return radii[a] < radii[b]; });

    std::vector<bool> marked(n, false);
    std::vector<std::size_t> selected;
    for (auto p : order) {
        if (marked[p]) {
            continue;
        }
        selected.push_back(p);
        for (std::size_t x = 0; x < n; ++x) {
            if (!marked[x] && ds.distance(x, p) < radii[x]) {
                marked[x] = true;
            }
        }
    }

    auto out = WeightedCondensedSet::unit(ds, std::move(selected));
    internal::ensure_consistent("mss", ds, out);
    return out;
}

/**
 * Relaxed selective subset: visit points by decreasing nearest-enemy distance
 * and select a point unless an already selected same-label point lies strictly
 * within its nearest-enemy distance. Unit weights.
 */
inline WeightedCondensedSet rss(const Dataset& ds) {
    const std::size_t n = ds.size();
    const auto radii = enemy_radii(ds);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return radii[a] > radii[b]; });

    std::vector<std::size_t> selected;
    for (auto p : order) {
        bool covered = false;
        for (auto s : selected) {
            if (ds.label(s) == ds.label(p) && ds.distance(p, s) < radii[p]) {
                covered = true;
                break;
            }
        }
        if (!covered) {
            selected.push_back(p);
        }
    }

    auto out = WeightedCondensedSet::unit(ds, std::move(selected));
    internal::ensure_consistent("rss", ds, out);
    return out;
}

}

#endif
