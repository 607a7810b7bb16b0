#ifndef WNN_EXACT_HPP
#define WNN_EXACT_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "bitset.hpp"
#include "classifier.hpp"
#include "condense.hpp"
#include "dataset.hpp"
#include "error.hpp"

/**
 * @file exact.hpp
 *
 * @brief Exact minimum condensing by branch-and-bound.
 *
 * Two problems are solved exactly:
 *
 * - weighted condensing with nearest-enemy weights, cast as minimum set cover
 *   where the set of a sample point is its open nearest-enemy ball;
 * - unweighted nearest-neighbor condensing, written as a 0-1 integer program
 *   with one covering row per ordered pair of differently labeled points.
 *
 * Both searches stop after a fixed number of branch nodes and then report
 * `SolveStatus::unknown` together with the best solution seen.
 */

namespace wnn {

inline constexpr std::uint64_t default_node_budget = 10'000'000;

enum class SolveStatus { optimal, unknown };

inline const char* to_string(SolveStatus s) { return s == SolveStatus::optimal ? "optimal" : "unknown"; }

struct ExactResult {
    SolveStatus status = SolveStatus::optimal;
    WeightedCondensedSet condensed;
    std::uint64_t nodes = 0;
};

/**
 * `sets[x]` lists the sample points strictly inside the nearest-enemy ball of `x`.
 */
struct CoverInstance {
    std::size_t universe = 0;
    std::vector<internal::Bitset> sets;
};

inline CoverInstance build_wnn_cover(const Dataset& ds) {
    const std::size_t n = ds.size();
    const auto radii = enemy_radii(ds);
    CoverInstance out{n, std::vector<internal::Bitset>(n, internal::Bitset(n))};
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            if (ds.distance(x, y) < radii[x]) {
                out.sets[x].set(y);
            }
        }
    }
    return out;
}

struct CoverSolution {
    SolveStatus status = SolveStatus::optimal;
    std::vector<std::size_t> chosen;
    std::uint64_t nodes = 0;
};

namespace internal {

class SetCoverSearch {
public:
    SetCoverSearch(const CoverInstance& instance, std::uint64_t budget)
        : instance_(instance), budget_(budget), covering_(instance.universe, Bitset(instance.sets.size())) {
        for (std::size_t s = 0; s < instance.sets.size(); ++s) {
            instance.sets[s].for_each([&](std::size_t e) { covering_[e].set(s); });
        }
    }

    CoverSolution run(std::vector<std::size_t> incumbent) {
        best_ = std::move(incumbent);
        if (best_.empty()) {
            best_.resize(instance_.sets.size() + 1);
        }
        std::vector<std::size_t> chosen;
        search(Bitset(instance_.universe), Bitset(instance_.sets.size()), chosen);
        if (best_.size() > instance_.sets.size()) {
            fail(ErrorKind::invalid_argument, "set cover instance has no cover");
        }
        return {aborted_ ? SolveStatus::unknown : SolveStatus::optimal, best_, nodes_};
    }

private:
    void search(const Bitset& covered, Bitset excluded, std::vector<std::size_t>& chosen) {
        if (aborted_) {
            return;
        }
        if (++nodes_ > budget_) {
            aborted_ = true;
            return;
        }
        if (covered.count() == instance_.universe) {
            if (chosen.size() < best_.size()) {
                best_ = chosen;
            }
            return;
        }

        // Available covering sets per uncovered element.
        std::vector<std::pair<std::size_t, std::size_t>> pending; // (#available sets, element)
        for (std::size_t e = 0; e < instance_.universe; ++e) {
            if (covered.test(e)) {
                continue;
            }
            Bitset avail = covering_[e];
            avail.subtract(excluded);
            const std::size_t k = avail.count();
            if (k == 0) {
                return;
            }
            pending.emplace_back(k, e);
        }
        std::sort(pending.begin(), pending.end());

        // Elements no single set can cover together each need their own set.
        Bitset blocked(instance_.sets.size());
        std::size_t independent = 0;
        for (const auto& [k, e] : pending) {
            Bitset avail = covering_[e];
            avail.subtract(excluded);
            if (!avail.intersects(blocked)) {
                ++independent;
                blocked |= avail;
            }
        }
        if (chosen.size() + independent >= best_.size()) {
            return;
        }

        const std::size_t element = pending.front().second;
        Bitset avail = covering_[element];
        avail.subtract(excluded);
        std::vector<std::pair<std::size_t, std::size_t>> branches; // (-gain, set)
        avail.for_each([&](std::size_t s) {
            Bitset gain = instance_.sets[s];
            gain.subtract(covered);
            branches.emplace_back(std::numeric_limits<std::size_t>::max() - gain.count(), s);
        });
        std::sort(branches.begin(), branches.end());

        for (const auto& [ignored, s] : branches) {
            Bitset next = covered;
            next |= instance_.sets[s];
            chosen.push_back(s);
            search(next, excluded, chosen);
            chosen.pop_back();
            excluded.set(s);
            if (aborted_) {
                return;
            }
        }
    }

    const CoverInstance& instance_;
    std::uint64_t budget_;
    std::vector<Bitset> covering_;
    std::vector<std::size_t> best_;
    std::uint64_t nodes_ = 0;
    bool aborted_ = false;
};

}

/**
 * Minimum set cover by depth-first branch-and-bound. Branches on the uncovered
 * element with the fewest available sets; the bound counts uncovered elements
 * that pairwise share no available set. `incumbent`, if given, must be a cover.
 */
inline CoverSolution solve_set_cover(const CoverInstance& instance, std::uint64_t node_budget = default_node_budget,
                                     std::vector<std::size_t> incumbent = {}) {
    internal::require(instance.sets.size() > 0, "solve_set_cover: no sets");
    auto out = internal::SetCoverSearch(instance, node_budget).run(std::move(incumbent));
    std::sort(out.chosen.begin(), out.chosen.end());
    return out;
}

/**
 * Smallest subset whose nearest-enemy balls cover the sample, weighted by
 * nearest-enemy distance. Seeded with the greedy solution, so an `unknown`
 * result is never worse than `greedy_wnn`.
 */
inline ExactResult exact_wnn_condense(const Dataset& ds, std::uint64_t node_budget = default_node_budget) {
    const auto radii = enemy_radii(ds);
    if (internal::single_class(radii)) {
        return {SolveStatus::optimal, WeightedCondensedSet(ds, {0}, {infinite_weight}), 0};
    }
    const auto cover = build_wnn_cover(ds);
    auto greedy = greedy_wnn(ds);
    auto solution = solve_set_cover(cover, node_budget, greedy.condensed.indices());

    std::vector<double> weights;
    for (auto i : solution.chosen) {
        weights.push_back(radii[i]);
    }
    WeightedCondensedSet out(ds, solution.chosen, std::move(weights));
    internal::ensure_consistent("exact_wnn_condense", ds, out);
    return {solution.status, std::move(out), solution.nodes};
}

/**
 * 0-1 program for unweighted condensing: minimize the number of selected points
 * subject to `v(trigger) <= sum of v over supporters` for every row, and at
 * least one point selected. Row `(x, x')` has `x'` differently labeled from `x`
 * and supporters `C(x, x')`: the points labeled like `x` strictly closer to `x`
 * than `x'` is, including `x` itself.
 */
struct IPConstraint {
    std::size_t anchor = 0;   ///< The point `x` whose label must be protected.
    std::size_t trigger = 0;  ///< The enemy `x'`.
    internal::Bitset supporters;
};

struct IPInstance {
    std::size_t variables = 0;
    std::vector<IPConstraint> constraints;
};

inline IPInstance build_nn_ip(const Dataset& ds) {
    const std::size_t n = ds.size();
    IPInstance ip{n, {}};
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t enemy = 0; enemy < n; ++enemy) {
            if (ds.label(enemy) == ds.label(x)) {
                continue;
            }
            const double limit = ds.distance(x, enemy);
            IPConstraint row{x, enemy, internal::Bitset(n)};
            for (std::size_t y = 0; y < n; ++y) {
                if (ds.label(y) == ds.label(x) && ds.distance(x, y) < limit) {
                    row.supporters.set(y);
                }
            }
            ip.constraints.push_back(std::move(row));
        }
    }
    return ip;
}

/**
 * Whether `selected` (one flag per variable) satisfies every row of `ip`.
 */
inline bool ip_feasible(const IPInstance& ip, const std::vector<bool>& selected) {
    internal::require(selected.size() == ip.variables, "ip_feasible: wrong number of variables");
    if (std::none_of(selected.begin(), selected.end(), [](bool b) { return b; })) {
        return false;
    }
    for (const auto& row : ip.constraints) {
        if (!selected[row.trigger]) {
            continue;
        }
        bool supported = false;
        row.supporters.for_each([&](std::size_t y) { supported = supported || selected[y]; });
        if (!supported) {
            return false;
        }
    }
    return true;
}

/**
 * Writes `ip` in CPLEX LP format for cross-checking with third-party solvers.
 * Variable `v<i>` corresponds to sample index `i`.
 */
inline void write_lp(const IPInstance& ip, std::ostream& out) {
    out << "\\ nearest-neighbor condensing\nMinimize\n obj:";
    for (std::size_t i = 0; i < ip.variables; ++i) {
        out << (i ? " + v" : " v") << i;
    }
    out << "\nSubject To\n";
    for (std::size_t r = 0; r < ip.constraints.size(); ++r) {
        const auto& row = ip.constraints[r];
        out << " c" << r << ":";
        bool first = true;
        row.supporters.for_each([&](std::size_t y) {
            out << (first ? " v" : " + v") << y;
            first = false;
        });
        out << " - v" << row.trigger << " >= 0\n";
    }
    out << " nonempty:";
    for (std::size_t i = 0; i < ip.variables; ++i) {
        out << (i ? " + v" : " v") << i;
    }
    out << " >= 1\nBinary\n";
    for (std::size_t i = 0; i < ip.variables; ++i) {
        out << " v" << i << "\n";
    }
    out << "End\n";
}

namespace internal {

/**
 * Depth-first search over the condensing program.
 *
 * In any feasible selection each sample point `x` has a nearest selected
 * same-label point `y`, and every selected enemy of `x` lies strictly farther
 * than `y`. A node picks an unresolved `x` and branches on which point plays the
 * role of `y` (scanning candidates in order of distance from `x`): the child
 * selects `y`, forbids the same-label candidates ahead of it and forbids every
 * enemy no farther than `y`. Children are disjoint and together complete.
 */
class CondensingSearch {
public:
    CondensingSearch(const Dataset& ds, std::uint64_t budget)
        : ds_(ds), n_(ds.size()), budget_(budget), dist_(n_ * n_), order_(n_ * n_), state_(n_, 0) {
        for (std::size_t x = 0; x < n_; ++x) {
            for (std::size_t y = 0; y < n_; ++y) {
                dist_[x * n_ + y] = ds.distance(x, y);
            }
            auto row = order_.begin() + static_cast<std::ptrdiff_t>(x * n_);
            std::iota(row, row + static_cast<std::ptrdiff_t>(n_), std::size_t{0});
            std::stable_sort(row, row + static_cast<std::ptrdiff_t>(n_),
                             [&](std::size_t a, std::size_t b) { return dist(x, a) < dist(x, b); });
        }
    }

    void set_incumbent(std::vector<std::size_t> incumbent) { best_ = std::move(incumbent); }

    bool run() {
        if (best_.empty()) {
            best_.resize(n_ + 1);
        }
        search();
        return !aborted_;
    }

    const std::vector<std::size_t>& best() const noexcept { return best_; }
    std::uint64_t nodes() const noexcept { return nodes_; }

private:
    enum : unsigned char { free_ = 0, in_ = 1, out_ = 2 };

    double dist(std::size_t a, std::size_t b) const noexcept { return dist_[a * n_ + b]; }

    struct PointStatus {
        bool correct = false;
        bool guaranteed = false;
        bool needs_new = false;
        std::vector<std::size_t> candidates;
    };

    PointStatus inspect(std::size_t x) const {
        constexpr double inf = std::numeric_limits<double>::infinity();
        const Label own = ds_.label(x);
        const std::size_t* row = order_.data() + x * n_;

        double same = inf;           // nearest selected same-label point
        double enemy = inf;          // nearest selected enemy
        double possible_enemy = inf; // nearest enemy that is not forbidden
        for (std::size_t k = 0; k < n_; ++k) {
            const auto y = row[k];
            const auto s = state_[y];
            if (ds_.label(y) == own) {
                if (s == in_ && same == inf) same = dist(x, y);
            } else {
                if (s != out_ && possible_enemy == inf) possible_enemy = dist(x, y);
                if (s == in_ && enemy == inf) enemy = dist(x, y);
            }
            if (same != inf && possible_enemy != inf) {
                break;
            }
        }

        PointStatus st;
        st.correct = !selected_.empty() && (enemy == inf || same < enemy);
        st.guaranteed = same < possible_enemy;
        if (st.guaranteed) {
            return st;
        }
        st.needs_new = true;
        for (std::size_t k = 0; k < n_; ++k) {
            const auto y = row[k];
            if (dist(x, y) >= enemy) {
                break;
            }
            if (ds_.label(y) != own || state_[y] == out_) {
                continue;
            }
            st.candidates.push_back(y);
            if (state_[y] == in_) {
                st.needs_new = false;
                break;
            }
        }
        return st;
    }

    void search() {
        if (aborted_) {
            return;
        }
        if (++nodes_ > budget_) {
            aborted_ = true;
            return;
        }

        std::vector<PointStatus> status(n_);
        bool all_correct = !selected_.empty();
        for (std::size_t x = 0; x < n_; ++x) {
            status[x] = inspect(x);
            all_correct = all_correct && status[x].correct;
        }
        if (all_correct) {
            if (selected_.size() < best_.size()) {
                best_ = selected_;
            }
            return;
        }

        std::vector<std::pair<std::size_t, std::size_t>> open; // (#candidates, point)
        for (std::size_t x = 0; x < n_; ++x) {
            if (status[x].guaranteed) {
                continue;
            }
            if (status[x].candidates.empty()) {
                return;
            }
            open.emplace_back(status[x].candidates.size(), x);
        }
        std::sort(open.begin(), open.end());

        // Points whose candidates are all unselected need a new point each, unless
        // two of them can share one.
        Bitset used(n_);
        std::size_t extra = 0;
        for (const auto& [k, x] : open) {
            if (!status[x].needs_new) {
                continue;
            }
            bool clash = false;
            for (auto y : status[x].candidates) {
                if (used.test(y)) {
                    clash = true;
                    break;
                }
            }
            if (!clash) {
                ++extra;
                for (auto y : status[x].candidates) used.set(y);
            }
        }
        if (selected_.size() + extra >= best_.size()) {
            return;
        }

        const std::size_t x = open.front().second;
        const auto candidates = status[x].candidates;
        const Label own = ds_.label(x);
        const std::size_t* row = order_.data() + x * n_;

        std::vector<std::size_t> forbidden;
        std::size_t scan = 0; // position in `row` up to which enemies are forbidden
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            const auto y = candidates[c];
            const double radius = dist(x, y);
            while (scan < n_ && dist(x, row[scan]) <= radius) {
                const auto z = row[scan];
                if (ds_.label(z) != own && state_[z] == free_) {
                    state_[z] = out_;
                    forbidden.push_back(z);
                }
                ++scan;
            }

            const bool added = state_[y] == free_;
            if (added) {
                state_[y] = in_;
                selected_.push_back(y);
            }
            search();
            if (!added || aborted_) {
                if (added) {
                    selected_.pop_back();
                    state_[y] = free_;
                }
                break;
            }
            selected_.pop_back();
            // Later siblings exclude this candidate.
            state_[y] = out_;
            forbidden.push_back(y);
        }
        for (auto z : forbidden) {
            state_[z] = free_;
        }
    }

    const Dataset& ds_;
    std::size_t n_;
    std::uint64_t budget_;
    std::vector<double> dist_;
    std::vector<std::size_t> order_;
    std::vector<unsigned char> state_;
    std::vector<std::size_t> selected_;
    std::vector<std::size_t> best_;
    std::uint64_t nodes_ = 0;
    bool aborted_ = false;
};

}

/**
 * Smallest unweighted consistent subset, found by branch-and-bound over the
 * condensing program. Seeded with the better of MSS and RSS. The solution is
 * re-checked against the program rows and then against the classifier; a
 * classifier mismatch throws `ErrorKind::assertion`.
 */
inline ExactResult exact_nn_condense(const Dataset& ds, std::uint64_t node_budget = default_node_budget) {
    if (ds.num_classes() == 1) {
        return {SolveStatus::optimal, WeightedCondensedSet::unit(ds, {0}), 0};
    }

    internal::CondensingSearch search(ds, node_budget);
    auto a = mss(ds);
    auto b = rss(ds);
    auto seed = a.size() <= b.size() ? a.indices() : b.indices();
    std::sort(seed.begin(), seed.end());
    search.set_incumbent(std::move(seed));
    const bool complete = search.run();

    auto chosen = search.best();
    std::sort(chosen.begin(), chosen.end());

    const auto ip = build_nn_ip(ds);
    std::vector<bool> selected(ds.size(), false);
    for (auto i : chosen) selected[i] = true;
    if (!ip_feasible(ip, selected)) {
        internal::fail(ErrorKind::assertion, "exact_nn_condense: solution violates the condensing program");
    }

    auto out = WeightedCondensedSet::unit(ds, std::move(chosen));
    internal::ensure_consistent("exact_nn_condense", ds, out);
    return {complete ? SolveStatus::optimal : SolveStatus::unknown, std::move(out), search.nodes()};
}

}

#endif
