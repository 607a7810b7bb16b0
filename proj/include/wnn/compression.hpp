#ifndef WNN_COMPRESSION_HPP
#define WNN_COMPRESSION_HPP

#include <algorithm>
#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "classifier.hpp"
#include "csv.hpp"
#include "dataset.hpp"
#include "error.hpp"

/**
 * @file compression.hpp
 *
 * @brief Permutation-invariant sample compression for classifiers whose weights
 * are nearest-enemy distances.
 *
 * A prototype's weight is recovered as the distance to the closest witness with
 * a different label, so storing the nearest enemies of the prototypes next to
 * the prototypes themselves encodes the whole classifier. Neither list's order
 * carries information.
 */

namespace wnn {

struct CompressionCode {
    std::vector<LabeledPoint> prototypes;
    std::vector<LabeledPoint> witnesses;
    MetricKind metric = MetricKind::euclidean;

    std::size_t size() const noexcept { return prototypes.size() + witnesses.size(); }
};

/**
 * Compresses a condensed set whose weights are the nearest-enemy distances of
 * its points. Throws if any weight differs from that distance.
 */
inline CompressionCode encode(const Dataset& ds, const WeightedCondensedSet& c) {
    internal::require(&ds == &c.source() || ds == c.source(), "encode: condensed set belongs to another dataset");
    CompressionCode code;
    code.metric = ds.metric();
    std::vector<std::size_t> witness_indices;
    for (std::size_t k = 0; k < c.size(); ++k) {
        const auto i = c.indices()[k];
        const auto enemy = nearest_enemy(ds, i);
        const double expected = enemy ? enemy->distance : infinite_weight;
        if (c.weights()[k] != expected) {
            internal::fail(ErrorKind::invalid_argument, "encode: weight of index " + std::to_string(i) +
                                                            " is not its nearest-enemy distance");
        }
        code.prototypes.push_back(ds.labeled_point(i));
        if (enemy) {
            witness_indices.push_back(enemy->index);
        }
    }
    std::sort(witness_indices.begin(), witness_indices.end());
    witness_indices.erase(std::unique(witness_indices.begin(), witness_indices.end()), witness_indices.end());
    for (auto j : witness_indices) {
        code.witnesses.push_back(ds.labeled_point(j));
    }
    return code;
}

namespace internal {

inline bool labeled_point_less(const LabeledPoint& a, const LabeledPoint& b) {
    if (a.point != b.point) {
        return std::lexicographical_compare(a.point.begin(), a.point.end(), b.point.begin(), b.point.end());
    }
    return a.label < b.label;
}

}

/**
 * Rebuilds the classifier from a code. Prototypes are put in a canonical order
 * first, so the result does not depend on the order of either list.
 */
inline PrototypeClassifier reconstruct(const CompressionCode& code) {
    internal::require(!code.prototypes.empty(), "reconstruct: code has no prototypes");
    const std::size_t dim = code.prototypes.front().point.size();
    for (const auto& p : code.prototypes) {
        internal::require(p.point.size() == dim, "reconstruct: inconsistent prototype dimensions");
    }
    for (const auto& w : code.witnesses) {
        internal::require(w.point.size() == dim, "reconstruct: witness dimension does not match prototypes");
    }

    auto prototypes = code.prototypes;
    std::sort(prototypes.begin(), prototypes.end(), internal::labeled_point_less);

    const Label first = prototypes.front().label;
    const bool single_class = std::all_of(prototypes.begin(), prototypes.end(),
                                          [&](const LabeledPoint& p) { return p.label == first; }) &&
                              std::all_of(code.witnesses.begin(), code.witnesses.end(),
                                          [&](const LabeledPoint& w) { return w.label == first; });

    PrototypeClassifier out(dim, code.metric);
    for (const auto& p : prototypes) {
        double weight = infinite_weight;
        for (const auto& w : code.witnesses) {
            if (w.label != p.label) {
                weight = std::min(weight, distance(p.point, w.point, code.metric));
            }
        }
        if (std::isinf(weight) && !single_class) {
            internal::fail(ErrorKind::invalid_argument, "reconstruct: a prototype has no differently labeled witness");
        }
        out.add(p.point, p.label, weight);
    }
    return out;
}

/**
 * One row per point: `x0,...,x{d-1},label,role` with role `prototype` or
 * `witness`. Coordinates use 17 significant digits.
 */
inline void write_code_csv(const CompressionCode& code, std::ostream& out) {
    const std::size_t dim = code.prototypes.empty() ? 0 : code.prototypes.front().point.size();
    for (std::size_t d = 0; d < dim; ++d) {
        out << 'x' << d << ',';
    }
    out << "label,role\n";
    auto row = [&](const LabeledPoint& p, const char* role) {
        for (double v : p.point) {
            out << internal::format_double(v) << ',';
        }
        out << p.label << ',' << role << '\n';
    };
    for (const auto& p : code.prototypes) row(p, "prototype");
    for (const auto& w : code.witnesses) row(w, "witness");
}

inline CompressionCode read_code_csv(std::istream& in, MetricKind metric = MetricKind::euclidean) {
    std::string line;
    if (!internal::read_line(in, line)) {
        internal::fail(ErrorKind::data, "compression code: empty input");
    }
    const auto header = internal::split_row(line);
    if (header.size() < 3 || header[header.size() - 2] != "label" || header.back() != "role") {
        internal::fail(ErrorKind::data, "compression code: header must end with label,role");
    }
    const std::size_t dim = header.size() - 2;

    CompressionCode code;
    code.metric = metric;
    std::size_t row_number = 1;
    while (internal::read_line(in, line)) {
        ++row_number;
        if (internal::trim(line).empty()) {
            continue;
        }
        const auto cells = internal::split_row(line);
        const std::string where = "compression code row " + std::to_string(row_number);
        if (cells.size() != header.size()) {
            internal::fail(ErrorKind::data, where + ": expected " + std::to_string(header.size()) + " cells");
        }
        LabeledPoint p;
        for (std::size_t d = 0; d < dim; ++d) {
            auto v = internal::parse_double(cells[d]);
            if (!v || !std::isfinite(*v)) {
                internal::fail(ErrorKind::data, where + ": bad coordinate '" + cells[d] + "'");
            }
            p.point.push_back(*v);
        }
        auto label = internal::parse_integer(cells[dim]);
        if (!label || *label < 0) {
            internal::fail(ErrorKind::data, where + ": bad label '" + cells[dim] + "'");
        }
        p.label = static_cast<Label>(*label);
        if (cells.back() == "prototype") {
            code.prototypes.push_back(std::move(p));
        } else if (cells.back() == "witness") {
            code.witnesses.push_back(std::move(p));
        } else {
            internal::fail(ErrorKind::data, where + ": unknown role '" + cells.back() + "'");
        }
    }
    return code;
}

}

#endif
