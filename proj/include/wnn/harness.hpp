#ifndef WNN_HARNESS_HPP
#define WNN_HARNESS_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "classifier.hpp"
#include "condense.hpp"
#include "csv.hpp"
#include "dataset.hpp"
#include "error.hpp"
#include "exact.hpp"
#include "random.hpp"

/**
 * @file harness.hpp
 *
 * @brief Synthetic generators, CSV ingestion, train/test splits and evaluation.
 */

namespace wnn {

/**
 * Red points `(i, 1/2)` (label 0) and blue points `(i, -1/2)` (label 1) for
 * `i = 1..gamma`. Unweighted condensing needs only the two points at `i = 1`,
 * while every nearest-enemy ball holds just its own center.
 */
inline Dataset gen_two_lines(int gamma) {
    internal::require(gamma >= 1, "two_lines: gamma must be at least 1");
    std::vector<LabeledPoint> pts;
    for (int i = 1; i <= gamma; ++i) pts.push_back({{double(i), 0.5}, 0});
    for (int i = 1; i <= gamma; ++i) pts.push_back({{double(i), -0.5}, 1});
    return Dataset(pts);
}

/**
 * Interleaved red column `(0, 2i)`, `i = 1..gamma`, and blue column
 * `(1, 2i + 1)`, `i = 1..gamma-1`, plus a far red outlier `(-t, gamma + 1)` and a
 * far blue outlier `(2t, gamma + 1)` with `t = (gamma + 1)^2 / 2`. The two
 * outliers' nearest-enemy balls cover their whole classes, but unweighted
 * condensing must keep every column point. `gamma` must be odd and at least 3;
 * the sample has `2 * gamma + 1` points, outliers last.
 */
inline Dataset gen_bc_friendly(int gamma) {
    internal::require(gamma >= 3 && gamma % 2 == 1, "bc_friendly: gamma must be odd and at least 3");
    const double t = (gamma + 1.0) * (gamma + 1.0) / 2.0;
    std::vector<LabeledPoint> pts;
    for (int i = 1; i <= gamma; ++i) pts.push_back({{0.0, 2.0 * i}, 0});
    for (int i = 1; i <= gamma - 1; ++i) pts.push_back({{1.0, 2.0 * i + 1}, 1});
    pts.push_back({{-t, gamma + 1.0}, 0});
    pts.push_back({{2 * t, gamma + 1.0}, 1});
    return Dataset(pts);
}

struct CircleParams {
    double inner_radius = 1.0;
    double outer_min = 1.5;
    double outer_max = 3.0;
};

/**
 * `n / 2` points (label 0) uniform in a disc around the origin and the rest
 * (label 1) uniform in a surrounding annulus.
 */
inline Dataset gen_circle(std::size_t n, std::uint64_t seed, const CircleParams& params = {}) {
    internal::require(n >= 10, "circle: n must be at least 10");
    internal::require(params.inner_radius > 0 && params.outer_min > params.inner_radius &&
                          params.outer_max > params.outer_min,
                      "circle: radii must satisfy 0 < inner < outer_min < outer_max");
    Rng rng(seed);
    std::vector<LabeledPoint> pts;
    const std::size_t inner = n / 2;
    auto polar = [](double r, double theta) { return Point{r * std::cos(theta), r * std::sin(theta)}; };
    for (std::size_t i = 0; i < inner; ++i) {
        const double r = params.inner_radius * std::sqrt(rng.uniform());
        pts.push_back({polar(r, 2 * std::numbers::pi * rng.uniform()), 0});
    }
    const double lo2 = params.outer_min * params.outer_min, hi2 = params.outer_max * params.outer_max;
    for (std::size_t i = inner; i < n; ++i) {
        const double r = std::sqrt(lo2 + (hi2 - lo2) * rng.uniform());
        pts.push_back({polar(r, 2 * std::numbers::pi * rng.uniform()), 1});
    }
    return Dataset(pts);
}

/**
 * Isotropic Gaussian clusters, one per class, with centers evenly spaced on a
 * circle of radius 3. Points take the label of the cluster that generated them,
 * so overlapping clusters produce label noise.
 */
inline Dataset gen_blobs(std::size_t n, std::uint64_t seed, int classes = 2, double spread = 1.0) {
    internal::require(n >= 2, "blobs: n must be at least 2");
    internal::require(classes >= 1, "blobs: need at least one class");
    internal::require(spread > 0, "blobs: spread must be positive");
    Rng rng(seed);
    std::vector<LabeledPoint> pts;
    for (std::size_t i = 0; i < n; ++i) {
        const int c = static_cast<int>(i % static_cast<std::size_t>(classes));
        const double angle = 2 * std::numbers::pi * c / classes;
        pts.push_back({{3 * std::cos(angle) + spread * rng.normal(), 3 * std::sin(angle) + spread * rng.normal()}, c});
    }
    return Dataset(pts);
}

/**
 * Uniform points in the unit square labeled by a smooth deterministic boundary,
 * `label = 1` iff `y > 1/2 + sin(2 pi x) / 4`. No label noise.
 */
inline Dataset gen_sine(std::size_t n, std::uint64_t seed) {
    internal::require(n >= 2, "sine: n must be at least 2");
    Rng rng(seed);
    std::vector<LabeledPoint> pts;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = rng.uniform(), y = rng.uniform();
        pts.push_back({{x, y}, y > 0.5 + 0.25 * std::sin(2 * std::numbers::pi * x) ? 1 : 0});
    }
    return Dataset(pts);
}

enum class Family { two_lines, bc_friendly, circle, blobs, sine };

inline std::optional<Family> parse_family(const std::string& name) {
    static const std::map<std::string, Family> names{
        {"two-lines", Family::two_lines}, {"two_lines", Family::two_lines},     {"bc-friendly", Family::bc_friendly},
        {"bc_friendly", Family::bc_friendly}, {"circle", Family::circle},       {"blobs", Family::blobs},
        {"sine", Family::sine}};
    auto it = names.find(name);
    if (it == names.end()) return std::nullopt;
    return it->second;
}

struct GeneratorSpec {
    Family family = Family::circle;
    std::size_t n = 200;
    std::uint64_t seed = 0;
    int gamma = 4;
    int classes = 2;
    double spread = 1.0;
    CircleParams circle;
};

inline Dataset generate(const GeneratorSpec& spec) {
    switch (spec.family) {
        case Family::two_lines: return gen_two_lines(spec.gamma);
        case Family::bc_friendly: return gen_bc_friendly(spec.gamma);
        case Family::circle: return gen_circle(spec.n, spec.seed, spec.circle);
        case Family::blobs: return gen_blobs(spec.n, spec.seed, spec.classes, spec.spread);
        case Family::sine: return gen_sine(spec.n, spec.seed);
    }
    internal::fail(ErrorKind::invalid_argument, "unknown generator family");
}

/**
 * Raw CSV contents: a header and rectangular rows of cells.
 */
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers; ///< Source line of each row, 1-based.

    std::optional<std::size_t> column(const std::string& name) const {
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (header[c] == name) return c;
        }
        return std::nullopt;
    }
};

inline CsvTable read_csv_table(std::istream& in) {
    CsvTable table;
    std::string line;
    std::size_t line_number = 0;
    while (internal::read_line(in, line)) {
        ++line_number;
        if (internal::trim(line).empty()) {
            continue;
        }
        auto cells = internal::split_row(line);
        if (table.header.empty()) {
            table.header = std::move(cells);
            continue;
        }
        if (cells.size() != table.header.size()) {
            internal::fail(ErrorKind::data, "row " + std::to_string(line_number) + ": expected " +
                                                std::to_string(table.header.size()) + " cells, found " +
                                                std::to_string(cells.size()));
        }
        table.rows.push_back(std::move(cells));
        table.line_numbers.push_back(line_number);
    }
    if (table.header.empty()) {
        internal::fail(ErrorKind::data, "CSV input is empty");
    }
    return table;
}

struct CsvOptions {
    std::string label_column = "label";
    std::vector<std::string> ignore_columns{"weight"};
    MetricKind metric = MetricKind::euclidean;
};

/**
 * Builds a dataset from a table. Every column other than the label column and
 * the ignored ones is a coordinate. Labels that are all non-negative integers are
 * used as is; otherwise distinct strings are numbered by first appearance.
 */
inline Dataset dataset_from_table(const CsvTable& table, const CsvOptions& options = {}) {
    auto label_col = table.column(options.label_column);
    if (!label_col) {
        internal::fail(ErrorKind::data, "unknown label column '" + options.label_column + "'");
    }
    std::vector<std::size_t> coord_cols;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        bool ignored = c == *label_col;
        for (const auto& name : options.ignore_columns) ignored = ignored || table.header[c] == name;
        if (!ignored) coord_cols.push_back(c);
    }
    if (coord_cols.empty()) {
        internal::fail(ErrorKind::data, "CSV has no coordinate columns");
    }
    if (table.rows.empty()) {
        internal::fail(ErrorKind::data, "CSV has no data rows");
    }

    std::vector<double> coords;
    coords.reserve(table.rows.size() * coord_cols.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        for (auto c : coord_cols) {
            auto v = internal::parse_double(table.rows[r][c]);
            if (!v || !std::isfinite(*v)) {
                internal::fail(ErrorKind::data, "row " + std::to_string(table.line_numbers[r]) + ": bad value '" +
                                                    table.rows[r][c] + "' in column '" + table.header[c] + "'");
            }
            coords.push_back(*v);
        }
    }

    std::vector<Label> labels;
    bool numeric = true;
    for (const auto& row : table.rows) {
        auto v = internal::parse_integer(row[*label_col]);
        numeric = numeric && v && *v >= 0 && *v <= 1'000'000;
    }
    std::map<std::string, Label> codes;
    for (const auto& row : table.rows) {
        const auto& cell = row[*label_col];
        if (numeric) {
            labels.push_back(static_cast<Label>(*internal::parse_integer(cell)));
        } else {
            auto [it, inserted] = codes.emplace(cell, static_cast<Label>(codes.size()));
            labels.push_back(it->second);
        }
    }
    return Dataset(coord_cols.size(), std::move(coords), std::move(labels), options.metric);
}

inline Dataset load_csv(std::istream& in, const CsvOptions& options = {}) {
    return dataset_from_table(read_csv_table(in), options);
}

inline Dataset load_csv(const std::string& path, const CsvOptions& options = {}) {
    std::ifstream in(path);
    if (!in) {
        internal::fail(ErrorKind::io, "cannot open '" + path + "' for reading");
    }
    return load_csv(in, options);
}

/**
 * Header `x0,...,x{d-1},label`, plus a trailing `weight` column when `weights`
 * is non-empty. Coordinates use 17 significant digits so that loading the file
 * reproduces the dataset exactly.
 */
inline void save_csv(const Dataset& ds, std::ostream& out, const std::vector<double>& weights = {}) {
    internal::require(weights.empty() || weights.size() == ds.size(), "save_csv: one weight per point");
    for (std::size_t d = 0; d < ds.dimension(); ++d) out << 'x' << d << ',';
    out << "label" << (weights.empty() ? "" : ",weight") << '\n';
    for (std::size_t i = 0; i < ds.size(); ++i) {
        for (double v : ds.point(i)) out << internal::format_double(v) << ',';
        out << ds.label(i);
        if (!weights.empty()) out << ',' << internal::format_double(weights[i]);
        out << '\n';
    }
}

inline void save_csv(const Dataset& ds, const std::string& path, const std::vector<double>& weights = {}) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        internal::fail(ErrorKind::io, "cannot open '" + path + "' for writing");
    }
    save_csv(ds, out, weights);
    if (!out) {
        internal::fail(ErrorKind::io, "failed writing '" + path + "'");
    }
}

/**
 * Keeps only points whose label is listed, relabeling them `0..k-1` in list order.
 */
inline Dataset filter_classes(const Dataset& ds, const std::vector<Label>& keep) {
    std::vector<std::size_t> idx;
    std::vector<Label> labels;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        for (std::size_t k = 0; k < keep.size(); ++k) {
            if (ds.label(i) == keep[k]) {
                idx.push_back(i);
                labels.push_back(static_cast<Label>(k));
            }
        }
    }
    if (idx.empty()) {
        internal::fail(ErrorKind::data, "filter_classes: no point carries a requested label");
    }
    auto sub = ds.subset(idx);
    return Dataset(sub.dimension(), sub.coords(), std::move(labels), sub.metric());
}

struct SplitSpec {
    double train_fraction = 0.7;
    std::uint64_t seed = 0;
};

struct Split {
    Dataset train;
    Dataset test;
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> test_indices;
};

/**
 * Seeded shuffle, then the first `round(fraction * n)` points (clamped so both
 * parts are non-empty) form the training part.
 */
inline Split split(const Dataset& ds, const SplitSpec& spec = {}) {
    internal::require(spec.train_fraction > 0 && spec.train_fraction < 1, "split: fraction must lie in (0, 1)");
    internal::require(ds.size() >= 2, "split: need at least two points");
    Rng rng(spec.seed);
    auto order = rng.permutation(ds.size());
    auto k = static_cast<std::size_t>(std::llround(spec.train_fraction * static_cast<double>(ds.size())));
    k = std::clamp<std::size_t>(k, 1, ds.size() - 1);
    std::vector<std::size_t> train(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
    std::vector<std::size_t> test(order.begin() + static_cast<std::ptrdiff_t>(k), order.end());
    return {ds.subset(train), ds.subset(test), train, test};
}

enum class Method { none, greedy_wnn, hart_cnn, mss, rss, exact_nn, exact_wnn };

inline const char* to_string(Method m) {
    switch (m) {
        case Method::none: return "none";
        case Method::greedy_wnn: return "greedy_wnn";
        case Method::hart_cnn: return "hart_cnn";
        case Method::mss: return "mss";
        case Method::rss: return "rss";
        case Method::exact_nn: return "exact_nn";
        case Method::exact_wnn: return "exact_wnn";
    }
    return "unknown";
}

inline std::optional<Method> parse_method(const std::string& name) {
    static const std::map<std::string, Method> names{
        {"none", Method::none},          {"1nn", Method::none},         {"1-nn", Method::none},
        {"greedy_wnn", Method::greedy_wnn}, {"greedy", Method::greedy_wnn}, {"greedy-wnn", Method::greedy_wnn},
        {"hart_cnn", Method::hart_cnn}, {"hart", Method::hart_cnn},     {"cnn", Method::hart_cnn},
        {"hart-cnn", Method::hart_cnn}, {"mss", Method::mss},           {"rss", Method::rss},
        {"exact_nn", Method::exact_nn}, {"exact-nn", Method::exact_nn}, {"exact_wnn", Method::exact_wnn},
        {"exact-wnn", Method::exact_wnn}};
    auto it = names.find(name);
    if (it == names.end()) return std::nullopt;
    return it->second;
}

struct CondenseOutcome {
    WeightedCondensedSet condensed;
    SolveStatus status = SolveStatus::optimal;
};

/**
 * Runs one condensing method on `ds`. `seed` drives Hart's scan order and is
 * ignored by the deterministic methods.
 */
inline CondenseOutcome condense(const Dataset& ds, Method method, std::uint64_t seed = 0,
                                std::uint64_t node_budget = default_node_budget) {
    switch (method) {
        case Method::none: return {WeightedCondensedSet::full(ds), SolveStatus::optimal};
        case Method::greedy_wnn: return {greedy_wnn(ds).condensed, SolveStatus::optimal};
        case Method::hart_cnn: return {hart_cnn(ds, seed), SolveStatus::optimal};
        case Method::mss: return {mss(ds), SolveStatus::optimal};
        case Method::rss: return {rss(ds), SolveStatus::optimal};
        case Method::exact_nn: {
            auto r = exact_nn_condense(ds, node_budget);
            return {std::move(r.condensed), r.status};
        }
        case Method::exact_wnn: {
            auto r = exact_wnn_condense(ds, node_budget);
            return {std::move(r.condensed), r.status};
        }
    }
    internal::fail(ErrorKind::invalid_argument, "unknown method");
}

struct CondenseReport {
    std::string method;
    std::uint64_t seed = 0;
    std::size_t size = 0;
    std::size_t train_size = 0;
    double ratio = 1;
    bool consistent = true;
    double test_error = 0;
    SolveStatus status = SolveStatus::optimal;
    double wall_ms = 0;
};

/**
 * Condenses `train`, checks consistency on it, and measures 0/1 error on `test`.
 */
inline CondenseReport evaluate(const Dataset& train, const Dataset& test, Method method, std::uint64_t seed = 0,
                               std::uint64_t node_budget = default_node_budget) {
    internal::require(train.dimension() == test.dimension(), "evaluate: train and test dimensions differ");
    const auto start = std::chrono::steady_clock::now();
    auto outcome = condense(train, method, seed, node_budget);
    const auto& c = outcome.condensed;

    CondenseReport report;
    report.method = to_string(method);
    report.seed = seed;
    report.size = c.size();
    report.train_size = train.size();
    report.ratio = static_cast<double>(c.size()) / static_cast<double>(train.size());
    report.consistent = consistency_check(train, c).consistent;
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < test.size(); ++i) {
        wrong += classify(test.point(i), c) != test.label(i);
    }
    report.test_error = static_cast<double>(wrong) / static_cast<double>(test.size());
    report.status = outcome.status;
    report.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return report;
}

/**
 * Report rows as CSV. Wall time is excluded unless requested, so that reruns
 * with the same seeds produce identical bytes.
 */
inline void write_reports_csv(const std::vector<CondenseReport>& reports, std::ostream& out, bool with_time = false) {
    out << "method,seed,size,train_size,ratio,consistent,test_error,status" << (with_time ? ",wall_ms" : "") << '\n';
    for (const auto& r : reports) {
        out << r.method << ',' << r.seed << ',' << r.size << ',' << r.train_size << ','
            << internal::format_double(r.ratio) << ',' << (r.consistent ? "true" : "false") << ','
            << internal::format_double(r.test_error) << ',' << to_string(r.status);
        if (with_time) out << ',' << internal::format_double(r.wall_ms);
        out << '\n';
    }
}

}

#endif
