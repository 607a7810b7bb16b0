// Command-line front end for the wnn library.
//
// Exit codes: 0 success, 1 usage, 2 I/O, 3 data invariant, 4 node budget
// exhausted, 5 internal assertion failed.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wnn/wnn.hpp"

namespace {

using json = nlohmann::ordered_json;

enum Exit : int { ok = 0, usage = 1, io = 2, data = 3, budget = 4, assertion = 5 };

struct Common {
    std::string input;
    std::string output;
    std::string label_column = "label";
    std::string metric = "euclidean";
    std::uint64_t seed = 0;
};

wnn::MetricKind metric_of(const std::string& name) {
    auto m = wnn::parse_metric(name);
    if (!m) throw CLI::ValidationError("--metric", "unknown metric '" + name + "'");
    return *m;
}

wnn::Dataset load(const Common& c) {
    wnn::CsvOptions opt;
    opt.label_column = c.label_column;
    opt.metric = metric_of(c.metric);
    return wnn::load_csv(c.input, opt);
}

std::vector<wnn::Method> parse_methods(const std::string& list) {
    std::vector<wnn::Method> out;
    std::stringstream ss(list);
    std::string name;
    while (std::getline(ss, name, ',')) {
        auto m = wnn::parse_method(std::string(wnn::internal::trim(name)));
        if (!m) throw CLI::ValidationError("--methods", "unknown method '" + name + "'");
        if (std::find(out.begin(), out.end(), *m) == out.end()) out.push_back(*m);
    }
    if (out.empty()) throw CLI::ValidationError("--methods", "no method given");
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) wnn::internal::fail(wnn::ErrorKind::io, "cannot open '" + path + "' for writing");
    out << text;
    if (!out) wnn::internal::fail(wnn::ErrorKind::io, "failed writing '" + path + "'");
}

json report_json(const wnn::CondenseReport& r, bool with_time) {
    json j{{"method", r.method},         {"seed", r.seed},
           {"size", r.size},             {"train_size", r.train_size},
           {"ratio", r.ratio},           {"consistent", r.consistent},
           {"test_error", r.test_error}, {"status", wnn::to_string(r.status)}};
    if (with_time) j["wall_ms"] = r.wall_ms;
    return j;
}

// gen ----------------------------------------------------------------------

struct GenArgs {
    std::string family;
    std::string output;
    wnn::GeneratorSpec spec;
};

int run_gen(const GenArgs& a) {
    auto family = wnn::parse_family(a.family);
    if (!family) throw CLI::ValidationError("--family", "unknown family '" + a.family + "'");
    auto spec = a.spec;
    spec.family = *family;
    auto ds = wnn::generate(spec);
    std::ostringstream out;
    wnn::save_csv(ds, out);
    write_text(a.output, out.str());
    return ok;
}

// condense -----------------------------------------------------------------

struct CondenseArgs {
    Common io;
    std::string method = "greedy_wnn";
    std::uint64_t node_budget = wnn::default_node_budget;
};

int run_condense(const CondenseArgs& a) {
    auto method = wnn::parse_method(a.method);
    if (!method) throw CLI::ValidationError("--method", "unknown method '" + a.method + "'");
    auto ds = load(a.io);
    auto outcome = wnn::condense(ds, *method, a.io.seed, a.node_budget);
    const auto& c = outcome.condensed;

    if (!a.io.output.empty()) {
        wnn::save_csv(ds.subset(c.indices()), a.io.output, c.weights());
    }
    json j{{"method", wnn::to_string(*method)},
           {"seed", a.io.seed},
           {"size", c.size()},
           {"train_size", ds.size()},
           {"ratio", static_cast<double>(c.size()) / static_cast<double>(ds.size())},
           {"consistent", wnn::consistency_check(ds, c).consistent},
           {"status", wnn::to_string(outcome.status)},
           {"indices", c.indices()}};
    std::cout << j.dump() << '\n';
    return outcome.status == wnn::SolveStatus::optimal ? ok : budget;
}

// eval ---------------------------------------------------------------------

struct EvalArgs {
    Common io;
    std::string methods = "greedy_wnn,hart_cnn,mss,rss";
    std::size_t reps = 10;
    double split = 0.7;
    std::size_t threads = 1;
    std::uint64_t node_budget = wnn::default_node_budget;
    bool timing = false;
    bool json_rows = false;
};

int run_eval(const EvalArgs& a) {
    const auto methods = parse_methods(a.methods);
    if (a.reps == 0) throw CLI::ValidationError("--reps", "must be positive");
    if (!(a.split > 0 && a.split < 1)) throw CLI::ValidationError("--split", "must lie in (0, 1)");
    auto ds = load(a.io);

    struct Job {
        std::uint64_t seed;
        std::size_t method;
    };
    std::vector<Job> jobs;
    for (std::size_t r = 0; r < a.reps; ++r) {
        for (std::size_t m = 0; m < methods.size(); ++m) jobs.push_back({a.io.seed + r, m});
    }
    std::vector<wnn::CondenseReport> reports(jobs.size());
    std::vector<std::exception_ptr> errors(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k; (k = next.fetch_add(1)) < jobs.size();) {
            try {
                auto parts = wnn::split(ds, {a.split, jobs[k].seed});
                reports[k] = wnn::evaluate(parts.train, parts.test, methods[jobs[k].method], jobs[k].seed,
                                           a.node_budget);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    const std::size_t n_threads = std::max<std::size_t>(1, std::min(a.threads, jobs.size()));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    // Jobs were laid out by (seed, method position); keep that order.
    std::ostringstream csv;
    wnn::write_reports_csv(reports, csv, a.timing);
    write_text(a.io.output, csv.str());

    bool all_consistent = true, all_optimal = true;
    for (const auto& r : reports) {
        all_consistent = all_consistent && r.consistent;
        all_optimal = all_optimal && r.status == wnn::SolveStatus::optimal;
    }
    if (a.json_rows) {
        json rows = json::array();
        for (const auto& r : reports) rows.push_back(report_json(r, a.timing));
        std::cout << rows.dump() << '\n';
    } else if (!a.io.output.empty() && a.io.output != "-") {
        json summary = json::array();
        for (std::size_t m = 0; m < methods.size(); ++m) {
            double size = 0, err = 0;
            for (std::size_t k = 0; k < jobs.size(); ++k) {
                if (jobs[k].method != m) continue;
                size += static_cast<double>(reports[k].size);
                err += reports[k].test_error;
            }
            const double reps = static_cast<double>(a.reps);
            summary.push_back({{"method", wnn::to_string(methods[m])},
                               {"mean_size", size / reps},
                               {"mean_test_error", err / reps}});
        }
        std::cout << json{{"rows", reports.size()}, {"summary", summary}}.dump() << '\n';
    }
    if (!all_consistent) return assertion;
    return all_optimal ? ok : budget;
}

// searchbench --------------------------------------------------------------

struct BenchArgs {
    Common io;
    std::string weight_column = "weight";
    double eps = 0.1;
    std::size_t queries = 1000;
    double wmin = 1, wmax = 1;
    std::size_t uniform = 0;
    std::size_t dim = 3;
};

int run_searchbench(const BenchArgs& a) {
    if (!(a.eps > 0 && a.eps < 1)) throw CLI::ValidationError("--eps", "must lie in (0, 1)");
    if (!(a.wmin > 0 && a.wmax >= a.wmin)) throw CLI::ValidationError("--wmin/--wmax", "need 0 < wmin <= wmax");
    if (a.queries == 0) throw CLI::ValidationError("--queries", "must be positive");
    wnn::Rng rng(a.io.seed);

    std::vector<double> coords, weights;
    std::size_t dim = 0;
    if (a.uniform > 0) {
        if (!a.io.input.empty()) throw CLI::ValidationError("--uniform", "cannot be combined with --input");
        dim = a.dim;
        for (std::size_t i = 0; i < a.uniform * dim; ++i) coords.push_back(rng.uniform());
    } else {
        if (a.io.input.empty()) throw CLI::ValidationError("--input", "need --input or --uniform");
        std::ifstream in(a.io.input);
        if (!in) wnn::internal::fail(wnn::ErrorKind::io, "cannot open '" + a.io.input + "' for reading");
        auto table = wnn::read_csv_table(in);
        auto wcol = table.column(a.weight_column);
        wnn::CsvOptions opt;
        opt.label_column = a.io.label_column;
        opt.metric = metric_of(a.io.metric);
        opt.ignore_columns = {a.weight_column};
        if (!table.column(opt.label_column)) {
            // Unlabeled point sets are fine here; give every row label 0.
            table.header.push_back(opt.label_column);
            for (auto& row : table.rows) row.push_back("0");
        }
        auto ds = wnn::dataset_from_table(table, opt);
        dim = ds.dimension();
        coords = ds.coords();
        if (wcol) {
            for (std::size_t r = 0; r < table.rows.size(); ++r) {
                auto w = wnn::internal::parse_double(table.rows[r][*wcol]);
                if (!w || !(*w > 0)) {
                    wnn::internal::fail(wnn::ErrorKind::data, "row " + std::to_string(table.line_numbers[r]) +
                                                                  ": weight must be positive");
                }
                weights.push_back(*w);
            }
        }
    }
    const std::size_t n = coords.size() / dim;
    if (weights.empty()) {
        for (std::size_t i = 0; i < n; ++i) weights.push_back(a.wmin == a.wmax ? a.wmin : rng.uniform(a.wmin, a.wmax));
    }

    std::vector<double> lo(dim, INFINITY), hi(dim, -INFINITY);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t d = 0; d < dim; ++d) {
            lo[d] = std::min(lo[d], coords[i * dim + d]);
            hi[d] = std::max(hi[d], coords[i * dim + d]);
        }
    }

    const auto metric = metric_of(a.io.metric);
    auto net = [&] {
        try {
            return wnn::NavigatingNet(coords, dim, weights, metric);
        } catch (const wnn::Error& e) {
            if (e.kind() == wnn::ErrorKind::invalid_argument) wnn::internal::fail(wnn::ErrorKind::data, e.what());
            throw;
        }
    }();

    const double bound = 1 + 8 * a.eps;
    double max_ratio = 1, sum_ratio = 0, sum_nodes = 0;
    std::size_t max_nodes = 0, max_list = 0, violations = 0;
    wnn::Point q(dim);
    for (std::size_t k = 0; k < a.queries; ++k) {
        for (std::size_t d = 0; d < dim; ++d) {
            const double pad = 0.1 * (hi[d] - lo[d]) + (hi[d] == lo[d] ? 1.0 : 0.0);
            q[d] = rng.uniform(lo[d] - pad, hi[d] + pad);
        }
        auto approx = net.query(q, a.eps);
        auto exact = wnn::brute_force_wnn(coords, dim, weights, q, metric);
        double ratio = 1;
        if (exact.wdist > 0) {
            ratio = approx.wdist / exact.wdist;
        } else if (approx.wdist > 0) {
            ratio = INFINITY;
        }
        if (ratio > bound) ++violations;
        max_ratio = std::max(max_ratio, ratio);
        sum_ratio += ratio;
        sum_nodes += static_cast<double>(approx.nodes_visited);
        max_nodes = std::max(max_nodes, approx.nodes_visited);
        max_list = std::max(max_list, approx.max_list);
    }
    const double nq = static_cast<double>(a.queries);
    json j{{"points", n},
           {"dimension", dim},
           {"eps", a.eps},
           {"queries", a.queries},
           {"top_level", net.top_level()},
           {"net_nodes", net.nodes().size()},
           {"max_ratio", max_ratio},
           {"mean_ratio", sum_ratio / nq},
           {"bound", bound},
           {"violations", violations},
           {"mean_nodes_visited", sum_nodes / nq},
           {"max_nodes_visited", max_nodes},
           {"max_list", max_list},
           {"brute_force_nodes", n}};
    std::cout << j.dump() << '\n';
    return violations == 0 ? ok : assertion;
}

// compress -----------------------------------------------------------------

struct CompressArgs {
    Common io;
    std::string method = "greedy_wnn";
    std::string code;
    std::uint64_t node_budget = wnn::default_node_budget;
};

int run_encode(const CompressArgs& a) {
    auto method = wnn::parse_method(a.method);
    if (!method || (*method != wnn::Method::greedy_wnn && *method != wnn::Method::exact_wnn)) {
        throw CLI::ValidationError("--method", "must be greedy_wnn or exact_wnn");
    }
    auto ds = load(a.io);
    auto outcome = wnn::condense(ds, *method, a.io.seed, a.node_budget);
    auto code = wnn::encode(ds, outcome.condensed);

    auto h = wnn::reconstruct(code);
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        mismatches += h.classify(ds.point(i)) != wnn::classify(ds.point(i), outcome.condensed);
    }
    std::ostringstream out;
    wnn::write_code_csv(code, out);
    write_text(a.code, out.str());
    json j{{"method", wnn::to_string(*method)},
           {"train_size", ds.size()},
           {"prototypes", code.prototypes.size()},
           {"witnesses", code.witnesses.size()},
           {"code_size", code.size()},
           {"status", wnn::to_string(outcome.status)},
           {"roundtrip_mismatches", mismatches}};
    if (!a.code.empty() && a.code != "-") std::cout << j.dump() << '\n';
    if (mismatches > 0) return assertion;
    return outcome.status == wnn::SolveStatus::optimal ? ok : budget;
}

int run_decode(const CompressArgs& a) {
    std::ifstream in(a.code);
    if (!in) wnn::internal::fail(wnn::ErrorKind::io, "cannot open '" + a.code + "' for reading");
    auto code = wnn::read_code_csv(in, metric_of(a.io.metric));
    if (code.prototypes.empty()) wnn::internal::fail(wnn::ErrorKind::data, "compression code has no prototypes");
    auto h = [&] {
        try {
            return wnn::reconstruct(code);
        } catch (const wnn::Error& e) {
            wnn::internal::fail(wnn::ErrorKind::data, e.what());
        }
    }();
    auto ds = load(a.io);
    if (ds.dimension() != h.dimension()) wnn::internal::fail(wnn::ErrorKind::data, "input dimension differs from code");

    std::ostringstream out;
    for (std::size_t d = 0; d < ds.dimension(); ++d) out << 'x' << d << ',';
    out << "label,predicted\n";
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto p = h.classify(ds.point(i));
        wrong += p != ds.label(i);
        for (double v : ds.point(i)) out << wnn::internal::format_double(v) << ',';
        out << ds.label(i) << ',' << p << '\n';
    }
    write_text(a.io.output, out.str());
    json j{{"points", ds.size()},
           {"errors", wrong},
           {"error_rate", static_cast<double>(wrong) / static_cast<double>(ds.size())}};
    if (!a.io.output.empty() && a.io.output != "-") std::cout << j.dump() << '\n';
    return ok;
}

// export-lp / bound --------------------------------------------------------

int run_export_lp(const Common& c) {
    auto ds = load(c);
    std::ostringstream out;
    wnn::write_lp(wnn::build_nn_ip(ds), out);
    write_text(c.output, out.str());
    return ok;
}

struct BoundArgs {
    std::size_t n = 0;
    std::size_t m = 0;
    double delta = 0.05;
};

int run_bound(const BoundArgs& a) {
    json j{{"n", a.n},
           {"m", a.m},
           {"delta", a.delta},
           {"bound", wnn::generalization_bound(a.n, a.m, a.delta, false)},
           {"permutation_invariant_bound", wnn::generalization_bound(a.n, a.m, a.delta, true)}};
    std::cout << j.dump() << '\n';
    return ok;
}

void add_io(CLI::App* cmd, Common& c, bool input_required = true) {
    auto* in = cmd->add_option("-i,--input", c.input, "Input CSV (header x0,...,label)");
    if (input_required) in->required();
    cmd->add_option("-o,--output", c.output, "Output path ('-' or omitted for stdout)");
    cmd->add_option("--label-column", c.label_column, "Name of the label column")->capture_default_str();
    cmd->add_option("--metric", c.metric, "euclidean, manhattan or chebyshev")->capture_default_str();
    cmd->add_option("--seed", c.seed, "Random seed")->capture_default_str();
}

}

int main(int argc, char** argv) {
    CLI::App app{"Weighted nearest-neighbor condensing tools"};
    app.require_subcommand(1);

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic dataset as CSV");
    gen_cmd->add_option("--family", gen.family, "two-lines, bc-friendly, circle, blobs or sine")->required();
    gen_cmd->add_option("--n", gen.spec.n, "Number of points")->capture_default_str();
    gen_cmd->add_option("--seed", gen.spec.seed, "Random seed")->capture_default_str();
    gen_cmd->add_option("--gamma", gen.spec.gamma, "Size parameter of two-lines and bc-friendly")->capture_default_str();
    gen_cmd->add_option("--classes", gen.spec.classes, "Number of blobs")->capture_default_str();
    gen_cmd->add_option("--spread", gen.spec.spread, "Blob standard deviation")->capture_default_str();
    gen_cmd->add_option("--inner-radius", gen.spec.circle.inner_radius)->capture_default_str();
    gen_cmd->add_option("--outer-min", gen.spec.circle.outer_min)->capture_default_str();
    gen_cmd->add_option("--outer-max", gen.spec.circle.outer_max)->capture_default_str();
    gen_cmd->add_option("-o,--output", gen.output, "Output CSV path");

    CondenseArgs cond;
    auto* cond_cmd = app.add_subcommand("condense", "Condense a dataset; writes CSV with weights, JSON to stdout");
    add_io(cond_cmd, cond.io);
    cond_cmd->add_option("-m,--method", cond.method, "none, greedy_wnn, hart_cnn, mss, rss, exact_nn, exact_wnn")
        ->capture_default_str();
    cond_cmd->add_option("--node-budget", cond.node_budget, "Branch-and-bound node budget")->capture_default_str();

    EvalArgs ev;
    auto* eval_cmd = app.add_subcommand("eval", "Repeated train/test evaluation of several methods");
    add_io(eval_cmd, ev.io);
    eval_cmd->add_option("--methods", ev.methods, "Comma-separated method list")->capture_default_str();
    eval_cmd->add_option("--reps", ev.reps, "Number of random splits")->capture_default_str();
    eval_cmd->add_option("--split", ev.split, "Training fraction")->capture_default_str();
    eval_cmd->add_option("--threads", ev.threads, "Worker threads")->capture_default_str();
    eval_cmd->add_option("--node-budget", ev.node_budget, "Branch-and-bound node budget")->capture_default_str();
    eval_cmd->add_flag("--timing", ev.timing, "Add a wall_ms column");
    eval_cmd->add_flag("--json", ev.json_rows, "Print every row as JSON on stdout");

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("searchbench", "Navigating-net queries against brute force");
    add_io(bench_cmd, bench.io, false);
    bench_cmd->add_option("--eps", bench.eps, "Approximation parameter in (0, 1)")->capture_default_str();
    bench_cmd->add_option("--queries", bench.queries, "Number of random queries")->capture_default_str();
    bench_cmd->add_option("--weight-column", bench.weight_column, "Column holding point weights")
        ->capture_default_str();
    bench_cmd->add_option("--wmin", bench.wmin, "Lower end of random weights")->capture_default_str();
    bench_cmd->add_option("--wmax", bench.wmax, "Upper end of random weights")->capture_default_str();
    bench_cmd->add_option("--uniform", bench.uniform, "Use this many uniform points in the unit cube");
    bench_cmd->add_option("--dim", bench.dim, "Dimension for --uniform")->capture_default_str();

    CompressArgs comp;
    auto* comp_cmd = app.add_subcommand("compress", "Sample-compression codec");
    comp_cmd->require_subcommand(1);
    auto* enc_cmd = comp_cmd->add_subcommand("encode", "Condense and write the compression code");
    add_io(enc_cmd, comp.io);
    enc_cmd->add_option("-m,--method", comp.method, "greedy_wnn or exact_wnn")->capture_default_str();
    enc_cmd->add_option("--code", comp.code, "Code CSV output path");
    enc_cmd->add_option("--node-budget", comp.node_budget)->capture_default_str();
    auto* dec_cmd = comp_cmd->add_subcommand("decode", "Rebuild the classifier from a code and label a CSV");
    add_io(dec_cmd, comp.io);
    dec_cmd->add_option("--code", comp.code, "Code CSV input path")->required();

    Common lp;
    auto* lp_cmd = app.add_subcommand("export-lp", "Write the condensing integer program in LP format");
    add_io(lp_cmd, lp);

    BoundArgs bound;
    auto* bound_cmd = app.add_subcommand("bound", "Compression-based generalization bound");
    bound_cmd->add_option("--n", bound.n, "Sample size")->required();
    bound_cmd->add_option("--m", bound.m, "Condensed size")->required();
    bound_cmd->add_option("--delta", bound.delta, "Confidence parameter")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    try {
        if (*gen_cmd) return run_gen(gen);
        if (*cond_cmd) return run_condense(cond);
        if (*eval_cmd) return run_eval(ev);
        if (*bench_cmd) return run_searchbench(bench);
        if (*enc_cmd) return run_encode(comp);
        if (*dec_cmd) return run_decode(comp);
        if (*lp_cmd) return run_export_lp(lp);
        if (*bound_cmd) return run_bound(bound);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n' << app.help();
        return usage;
    } catch (const wnn::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        switch (e.kind()) {
            case wnn::ErrorKind::invalid_argument: return usage;
            case wnn::ErrorKind::io: return io;
            case wnn::ErrorKind::data: return data;
            case wnn::ErrorKind::assertion: return assertion;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return assertion;
    }
    return usage;
}
