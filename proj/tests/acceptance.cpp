// Acceptance gate: one PASS/FAIL line per criterion. Exit status is the number
// of failed criteria.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "wnn/wnn.hpp"

namespace fs = std::filesystem;
using namespace wnn;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(double v) {
    std::ostringstream s;
    s << v;
    return s.str();
}

double euclid(std::span<const double> a, std::span<const double> b) {
    double s = 0;
    for (std::size_t d = 0; d < a.size(); ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
    return std::sqrt(s);
}

Dataset random_two_class(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<LabeledPoint> pts;
    for (std::size_t i = 0; i < n; ++i) {
        pts.push_back({{rng.uniform(), rng.uniform()}, static_cast<Label>(rng.below(2))});
    }
    pts[0].label = 0;
    pts[1].label = 1;
    return Dataset(pts);
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2;
}

// 1 ------------------------------------------------------------------------

Outcome two_lines_separation() {
    Outcome o;
    for (int gamma : {2, 4, 8, 16}) {
        auto ds = gen_two_lines(gamma);
        const auto nn = exact_nn_condense(ds);
        const auto g = greedy_wnn(ds).condensed.size();
        o.detail += "gamma=" + std::to_string(gamma) + ": exact_nn=" + std::to_string(nn.condensed.size()) +
                    " greedy=" + std::to_string(g) + "; ";
        o.pass = o.pass && nn.status == SolveStatus::optimal && nn.condensed.size() == 2 &&
                 g == static_cast<std::size_t>(2 * gamma);
    }
    return o;
}

// 2 ------------------------------------------------------------------------

Outcome ball_friendly_separation() {
    Outcome o;
    for (int gamma : {3, 5, 7}) {
        auto ds = gen_bc_friendly(gamma);
        const auto g = greedy_wnn(ds).condensed.size();
        const auto w = exact_wnn_condense(ds);
        const auto nn = exact_nn_condense(ds);
        o.detail += "gamma=" + std::to_string(gamma) + ": greedy=" + std::to_string(g) +
                    " exact_wnn=" + std::to_string(w.condensed.size()) +
                    " exact_nn=" + std::to_string(nn.condensed.size()) + " (n=" + std::to_string(ds.size()) + "); ";
        o.pass = o.pass && g == 2 && w.condensed.size() == 2 && w.status == SolveStatus::optimal &&
                 nn.status == SolveStatus::optimal && nn.condensed.size() >= ds.size() - 2;
    }
    return o;
}

// 3 ------------------------------------------------------------------------

std::size_t enumerate_nn(const Dataset& ds) {
    const std::size_t n = ds.size();
    std::size_t best = n;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        const auto size = static_cast<std::size_t>(__builtin_popcount(mask));
        if (size >= best) continue;
        bool ok = true;
        for (std::size_t x = 0; x < n && ok; ++x) {
            double own = INFINITY, enemy = INFINITY;
            for (std::size_t y = 0; y < n; ++y) {
                if (!(mask >> y & 1u)) continue;
                const double d = euclid(ds.point(x), ds.point(y));
                (ds.label(y) == ds.label(x) ? own : enemy) = std::min(ds.label(y) == ds.label(x) ? own : enemy, d);
            }
            ok = own < enemy;
        }
        if (ok) best = size;
    }
    return best;
}

std::size_t enumerate_cover(const Dataset& ds) {
    const std::size_t n = ds.size();
    std::vector<double> radius(n, INFINITY);
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            if (ds.label(x) != ds.label(y)) radius[x] = std::min(radius[x], euclid(ds.point(x), ds.point(y)));
        }
    }
    std::size_t best = n;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        const auto size = static_cast<std::size_t>(__builtin_popcount(mask));
        if (size >= best) continue;
        bool ok = true;
        for (std::size_t x = 0; x < n && ok; ++x) {
            bool covered = false;
            for (std::size_t c = 0; c < n && !covered; ++c) {
                covered = (mask >> c & 1u) && euclid(ds.point(x), ds.point(c)) < radius[c];
            }
            ok = covered;
        }
        if (ok) best = size;
    }
    return best;
}

Outcome set_cover_sandwich() {
    Outcome o;
    Rng sizes(17);
    std::size_t violations = 0, largest = 0;
    for (std::uint64_t k = 0; k < 50; ++k) {
        const std::size_t n = 8 + sizes.below(7);
        largest = std::max(largest, n);
        auto ds = random_two_class(n, 40'000 + k);
        const auto nn = exact_nn_condense(ds);
        const auto w = exact_wnn_condense(ds);
        const double g = static_cast<double>(greedy_wnn(ds).condensed.size());
        const double ew = static_cast<double>(w.condensed.size());
        bool ok = nn.status == SolveStatus::optimal && w.status == SolveStatus::optimal;
        ok = ok && nn.condensed.size() == enumerate_nn(ds) && w.condensed.size() == enumerate_cover(ds);
        ok = ok && ew <= g && g <= (std::log(static_cast<double>(n)) + 1) * ew;
        violations += !ok;
    }
    o.pass = violations == 0;
    o.detail = "50 datasets, n up to " + std::to_string(largest) + ", violations=" + std::to_string(violations);
    return o;
}

// 4 ------------------------------------------------------------------------

Outcome navnet_guarantee() {
    Outcome o;
    Rng rng(2718);
    const std::size_t n = 500, dim = 3;
    std::vector<double> coords, weights;
    for (std::size_t i = 0; i < n * dim; ++i) coords.push_back(rng.uniform());
    for (std::size_t i = 0; i < n; ++i) weights.push_back(rng.uniform(0.5, 2));
    NavigatingNet net(coords, dim, weights);
    std::size_t violations = 0;
    for (double eps : {0.05, 0.1, 0.5}) {
        double worst = 1;
        for (int k = 0; k < 1000; ++k) {
            Point q{rng.uniform(), rng.uniform(), rng.uniform()};
            const auto a = net.query(q, eps);
            const auto b = brute_force_wnn(coords, dim, weights, q);
            violations += a.wdist > (1 + 8 * eps) * b.wdist;
            worst = std::max(worst, a.wdist / b.wdist);
        }
        o.detail += "eps=" + fmt(eps) + " worst ratio " + fmt(worst) + "; ";
    }
    o.pass = violations == 0;
    o.detail += "violations=" + std::to_string(violations);
    return o;
}

// 5 ------------------------------------------------------------------------

Outcome compression_round_trip() {
    Outcome o;
    Rng rng(314);
    std::size_t violations = 0;
    for (std::uint64_t k = 0; k < 100; ++k) {
        auto ds = random_two_class(20 + rng.below(60), 50'000 + k);
        const auto radii = enemy_radii(ds);
        // Alternate greedy outputs with random covers built in a shuffled order.
        WeightedCondensedSet c = greedy_wnn(ds).condensed;
        if (k % 2) {
            std::vector<bool> covered(ds.size(), false);
            std::vector<std::size_t> idx;
            std::vector<double> w;
            for (auto p : rng.permutation(ds.size())) {
                bool useful = false;
                for (std::size_t x = 0; x < ds.size(); ++x) {
                    if (!covered[x] && ds.label(x) == ds.label(p) && ds.distance(x, p) < radii[p]) {
                        covered[x] = useful = true;
                    }
                }
                if (useful) {
                    idx.push_back(p);
                    w.push_back(radii[p]);
                }
            }
            c = WeightedCondensedSet(ds, idx, w);
        }
        const auto code = encode(ds, c);
        const auto h = reconstruct(code);
        bool ok = h.size() == c.size();
        for (std::size_t j = 0; j < h.size() && ok; ++j) {
            for (std::size_t i = 0; i < ds.size(); ++i) {
                if (std::equal(ds.point(i).begin(), ds.point(i).end(), h.point(j).begin())) {
                    ok = h.weight(j) == radii[i];
                }
            }
        }
        auto shuffled = code;
        rng.shuffle(shuffled.prototypes);
        rng.shuffle(shuffled.witnesses);
        const auto h2 = reconstruct(shuffled);
        for (std::size_t i = 0; i < ds.size() && ok; ++i) {
            const auto p = h.classify(ds.point(i));
            ok = p == classify(ds.point(i), c) && p == h2.classify(ds.point(i));
        }
        violations += !ok;
    }
    o.pass = violations == 0;
    o.detail = "100 pairs, violations=" + std::to_string(violations);
    return o;
}

// 6 ------------------------------------------------------------------------

Outcome circle_table() {
    Outcome o;
    std::vector<double> nn, g, m, r;
    bool all_optimal = true;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto ds = gen_circle(200, seed);
        auto e = exact_nn_condense(ds);
        all_optimal = all_optimal && e.status == SolveStatus::optimal;
        nn.push_back(static_cast<double>(e.condensed.size()));
        g.push_back(static_cast<double>(greedy_wnn(ds).condensed.size()));
        m.push_back(static_cast<double>(mss(ds).size()));
        r.push_back(static_cast<double>(rss(ds).size()));
    }
    const double mn = median(nn), mg = median(g), mm = median(m), mr = median(r);
    o.pass = all_optimal && mn <= mg && mg < mr && mg < mm && mn >= 4 && mn <= 11 && mg >= 6 && mg <= 18;
    o.detail = "medians exact_nn=" + fmt(mn) + " greedy_wnn=" + fmt(mg) + " mss=" + fmt(mm) + " rss=" + fmt(mr) +
               (all_optimal ? "" : " (some exact runs hit the budget)");
    return o;
}

// 7 ------------------------------------------------------------------------

Outcome consistency_trend() {
    Outcome o;
    double err_small = 0, err_large = 0, size_small = 0, size_large = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto test = gen_sine(2000, 90'000 + seed);
        for (std::size_t n : {100u, 1000u}) {
            auto train = gen_sine(n, 10'000 * n + seed);
            auto c = greedy_wnn(train).condensed;
            std::size_t wrong = 0;
            for (std::size_t i = 0; i < test.size(); ++i) wrong += classify(test.point(i), c) != test.label(i);
            const double err = static_cast<double>(wrong) / static_cast<double>(test.size());
            (n == 100 ? err_small : err_large) += err / 10;
            (n == 100 ? size_small : size_large) += static_cast<double>(c.size()) / 10;
        }
    }
    o.pass = err_large <= 0.5 * err_small && size_large < 5 * size_small;
    o.detail = "mean error n=100 " + fmt(err_small) + ", n=1000 " + fmt(err_large) + "; mean size n=100 " +
               fmt(size_small) + ", n=1000 " + fmt(size_large);
    return o;
}

// 8 ------------------------------------------------------------------------

Outcome bound_calculator() {
    Outcome o;
    // (2/90) (10 ln 200 + ln 2000), worked out by hand.
    const double expected = 1.3463128027782767;
    const double got = generalization_bound(100, 10, 0.05, false);
    const double rel = std::abs(got - expected) / expected;
    std::size_t bad = 0, points = 0;
    for (std::size_t n : {10u, 30u, 100u, 300u, 1000u, 10000u, 1000000u}) {
        for (std::size_t m = 3; m < n; m = m < 50 ? m + 1 : m * 2) {
            for (double delta : {0.001, 0.01, 0.05, 0.1, 0.5, 0.9}) {
                ++points;
                bad += generalization_bound(n, m, delta, true) > generalization_bound(n, m, delta, false);
            }
        }
    }
    o.pass = rel <= 1e-9 && bad == 0;
    o.detail = "value " + fmt(got) + " (rel err " + fmt(rel) + "), " + std::to_string(points) + " grid points, " +
               std::to_string(bad) + " violations";
    return o;
}

// 9 ------------------------------------------------------------------------

int run_cli(const std::string& args, const fs::path& stdout_file) {
    const std::string cmd =
        std::string(WNN_CLI_PATH) + " " + args + " > \"" + stdout_file.string() + "\" 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome cli_determinism() {
    Outcome o;
    const fs::path dir = fs::temp_directory_path() / "wnn_acceptance_cli";
    fs::remove_all(dir);
    fs::create_directories(dir);
    auto p = [&](const std::string& name) { return (dir / name).string(); };

    std::vector<std::string> mismatched;
    int failures = 0;
    auto twice = [&](const std::string& label, const std::function<std::string(int)>& args,
                     const std::vector<std::string>& outputs) {
        for (int run = 0; run < 2; ++run) {
            failures += run_cli(args(run), dir / ("stdout" + std::to_string(run))) != 0;
        }
        for (const auto& out : outputs) {
            if (slurp(dir / (out + "0")) != slurp(dir / (out + "1")) || slurp(dir / (out + "0")).empty()) {
                mismatched.push_back(label + ":" + out);
            }
        }
    };
    auto tag = [](int run) { return std::to_string(run); };

    twice("gen", [&](int r) { return "gen --family circle --n 200 --seed 7 -o " + p("data" + tag(r)); }, {"data"});
    twice("condense",
          [&](int r) { return "condense -i " + p("data0") + " -m exact_nn -o " + p("cond" + tag(r)); },
          {"cond", "stdout"});
    twice("eval", [&](int r) {
        return "eval -i " + p("data0") + " --methods greedy_wnn,hart_cnn,mss,rss,exact_nn --reps 6 --seed 3 --threads " +
               std::to_string(r == 0 ? 1 : 4) + " -o " + p("report" + tag(r));
    }, {"report", "stdout"});
    twice("searchbench", [&](int r) {
        (void)r;
        return std::string("searchbench --uniform 300 --dim 3 --wmin 0.5 --wmax 2 --eps 0.2 --queries 200 --seed 4");
    }, {"stdout"});
    twice("compress", [&](int r) { return "compress encode -i " + p("data0") + " --code " + p("code" + tag(r)); },
          {"code", "stdout"});

    o.pass = failures == 0 && mismatched.empty();
    o.detail = "5 commands x 2 runs (eval with 1 and 4 threads), nonzero exits=" + std::to_string(failures) +
               ", differing outputs=" + std::to_string(mismatched.size());
    for (const auto& m : mismatched) o.detail += " " + m;
    fs::remove_all(dir);
    return o;
}

struct Criterion {
    int id;
    const char* name;
    double limit_s;
    Outcome (*check)();
};

}

int main() {
    const std::vector<Criterion> criteria{
        {1, "two-lines separation, NN side", 10, two_lines_separation},
        {2, "ball-friendly separation, BC side", 60, ball_friendly_separation},
        {3, "set-cover optimality sandwich", 300, set_cover_sandwich},
        {4, "navigating-net (1+8eps) guarantee", 60, navnet_guarantee},
        {5, "compression round trip", 1e9, compression_round_trip},
        {6, "circle condensing sizes", 600, circle_table},
        {7, "consistency trend on a smooth boundary", 300, consistency_trend},
        {8, "generalization bound calculator", 1e9, bound_calculator},
        {9, "CLI determinism", 1e9, cli_determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs < c.limit_s;
        const bool pass = o.pass && in_time;
        failed += !pass;
        std::ostringstream line;
        line << (pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << ": " << o.detail << " ("
             << std::fixed;
        line.precision(2);
        line << secs << " s";
        if (c.limit_s < 1e8) line << ", limit " << c.limit_s << " s";
        if (!in_time) line << ", TOO SLOW";
        line << ")";
        std::cout << line.str() << std::endl;
    }
    std::cout << (failed == 0 ? "ALL CRITERIA PASSED" : std::to_string(failed) + " CRITERIA FAILED") << std::endl;
    return failed;
}
