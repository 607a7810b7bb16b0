#include <gtest/gtest.h>

#include <sstream>

#include "test_support.hpp"
#include "wnn/compression.hpp"
#include "wnn/condense.hpp"
#include "wnn/harness.hpp"

using namespace wnn;

namespace {

// Scans points in random order and keeps each one whose nearest-enemy ball
// reaches a point not yet covered. The result is consistent but far from minimal.
WeightedCondensedSet random_cover(const Dataset& ds, Rng& rng) {
    const auto radii = enemy_radii(ds);
    std::vector<bool> covered(ds.size(), false);
    std::vector<std::size_t> idx;
    std::vector<double> w;
    for (auto c : rng.permutation(ds.size())) {
        bool useful = false;
        for (std::size_t x = 0; x < ds.size(); ++x) {
            if (!covered[x] && ds.label(x) == ds.label(c) && ds.distance(x, c) < radii[c]) {
                covered[x] = true;
                useful = true;
            }
        }
        if (useful) {
            idx.push_back(c);
            w.push_back(radii[c]);
        }
    }
    return WeightedCondensedSet(ds, std::move(idx), std::move(w));
}

}

TEST(Compression, BallFriendlyCode) {
    auto ds = gen_bc_friendly(5);
    auto g = greedy_wnn(ds).condensed;
    auto code = encode(ds, g);
    EXPECT_EQ(code.prototypes.size(), 2u);
    EXPECT_LE(code.witnesses.size(), code.prototypes.size());
    EXPECT_EQ(code.size(), code.prototypes.size() + code.witnesses.size());
    auto h = reconstruct(code);
    for (std::size_t i = 0; i < ds.size(); ++i) EXPECT_EQ(h.classify(ds.point(i)), ds.label(i));
}

TEST(Compression, WitnessesAreNearestEnemies) {
    auto ds = gen_two_lines(3);
    auto code = encode(ds, greedy_wnn(ds).condensed);
    EXPECT_EQ(code.prototypes.size(), 6u);
    // Each red's nearest enemy is the blue directly below it, and vice versa.
    EXPECT_EQ(code.witnesses.size(), 6u);
}

TEST(Compression, RejectsNonEnemyWeights) {
    auto ds = gen_two_lines(3);
    WeightedCondensedSet c(ds, {0, 3}, {1.0, 2.0});
    EXPECT_THROW(encode(ds, c), Error);
}

TEST(Compression, SingleClassRoundTrip) {
    Dataset ds({{{0, 0}, 4}, {{2, 0}, 4}});
    auto code = encode(ds, greedy_wnn(ds).condensed);
    EXPECT_TRUE(code.witnesses.empty());
    auto h = reconstruct(code);
    EXPECT_TRUE(std::isinf(h.weight(0)));
    EXPECT_EQ(h.classify(Point{9, 9}), 4);
}

TEST(Compression, MissingWitnessIsRejected) {
    CompressionCode code;
    code.prototypes = {{{0, 0}, 0}, {{1, 0}, 1}};
    EXPECT_THROW(reconstruct(code), Error);
}

TEST(Compression, RandomRoundTripsAndShuffles) {
    Rng rng(99);
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        auto ds = test::random_dataset(20 + rng.below(40), 3000 + trial, 2 + static_cast<int>(trial % 3));
        // Either a greedy output or a random cover.
        WeightedCondensedSet c = trial % 2 == 0 ? greedy_wnn(ds).condensed : random_cover(ds, rng);
        ASSERT_TRUE(consistency_check(ds, c).consistent);
        auto code = encode(ds, c);
        ASSERT_LE(code.witnesses.size(), code.prototypes.size());
        auto h = reconstruct(code);
        ASSERT_EQ(h.size(), c.size());
        for (std::size_t k = 0; k < h.size(); ++k) {
            // Find the sample index of this prototype and compare with d_enemy.
            std::size_t found = ds.size();
            for (std::size_t i = 0; i < ds.size(); ++i) {
                if (std::equal(ds.point(i).begin(), ds.point(i).end(), h.point(k).begin())) found = i;
            }
            ASSERT_LT(found, ds.size());
            ASSERT_EQ(h.weight(k), *nearest_enemy_distance(ds, found));
        }
        for (std::size_t i = 0; i < ds.size(); ++i) {
            ASSERT_EQ(h.classify(ds.point(i)), classify(ds.point(i), c)) << trial << " " << i;
        }
        auto shuffled = code;
        rng.shuffle(shuffled.prototypes);
        rng.shuffle(shuffled.witnesses);
        auto h2 = reconstruct(shuffled);
        for (std::size_t i = 0; i < ds.size(); ++i) {
            ASSERT_EQ(h2.classify(ds.point(i)), h.classify(ds.point(i)));
        }
        for (int q = 0; q < 50; ++q) {
            Point p{rng.uniform(), rng.uniform()};
            ASSERT_EQ(h2.classify(p), h.classify(p));
        }
    }
}

TEST(Compression, CsvRoundTrip) {
    auto ds = gen_circle(60, 4);
    auto code = encode(ds, greedy_wnn(ds).condensed);
    std::stringstream buf;
    write_code_csv(code, buf);
    auto back = read_code_csv(buf);
    ASSERT_EQ(back.prototypes.size(), code.prototypes.size());
    ASSERT_EQ(back.witnesses.size(), code.witnesses.size());
    for (std::size_t k = 0; k < code.prototypes.size(); ++k) {
        EXPECT_EQ(back.prototypes[k].point, code.prototypes[k].point);
        EXPECT_EQ(back.prototypes[k].label, code.prototypes[k].label);
    }
}

TEST(Compression, CsvErrors) {
    std::istringstream no_role("x0,label\n1,0\n");
    EXPECT_THROW(read_code_csv(no_role), Error);
    std::istringstream bad_role("x0,label,role\n1,0,prototype\n2,1,referee\n");
    try {
        read_code_csv(bad_role);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::data);
        EXPECT_NE(std::string(e.what()).find('3'), std::string::npos);
    }
}
