#include "faco/local_search.hpp"

#include "oracles.hpp"
#include "random_instances.hpp"

#include <gtest/gtest.h>

using namespace faco;

namespace {

TspInstance square() {
    return test_support::make_instance({{0, 0}, {10, 0}, {10, 10}, {0, 10}});
}

}  // namespace

TEST(Checklist, FifoWithoutDuplicates) {
    Checklist cl(10);
    cl.push(3);
    cl.push(5);
    cl.push(3);
    cl.push(1);
    EXPECT_EQ(cl.size(), 3u);
    EXPECT_EQ(cl.pop(), 3);
    cl.push(3);
    EXPECT_EQ(cl.pop(), 5);
    EXPECT_EQ(cl.pop(), 1);
    EXPECT_EQ(cl.pop(), 3);
    EXPECT_TRUE(cl.empty());
}

TEST(TwoOptChecklist, UncrossesSquare) {
    const auto inst = square();
    const auto lists = build_neighbor_lists(inst, 3, 0);
    Route r({0, 2, 1, 3});
    Checklist cl(4);
    cl.push(0);
    const auto res = two_opt_checklist(r, cl, lists, inst);
    EXPECT_EQ(res.changes, 1u);
    EXPECT_EQ(tour_length(inst, r), 40);
    EXPECT_EQ(res.gain, 8);
}

TEST(TwoOptChecklist, EmptyChecklistLeavesRouteUntouched) {
    const auto inst = test_support::random_instance(50, 1);
    const auto lists = build_neighbor_lists(inst, 8, 8);
    Rng rng(1);
    Route r(test_support::random_order(50, rng));
    const auto before = test_support::as_vector(r.order());
    Checklist cl(50);
    const auto res = two_opt_checklist(r, cl, lists, inst);
    EXPECT_EQ(res.changes, 0u);
    EXPECT_EQ(res.gain, 0);
    EXPECT_EQ(test_support::as_vector(r.order()), before);
}

TEST(TwoOptChecklist, GainArithmetic) {
    // Two vertical sides of length 10 joined by diagonals of length 11; the
    // best move from node 0 swaps both diagonals for the width-5 sides.
    const auto inst = test_support::make_instance({{0, 0}, {0, 10}, {5, 0}, {5, 10}});
    const auto lists = build_neighbor_lists(inst, 3, 0);
    Route r({0, 1, 2, 3});
    EXPECT_EQ(tour_length(inst, r), 42);
    Checklist cl(4);
    cl.push(0);
    const auto res = two_opt_checklist(r, cl, lists, inst);
    EXPECT_EQ(res.gain, 12);
    EXPECT_EQ(res.changes, 1u);
    EXPECT_EQ(tour_length(inst, r), 30);
}

TEST(TwoOptChecklist, MonotoneAndGainsAreExact) {
    Rng rng(42);
    std::size_t cases = 0;
    for (int trial = 0; trial < 1000; ++trial, ++cases) {
        const std::size_t n = 10 + rng.below(140);
        const auto inst = test_support::random_instance(n, 7000 + static_cast<std::uint64_t>(trial));
        const auto [cl_size, bl_size] = test_support::list_sizes(n, 8, 8);
        const auto lists = build_neighbor_lists(inst, cl_size, bl_size);
        Route r(test_support::random_order(n, rng));
        Checklist cl(n);
        const std::size_t seeds = 1 + rng.below(n);
        for (std::size_t k = 0; k < seeds; ++k) cl.push(static_cast<NodeId>(rng.below(n)));
        Cost length = oracles::cycle_length(inst, r.order());
        const Cost start = length;
        bool exact = true;
        const auto res = two_opt_checklist(r, cl, lists, inst, TwoOptOptions{}, [&](Cost gain) {
            const Cost now = oracles::cycle_length(inst, r.order());
            exact = exact && gain > 0 && now == length - gain;
            length = now;
        });
        ASSERT_TRUE(exact) << "trial " << trial;
        ASSERT_TRUE(oracles::is_permutation(r.order(), n));
        ASSERT_EQ(oracles::cycle_length(inst, r.order()), start - res.gain);
        ASSERT_LE(res.changes, n);
    }
    EXPECT_GE(cases, 1000u);
}

TEST(TwoOptChecklist, ChangeCapIsHonored) {
    const auto inst = test_support::random_instance(200, 3);
    const auto lists = build_neighbor_lists(inst, 10, 10);
    Rng rng(3);
    Route r(test_support::random_order(200, rng));
    Checklist cl(200);
    for (NodeId u = 0; u < 200; ++u) cl.push(u);
    TwoOptOptions opts;
    opts.max_changes = 5;
    EXPECT_EQ(two_opt_checklist(r, cl, lists, inst, opts).changes, 5u);
    Checklist again(200);
    for (NodeId u = 0; u < 200; ++u) again.push(u);
    EXPECT_LE(two_opt_checklist(r, again, lists, inst).changes, 200u);
}

TEST(NearestNeighborTour, GreedyOnLine) {
    const auto inst = test_support::make_instance({{0, 0}, {1, 0}, {2, 0}, {3, 0}});
    const auto lists = build_neighbor_lists(inst, 1, 1);
    const auto r = nearest_neighbor_tour(inst, lists, 0);
    EXPECT_EQ(test_support::as_vector(r.order()), (std::vector<NodeId>{0, 1, 2, 3}));
}

TEST(NearestNeighborTour, ValidAndNotBelowOptimum) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const std::size_t n = 4 + seed % 7;
        const auto inst = test_support::random_instance(n, seed);
        const auto lists = build_neighbor_lists(inst, std::min<std::size_t>(3, n - 1), 0);
        const auto r = nearest_neighbor_tour(inst, lists, static_cast<NodeId>(seed % n));
        ASSERT_TRUE(oracles::is_permutation(r.order(), n));
        ASSERT_GE(tour_length(inst, r), oracles::held_karp_optimum(inst));
    }
    const auto big = test_support::random_instance(400, 1);
    const auto lists = build_neighbor_lists(big, 5, 5);
    EXPECT_TRUE(oracles::is_permutation(nearest_neighbor_tour(big, lists, 17).order(), 400));
}

TEST(ImproveInitial, UncrossesSquare) {
    const auto inst = square();
    const auto lists = build_neighbor_lists(inst, 3, 0);
    const auto r = improve_initial(Route({0, 2, 1, 3}), lists, inst);
    EXPECT_EQ(tour_length(inst, r), 40);
}

TEST(ImproveInitial, NeverWorseThanNearestNeighbor) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto inst = test_support::random_instance(100, seed);
        const auto lists = build_neighbor_lists(inst, 16, 64);
        const auto nn = nearest_neighbor_tour(inst, lists, 0);
        const auto better = improve_initial(nn, lists, inst);
        ASSERT_TRUE(oracles::is_permutation(better.order(), 100));
        ASSERT_LE(tour_length(inst, better), tour_length(inst, nn));
    }
}

TEST(ImproveInitial, FixedPointOfTwoOptIsKept) {
    const auto inst = test_support::make_instance({{0, 0}, {2, 0}, {4, 0}, {4, 2}, {2, 2}, {0, 2}});
    const auto lists = build_neighbor_lists(inst, 5, 0);
    const Route perimeter({0, 1, 2, 3, 4, 5});
    const auto r = improve_initial(perimeter, lists, inst);
    EXPECT_EQ(tour_length(inst, r), tour_length(inst, perimeter));
}

TEST(ThreeOpt, MovesAreExactAndMonotone) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const std::size_t n = 8 + seed * 7;
        const auto inst = test_support::random_instance(n, 300 + seed);
        const auto [cl, bl] = test_support::list_sizes(n, 8, 8);
        const auto lists = build_neighbor_lists(inst, cl, bl);
        Rng rng(seed);
        Route r(test_support::random_order(n, rng));
        Cost length = oracles::cycle_length(inst, r.order());
        bool exact = true;
        three_opt(r, lists, inst, cl + bl, [&](Cost gain) {
            const Cost now = oracles::cycle_length(inst, r.order());
            exact = exact && gain > 0 && now == length - gain;
            length = now;
        });
        ASSERT_TRUE(exact) << "seed " << seed;
        ASSERT_TRUE(oracles::is_permutation(r.order(), n));
    }
}
