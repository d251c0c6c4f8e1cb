#include "faco/worker_pool.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <stdexcept>
#include <vector>

using faco::WorkerPool;

TEST(WorkerPool, RunsEveryIndexOnce) {
    for (const std::size_t workers : {1u, 2u, 4u, 8u}) {
        WorkerPool pool(workers);
        EXPECT_EQ(pool.size(), workers);
        for (int round = 0; round < 20; ++round) {
            std::vector<std::atomic<int>> hits(257);
            pool.for_each(hits.size(), [&](std::size_t w, std::size_t i) {
                ASSERT_LT(w, workers);
                hits[i].fetch_add(1);
            });
            for (const auto &h : hits) ASSERT_EQ(h.load(), 1);
        }
    }
}

TEST(WorkerPool, ZeroWorkersMeansOne) {
    WorkerPool pool(0);
    EXPECT_EQ(pool.size(), 1u);
    int sum = 0;
    pool.for_each(10, [&](std::size_t, std::size_t i) { sum += static_cast<int>(i); });
    EXPECT_EQ(sum, 45);
}

TEST(WorkerPool, EmptyBatch) {
    WorkerPool pool(4);
    bool called = false;
    pool.for_each(0, [&](std::size_t, std::size_t) { called = true; });
    EXPECT_FALSE(called);
}

TEST(WorkerPool, PropagatesExceptions) {
    WorkerPool pool(4);
    EXPECT_THROW(pool.for_each(100,
                               [](std::size_t, std::size_t i) {
                                   if (i == 37) throw std::runtime_error("boom");
                               }),
                 std::runtime_error);
    std::atomic<int> count{0};
    pool.for_each(50, [&](std::size_t, std::size_t) { count.fetch_add(1); });
    EXPECT_EQ(count.load(), 50);
}
