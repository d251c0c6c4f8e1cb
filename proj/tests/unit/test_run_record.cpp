#include "run_record.hpp"

#include "random_instances.hpp"

#include <gtest/gtest.h>

using namespace faco;
using namespace faco::cli;

namespace {

RunSummary summary(Cost best, std::optional<double> err, double seconds) {
    RunSummary s;
    s.stats.best_cost = best;
    s.stats.relative_error = err;
    s.stats.total_seconds = seconds;
    return s;
}

}  // namespace

TEST(Aggregate, MeanOfRuns) {
    const auto agg = aggregate({summary(100, 1.0, 2.0), summary(104, 5.0, 4.0), summary(102, 3.0, 3.0)});
    EXPECT_EQ(agg.runs, 3u);
    EXPECT_EQ(agg.best_cost, 100);
    EXPECT_EQ(agg.worst_cost, 104);
    EXPECT_DOUBLE_EQ(agg.mean_cost, 102.0);
    ASSERT_TRUE(agg.mean_error.has_value());
    EXPECT_DOUBLE_EQ(*agg.mean_error, 3.0);
    EXPECT_DOUBLE_EQ(*agg.best_error, 1.0);
    EXPECT_DOUBLE_EQ(*agg.worst_error, 5.0);
    EXPECT_DOUBLE_EQ(agg.mean_seconds, 3.0);
}

TEST(Aggregate, ErrorsNullWithoutBestKnown) {
    const auto agg = aggregate({summary(100, std::nullopt, 1.0), summary(90, 2.0, 1.0)});
    EXPECT_FALSE(agg.mean_error.has_value());
    EXPECT_FALSE(agg.best_error.has_value());
    EXPECT_FALSE(agg.worst_error.has_value());
    EXPECT_EQ(agg.best_cost, 90);
}

TEST(RunRecord, FieldsAndAggregateConsistency) {
    auto inst = test_support::random_instance(60, 2);
    inst.set_best_known(1);
    FacoParams p;
    p.ants = 8;
    p.iterations = 5;
    p.cl_size = 8;
    p.bl_size = 16;
    p.seed = 10;
    std::vector<RunSummary> runs;
    for (std::uint64_t r = 0; r < 3; ++r) {
        FacoParams q = p;
        q.seed = p.seed + r;
        runs.push_back({q.seed, faco::run(inst, q).stats});
    }
    const auto rec = run_record(inst, p, runs, true);
    EXPECT_EQ(rec["instance"], inst.name());
    EXPECT_EQ(rec["n"], 60);
    EXPECT_EQ(rec["seed"], 10);
    EXPECT_EQ(rec["params"]["ants"], 8);
    EXPECT_EQ(rec["params"]["min_new_edges"], 8);
    ASSERT_EQ(rec["runs"].size(), 3u);
    double sum = 0;
    for (std::size_t r = 0; r < 3; ++r) {
        const auto &entry = rec["runs"][r];
        EXPECT_EQ(entry["seed"], 10 + r);
        EXPECT_EQ(entry["trace"].size(), 5u);
        sum += entry["relative_error"].get<double>();
    }
    EXPECT_NEAR(rec["aggregate"]["mean_error"].get<double>(), sum / 3, 1e-9);
    EXPECT_EQ(rec["aggregate"]["runs"], 3);
}
