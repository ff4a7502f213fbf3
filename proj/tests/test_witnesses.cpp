/*
Copyright 2026 The strongsched Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "strongsched/measures.hpp"
#include "strongsched/witnesses.hpp"

using namespace strongsched;

namespace {

std::vector<Rational> sorted(std::vector<Rational> v) {
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

TEST(Figure1, ShapeAndEquilibrium) {
    auto fig = figure1();
    EXPECT_EQ(fig.instance.machine_count(), 3U);
    EXPECT_TRUE(oracle::is_nash(fig.instance, fig.schedule));
    EXPECT_FALSE(oracle::profitable_targets(fig.instance, fig.schedule).empty());
    auto before = oracle::loads(fig.instance, fig.schedule);
    auto after = oracle::loads(fig.instance, fig.deviation->to);
    for (JobIndex j : fig.deviation->migrants) {
        EXPECT_EQ(before[fig.schedule[j]] / after[fig.deviation->to[j]], Rational(5, 4));
    }
}

TEST(Figure3, ValidatesAndStaysNash) {
    EXPECT_THROW(figure3(Rational(1)), ValidationError);
    EXPECT_THROW(figure3(Rational(2), 2), ValidationError);
    for (std::int64_t num = 11; num <= 60; num += 7) {
        auto fig = figure3(Rational(num, 10), 3 + static_cast<std::size_t>(num % 3));
        EXPECT_TRUE(oracle::is_nash(fig.instance, fig.schedule)) << num;
    }
}

TEST(Figure9, LptLoadsAndMigrantRatios) {
    auto fig = figure9();
    EXPECT_EQ(sorted(oracle::loads(fig.instance, fig.schedule)),
              sorted({Rational::parse("3.633"), Rational::parse("2.633"), Rational::parse("2.633")}));
    EXPECT_EQ(sorted(oracle::loads(fig.instance, fig.deviation->to)),
              sorted({Rational::parse("2.367"), Rational::parse("3.266"), Rational::parse("3.266")}));
    auto before = oracle::loads(fig.instance, fig.schedule);
    auto after = oracle::loads(fig.instance, fig.deviation->to);
    for (JobIndex j : fig.deviation->migrants) {
        double ratio = (before[fig.schedule[j]] / after[fig.deviation->to[j]]).to_double();
        EXPECT_NEAR(ratio, 1.11237, 1e-3);
    }
    EXPECT_TRUE(oracle::is_nash(fig.instance, fig.schedule));
}

TEST(Footnote5, SwapImprovesBothByInverseEps) {
    auto fn = footnote5(Rational(1, 10));
    EXPECT_TRUE(oracle::is_nash(fn.instance, fn.schedule));
    EXPECT_EQ(ir_min(fn.instance, fn.schedule).value, Rational(10));
    EXPECT_THROW(footnote5(Rational(1)), ValidationError);
    EXPECT_THROW(footnote5(Rational(0)), ValidationError);
}

TEST(ListSchedulingExamples, TrappedJobRatio) {
    auto ex = ls_examples(Rational(10), Rational(1, 10));
    EXPECT_EQ(oracle::loads(ex.trapped_instance, ex.trapped_schedule), (std::vector<Rational>{11, 1}));
    EXPECT_EQ(ex.trapped_ratio, Rational(11, 2));
    auto l = oracle::loads(ex.trapped_instance, ex.trapped_schedule);
    const JobIndex j = ex.trapped_move.job;
    EXPECT_EQ(ex.trapped_instance.time(j), Rational(1));
    EXPECT_EQ(l[ex.trapped_schedule[j]] / (l[ex.trapped_move.target] + Rational(1)), Rational(11, 2));
    EXPECT_THROW(ls_examples(Rational(1), Rational(1, 10)), ValidationError);
    EXPECT_THROW(ls_examples(Rational(10), Rational(1, 2)), ValidationError);
}

TEST(ListSchedulingExamples, DamageGrowsWithX) {
    Rational previous(1);
    for (std::int64_t x : {4, 10, 40}) {
        auto ex = ls_examples(Rational(x), Rational(1, 10));
        std::vector<JobIndex> order{0, 1, 2, 3, 4, 5, 6};
        EXPECT_EQ(ex.damage_schedule, oracle::list_schedule(ex.damage_instance, order));
        auto dr = oracle::measures(ex.damage_instance, ex.damage_schedule).dr_max;
        EXPECT_GE(dr, previous);
        previous = dr;
    }
    EXPECT_GT(previous, Rational(1));
}

TEST(PartitionOracle, KnownSets) {
    std::vector<std::int64_t> a{3, 3, 4, 4};
    auto half = partition_oracle(a);
    ASSERT_TRUE(half.has_value());
    std::int64_t sum = 0;
    for (auto k : *half) sum += a[k];
    EXPECT_EQ(sum, 7);
    std::vector<std::int64_t> b{3, 3, 3, 5}, c{1};
    EXPECT_FALSE(partition_oracle(b).has_value());
    EXPECT_FALSE(partition_oracle(c).has_value());
}

TEST(PartitionOracle, MatchesSubsetEnumeration) {
    std::mt19937_64 rng(103);
    for (int t = 0; t < 500; ++t) {
        std::vector<std::int64_t> a;
        for (int k = 0; k < 1 + t % 9; ++k) a.push_back(1 + static_cast<std::int64_t>(rng() % 15));
        auto half = partition_oracle(a);
        EXPECT_EQ(half.has_value(), oracle::has_partition(a));
        if (half) {
            std::int64_t sum = 0, total = 0;
            for (auto k : *half) sum += a[k];
            for (auto v : a) total += v;
            EXPECT_EQ(2 * sum, total);
        }
    }
}

TEST(ReduceIdentical, PartitionYieldsPredictedDeviation) {
    std::vector<std::int64_t> a{3, 3, 4, 4};
    auto art = reduce_partition_identical(a);
    EXPECT_TRUE(oracle::is_nash(art.instance, art.start_schedule));
    EXPECT_EQ(art.expected_se, false);
    ASSERT_TRUE(art.predicted_deviation.has_value());
    EXPECT_EQ(sorted(oracle::loads(art.instance, art.predicted_deviation->to)),
              (std::vector<Rational>{10, 13, 13}));
    auto before = oracle::loads(art.instance, art.start_schedule);
    EXPECT_EQ(before, (std::vector<Rational>{14, 11, 11}));
    EXPECT_FALSE(is_strong(art.instance, art.start_schedule).holds);
}

TEST(ReduceIdentical, RejectsBadInput) {
    std::vector<std::int64_t> odd{3, 3, 3}, small{2, 4, 4, 4}, single{6};
    EXPECT_THROW(reduce_partition_identical(odd), ValidationError);
    EXPECT_THROW(reduce_partition_identical(small), ValidationError);
    EXPECT_THROW(reduce_partition_identical(single), ValidationError);
    std::vector<std::int64_t> ok{3, 3, 4, 4};
    EXPECT_THROW(reduce_partition_identical(ok, 2), ValidationError);
}

TEST(ReduceIdentical, ExtraMachinesKeepTheEquivalence) {
    for (std::vector<std::int64_t> a : {std::vector<std::int64_t>{3, 3, 4, 4}, std::vector<std::int64_t>{3, 3, 3, 5}}) {
        auto art = reduce_partition_identical(a, 4);
        EXPECT_EQ(art.instance.machine_count(), 4U);
        EXPECT_TRUE(oracle::is_nash(art.instance, art.start_schedule));
        EXPECT_EQ(is_strong(art.instance, art.start_schedule).holds, *art.expected_se);
    }
}

TEST(ReduceUnrelated, KnownSets) {
    std::vector<std::int64_t> a{3, 4, 5, 6, 6};
    auto art = reduce_partition_unrelated(a, Rational(1, 5));
    auto start = oracle::loads(art.instance, art.start_schedule);
    EXPECT_EQ(start, (std::vector<Rational>{25, 25}));
    EXPECT_TRUE(oracle::is_nash(art.instance, art.start_schedule));
    ASSERT_TRUE(art.predicted_deviation.has_value());
    EXPECT_EQ(sorted(oracle::loads(art.instance, art.predicted_deviation->to)),
              (std::vector<Rational>{Rational::parse("24.4"), Rational::parse("24.6")}));
    EXPECT_FALSE(is_strong(art.instance, art.start_schedule).holds);

    std::vector<std::int64_t> b{3, 4, 5};
    auto none = reduce_partition_unrelated(b, Rational(1, 3));
    EXPECT_EQ(none.expected_se, true);
    EXPECT_TRUE(oracle::profitable_targets(none.instance, none.start_schedule).empty());

    EXPECT_THROW(reduce_partition_unrelated(a, Rational(1, 4)), ValidationError);
    EXPECT_THROW(reduce_partition_unrelated(a, Rational(0)), ValidationError);
}

TEST(Reductions, AgreeWithBruteForceOnSmallSets) {
    std::mt19937_64 rng(107);
    for (int t = 0; t < 40; ++t) {
        std::vector<std::int64_t> a;
        for (int k = 0; k < 4; ++k) a.push_back(3 + static_cast<std::int64_t>(rng() % 5));
        std::int64_t total = 0;
        for (auto v : a) total += v;
        if (total % 2) a.back() += 1;
        const bool partition = oracle::has_partition(a);
        auto ident = reduce_partition_identical(a);
        EXPECT_EQ(oracle::profitable_targets(ident.instance, ident.start_schedule).empty(), !partition);
        auto unrel = reduce_partition_unrelated(a, Rational(1, 4));
        EXPECT_EQ(oracle::profitable_targets(unrel.instance, unrel.start_schedule).empty(), !partition);
    }
}

TEST(Extremal, FindsLargeLptMeasuresWithinTheBounds) {
    auto ir = search_extremal_lpt(3, ExtremalMeasure::ir_max, Rational::parse("1.55"));
    ASSERT_TRUE(ir.found);
    EXPECT_GE(ir.value, Rational::parse("1.55"));
    EXPECT_LE(ir.value, Rational(5, 3));
    EXPECT_EQ(oracle::measures(*ir.instance, ir.schedule).ir_max, ir.value);
    EXPECT_EQ(ir.schedule, oracle::lpt(*ir.instance));

    auto dr = search_extremal_lpt(3, ExtremalMeasure::dr_max, Rational::parse("1.40"));
    ASSERT_TRUE(dr.found);
    EXPECT_GE(dr.value, Rational::parse("1.40"));
    EXPECT_LT(dr.value, Rational(3, 2));
    EXPECT_EQ(oracle::measures(*dr.instance, dr.schedule).dr_max, dr.value);
}

TEST(Extremal, UnreachableTargetReturnsBestSeen) {
    ExtremalSearchOptions opt;
    opt.max_jobs = 5;
    auto r = search_extremal_lpt(3, ExtremalMeasure::dr_max, Rational(2), opt);
    EXPECT_FALSE(r.found);
    EXPECT_LT(r.value, Rational(3, 2));
    EXPECT_THROW(search_extremal_lpt(2, ExtremalMeasure::dr_max, Rational(2)), ValidationError);
}
