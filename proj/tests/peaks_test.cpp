#include "peakmdp/oracle.hpp"
#include "peakmdp/peaks.hpp"
#include "testing.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace peakmdp {
namespace {

using testing::corridor;
using testing::Instance;

// Frozen from tests/oracle_scripts/brute_force_values.py (tabular value iteration).
constexpr double kCorridorHeightA = 14.9852894736842;
constexpr double kCorridorHeightB = 26.3157894736842;
constexpr double kCorridorValueAt0 = 10.9242760263158;
constexpr double kDirectedRingTeam = 3.690036900369;

Instance corridor_ab() { return Instance(corridor(10, 0.9, {{"A", 3, 1.0}, {"B", 9, 5.0}})); }

TEST(SolveHeights, SingleRewardGeometricSeries) {
    Instance inst(corridor(5, 0.9, {{"A", 2, 1.0}}));
    const auto& h = inst.peaks.heights;
    ASSERT_EQ(h.heights.size(), 1u);
    EXPECT_NEAR(h.heights[0], 1.0 / (1.0 - 0.81), 1e-15);
    EXPECT_NEAR(h.heights[0], 5.2631578947368425, 1e-12);
    EXPECT_EQ(h.best_next[0], 0u);
}

TEST(SolveHeights, CorridorMatchesOracle) {
    auto inst = corridor_ab();
    const auto& h = inst.peaks.heights;
    EXPECT_NEAR(h.heights[1], 5.0 / (1.0 - 0.81), 1e-12);
    EXPECT_NEAR(h.heights[0], 1.0 + std::pow(0.9, 6) * h.heights[1], 1e-12);
    EXPECT_NEAR(h.heights[0], kCorridorHeightA, 1e-9);
    EXPECT_NEAR(h.heights[1], kCorridorHeightB, 1e-9);
    EXPECT_EQ(h.best_next[0], 1u);
    EXPECT_EQ(h.best_next[1], 1u);

    const auto vi = oracle::value_iteration(inst.model);
    EXPECT_NEAR(h.heights[0], vi.values[3], 1e-9);
    EXPECT_NEAR(h.heights[1], vi.values[9], 1e-9);
}

TEST(SolveHeights, EqualRewardsPickBetterOfSoloAndTeam) {
    // Undirected 6-ring: cycling alone (phi = 2) beats travelling 3 hops each way.
    auto ring = testing::graph(6, 0.9, {{0, 1}, {1, 0}, {1, 2}, {2, 1}, {2, 3}, {3, 2}, {3, 4}, {4, 3}, {4, 5}, {5, 4}, {5, 0}, {0, 5}},
                               {{"A", 0, 1.0}, {"B", 3, 1.0}});
    Instance solo(ring);
    const double g = 0.9;
    const double alone = 1.0 / (1.0 - g * g);
    const double team = (1.0 + std::pow(g, 3)) / (1.0 - std::pow(g, 6));
    EXPECT_GT(alone, team);
    EXPECT_NEAR(solo.peaks.heights.heights[0], alone, 1e-12);
    EXPECT_EQ(solo.peaks.heights.best_next[0], 0u);

    // Directed 6-ring: the only cycle through a reward is the whole ring, so teaming wins.
    Instance directed(testing::graph(6, 0.9, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}},
                                     {{"A", 0, 1.0}, {"B", 3, 1.0}}));
    EXPECT_NEAR(directed.peaks.heights.heights[0], team, 1e-12);
    EXPECT_NEAR(directed.peaks.heights.heights[1], kDirectedRingTeam, 1e-9);
    EXPECT_EQ(directed.peaks.heights.best_next[0], 1u);
    EXPECT_EQ(directed.peaks.heights.best_next[1], 0u);
}

TEST(SolveHeights, RejectsGammaOutOfRange) {
    auto model = grid_to_model(corridor(4, 1.0, {{"A", 0, 1.0}}));
    auto fields = reward_distance_fields(model);
    EXPECT_THROW(solve_heights(model, reward_distance_table(model, fields)), NonConvergenceError);
}

TEST(ClassifyPeaks, SingleCorridorAndPair) {
    Instance single(corridor(5, 0.9, {{"A", 2, 1.0}}));
    ASSERT_EQ(single.peaks.peaks.size(), 1u);
    EXPECT_EQ(single.peaks.peaks[0].kind, PeakKind::Baseline);
    EXPECT_EQ(single.peaks.peaks[0].cycle_length, HopCount{2});

    auto ab = corridor_ab();
    ASSERT_EQ(ab.peaks.peaks.size(), 2u);
    EXPECT_EQ(ab.peaks.peaks[0].kind, PeakKind::Delta);
    EXPECT_EQ(ab.peaks.peaks[0].parent, RewardIndex{1});
    EXPECT_FALSE(ab.peaks.peaks[0].cycle_length);
    EXPECT_EQ(ab.peaks.peaks[1].kind, PeakKind::Baseline);
    EXPECT_EQ(ab.peaks.peaks[1].members, std::vector<RewardIndex>{1});

    // Two large adjacent rewards: shuttling between them repeats both.
    GridScenario pair{5, 5, 0.9, {{"A", 2, 2, 1.0}, {"B", 3, 2, 1.0}}};
    Instance combined(pair);
    ASSERT_EQ(combined.peaks.peaks.size(), 1u);
    const auto& peak = combined.peaks.peaks[0];
    EXPECT_EQ(peak.kind, PeakKind::Combined);
    EXPECT_EQ(peak.members, (std::vector<RewardIndex>{0, 1}));
    EXPECT_EQ(peak.cycle_length, HopCount{2});
    EXPECT_NEAR(peak.anchors[0].height, 1.0 / (1.0 - 0.9), 1e-12);

    const auto traj = oracle::simulate(combined.model, oracle::value_iteration(combined.model), pair.state_at(0, 0), 100);
    EXPECT_EQ(traj.cycle.size(), 2u);
    EXPECT_GE(traj.counts[0], 2u);
    EXPECT_GE(traj.counts[1], 2u);
}

TEST(ClassifyPeaks, LongerCombinedCycle) {
    // Three rewards on a directed triangle with a slow self-loop elsewhere.
    Instance tri(testing::graph(4, 0.9, {{0, 1}, {1, 2}, {2, 0}, {0, 3}, {3, 0}},
                                {{"A", 0, 1.0}, {"B", 1, 1.0}, {"C", 2, 1.0}}));
    ASSERT_EQ(tri.peaks.peaks.size(), 1u);
    EXPECT_EQ(tri.peaks.peaks[0].kind, PeakKind::Combined);
    EXPECT_EQ(tri.peaks.peaks[0].members, (std::vector<RewardIndex>{0, 1, 2}));
    EXPECT_EQ(tri.peaks.peaks[0].cycle_length, HopCount{3});
    EXPECT_NEAR(tri.peaks.heights.heights[0], 1.0 / (1.0 - 0.9), 1e-12);
}

TEST(Propagate, BlueCurveOfBaseline) {
    // Baseline of height 3 at state 4 with gamma 0.9, evaluated two states away.
    Instance inst(corridor(10, 0.9, {{"B", 4, 3.0 * (1.0 - 0.81)}}));
    const auto& peak = inst.peaks.peaks[0];
    EXPECT_NEAR(propagate(inst.peaks, peak, StateId{2}), 2.43, 1e-12);
    EXPECT_NEAR(propagate(inst.peaks, peak, StateId{6}, PropagationMode::Literal), 2.43, 1e-12);
    EXPECT_DOUBLE_EQ(propagate(inst.peaks, peak, StateId{4}), peak.anchors[0].height);
}

TEST(Propagate, CombinedLiteralExceedsAchievableOffPath) {
    GridScenario pair{7, 1, 0.9, {{"A", 2, 0, 1.0}, {"B", 3, 0, 0.7}}};
    Instance inst(pair);
    ASSERT_EQ(inst.peaks.peaks.size(), 1u);
    const auto& peak = inst.peaks.peaks[0];
    ASSERT_EQ(peak.kind, PeakKind::Combined);
    for (std::size_t s = 0; s < inst.model.num_states(); ++s) {
        const double lit = propagate(inst.peaks, peak, StateId{s}, PropagationMode::Literal);
        const double ach = propagate(inst.peaks, peak, StateId{s});
        EXPECT_GE(lit + 1e-12, ach);
    }
    // At the anchors both modes agree: the literal sum equals the cycle series.
    for (const auto& a : peak.anchors) {
        EXPECT_NEAR(propagate(inst.peaks, peak, a.state, PropagationMode::Literal), a.height, 1e-12);
    }
}

TEST(ValueAt, CorridorAndClosedForm) {
    auto ab = corridor_ab();
    const double g = 0.9;
    const double expected = std::max(std::pow(g, 3) * ab.peaks.heights.heights[0], std::pow(g, 9) * ab.peaks.heights.heights[1]);
    EXPECT_DOUBLE_EQ(value_at(ab.peaks, StateId{0}), expected);
    EXPECT_NEAR(value_at(ab.peaks, StateId{0}), kCorridorValueAt0, 1e-9);
    EXPECT_DOUBLE_EQ(value_at(ab.peaks, StateId{9}), ab.peaks.heights.heights[1]);

    GridScenario grid{5, 5, 0.9, {{"A", 1, 3, 2.0}}};
    Instance single(grid);
    const auto vi = oracle::value_iteration(single.model);
    for (std::size_t y = 0; y < 5; ++y) {
        for (std::size_t x = 0; x < 5; ++x) {
            const auto d = std::abs(int(x) - 1) + std::abs(int(y) - 3);
            const double closed = std::pow(g, d) * 2.0 / (1.0 - g * g);
            const auto s = grid.state_at(x, y);
            EXPECT_NEAR(value_at(single.peaks, s), closed, 1e-12);
            EXPECT_NEAR(vi.values[s.value], closed, 1e-9);
        }
    }
}

// Fixed point, partition and oracle equivalence on random grids and graphs.
TEST(PeakProperties, RandomInstances) {
    std::mt19937_64 rng(1234);
    int checked = 0;
    for (int trial = 0; trial < 120; ++trial) {
        Scenario sc = trial % 3 == 0 ? Scenario{testing::random_graph(rng)} : Scenario{testing::random_grid(rng)};
        const auto model = to_model(sc);
        if (!validate_model(model).ok) continue;
        Instance inst(sc);
        const auto& set = inst.peaks;
        const auto& h = set.heights;
        ++checked;

        for (std::size_t i = 0; i < h.heights.size(); ++i) {
            const auto j = h.best_next[i];
            const double residual =
                h.heights[i] - set.rewards[i].value - discount(set.gamma, set.table.at(i, j)) * h.heights[j];
            EXPECT_LT(std::abs(residual), 1e-10);
            EXPECT_GE(h.heights[i], set.rewards[i].value);
        }

        std::vector<int> owners(set.rewards.size(), 0);
        for (const auto& peak : set.peaks) {
            for (auto m : peak.members) ++owners[m];
            if (peak.kind == PeakKind::Baseline) EXPECT_EQ(*peak.cycle_length, set.table.at(peak.members[0], peak.members[0]));
            if (peak.kind == PeakKind::Delta) {
                EXPECT_EQ(peak.anchors.size(), 1u);
                EXPECT_TRUE(peak.parent.has_value());
            }
        }
        for (int c : owners) EXPECT_EQ(c, 1);

        const auto vi = oracle::value_iteration(inst.model);
        for (std::size_t s = 0; s < inst.model.num_states(); ++s) {
            EXPECT_NEAR(value_at(set, StateId{s}), vi.values[s], 1e-8);
            for (const auto& peak : set.peaks) EXPECT_LE(propagate(set, peak, StateId{s}), vi.values[s] + 1e-9);
        }
    }
    EXPECT_GT(checked, 80);
}

}  // namespace
}  // namespace peakmdp
