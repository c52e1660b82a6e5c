#pragma once

#include "peakmdp/core.hpp"
#include "peakmdp/peaks.hpp"

#include <string_view>
#include <vector>

namespace peakmdp {

struct DominanceResult {
    StateId state;
    PeakId dominant = 0;
    /// Propagated value of the dominant peak at the query state.
    double value = 0.0;
    /// Every cycle peak the query state can end up at under tied choices, ascending.
    std::vector<PeakId> co_dominant;

    bool is_co_dominant() const { return co_dominant.size() > 1; }
};

/**
 * Cycle peak that the optimal hill climb from s ends at.
 *
 * Achievable mode follows the event chain (first reward collected, then the
 * best_next pointers) and reports every cycle peak reachable through tied
 * choices. Literal mode compares the closed-form peak values directly and
 * picks the largest cycle peak; it reproduces hand-worked examples but can
 * misjudge states whose best route detours through a delta reward.
 */
DominanceResult dominant_peak(const PeakSet& peakset, StateId s,
                              PropagationMode mode = PropagationMode::Achievable);

/// The cycle peak with the largest propagated value at s, ignoring deltas.
DominanceResult max_rule_peak(const PeakSet& peakset, StateId s,
                              PropagationMode mode = PropagationMode::Achievable);

struct DominanceMap {
    std::vector<PeakId> dominant;
    std::vector<bool> co_dominant;
    PropagationMode mode = PropagationMode::Achievable;
};

DominanceMap region_map(const PeakSet& peakset, PropagationMode mode = PropagationMode::Achievable);

enum class CollectionCount { Once, Infinite };
enum class CollectionMethod { Theorem4, EventChain };

std::string_view count_name(CollectionCount count);
std::string_view method_name(CollectionMethod method);

struct CollectionEntry {
    RewardIndex reward = 0;
    CollectionCount count = CollectionCount::Once;

    friend bool operator==(const CollectionEntry&, const CollectionEntry&) = default;
};

struct CollectionReport {
    StateId state;
    /// Event chain: collection order. Delta rule: dominant members, then deltas by value.
    std::vector<CollectionEntry> entries;
    PeakId dominant = 0;
    CollectionMethod method = CollectionMethod::EventChain;
    /// Number of once-collected (delta) rewards in the report.
    std::size_t delta_events() const;
};

/// Same rewards with the same counts, irrespective of order.
bool same_collection(const CollectionReport& a, const CollectionReport& b);

/// Dominant peak members (infinite) plus every delta peak worth more than the
/// dominant peak at s (once).
CollectionReport collected_rewards_rule(const PeakSet& peakset, StateId s);

/// Rewards collected in order along the optimal path: the best first reward,
/// then best_next pointers into the terminal cycle.
CollectionReport event_chain(const PeakSet& peakset, StateId s);

struct Contribution {
    PeakId peak = 0;
    double value = 0.0;
    double difference = 0.0;
    double ratio = 0.0;
};

struct ContributionReport {
    StateId state;
    double total = 0.0;
    /// Sorted by value, descending.
    std::vector<Contribution> entries;
};

ContributionReport relative_contributions(const PeakSet& peakset, StateId s);

struct PathEvent {
    std::size_t step = 0;
    RewardIndex reward = 0;
};

struct PathTrace {
    /// Greedy trajectory, ending one full cycle after the first repeated state.
    std::vector<StateId> states;
    std::size_t cycle_start = 0;
    std::size_t cycle_length = 0;
    /// Last strict improvement of the running maximum before the first repeat.
    std::size_t k_max = 0;
    std::vector<PathEvent> events;

    std::span<const StateId> k_plus() const { return {states.data(), k_max + 1}; }
    std::span<const StateId> cycle() const { return {states.data() + cycle_start, cycle_length}; }
};

ActionId policy_action(const MdpModel& model, const PeakSet& peakset, StateId s);

PathTrace optimal_path(const MdpModel& model, const PeakSet& peakset, StateId s);

}  // namespace peakmdp
