#pragma once

#include "peakmdp/core.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace peakmdp {

using HopCount = std::uint32_t;

/// Shortest number of actions from every state to a fixed target state.
struct DistanceField {
    StateId target;
    std::vector<HopCount> dist;

    HopCount operator[](StateId s) const { return dist[s.value]; }
};

/**
 * Hop distances between reward states, with the minimum cycle length of each
 * reward state on the diagonal: entry (i, j) is the fewest actions needed to
 * go from reward i to reward j taking at least one step.
 */
class RewardDistanceTable {
public:
    RewardDistanceTable() = default;
    RewardDistanceTable(std::size_t size, std::vector<HopCount> entries);

    std::size_t size() const { return size_; }
    HopCount at(std::size_t from, std::size_t to) const { return entries_[from * size_ + to]; }

    friend bool operator==(const RewardDistanceTable&, const RewardDistanceTable&) = default;

private:
    std::size_t size_ = 0;
    std::vector<HopCount> entries_;
};

/// Reverse breadth-first search from target. Throws std::logic_error if some
/// state cannot reach the target (the model was not validated).
DistanceField distance_to(const MdpModel& model, StateId target);

/// Length of the shortest cycle through s; `field` must be the field for s.
HopCount min_cycle_length(const MdpModel& model, StateId s, const DistanceField& field);

/// One field per reward, in reward order.
std::vector<DistanceField> reward_distance_fields(const MdpModel& model);

RewardDistanceTable reward_distance_table(const MdpModel& model, std::span<const DistanceField> fields);

}  // namespace peakmdp
