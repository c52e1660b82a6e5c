#include "peakmdp/dist.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace peakmdp {

namespace {
constexpr HopCount kUnreached = std::numeric_limits<HopCount>::max();
}

RewardDistanceTable::RewardDistanceTable(std::size_t size, std::vector<HopCount> entries)
    : size_(size), entries_(std::move(entries)) {
    if (entries_.size() != size_ * size_) throw std::invalid_argument("distance table is not square");
}

DistanceField distance_to(const MdpModel& model, StateId target) {
    const std::size_t n = model.num_states();
    DistanceField field{target, std::vector<HopCount>(n, kUnreached)};
    std::vector<StateId> frontier;
    frontier.reserve(n);
    field.dist[target.value] = 0;
    frontier.push_back(target);
    for (std::size_t head = 0; head < frontier.size(); ++head) {
        const StateId s = frontier[head];
        const HopCount next = field.dist[s.value] + 1;
        for (StateId p : model.predecessors(s)) {
            if (field.dist[p.value] == kUnreached) {
                field.dist[p.value] = next;
                frontier.push_back(p);
            }
        }
    }
    if (frontier.size() != n) {
        throw std::logic_error("internal inconsistency: " + std::to_string(n - frontier.size()) +
                               " state(s) cannot reach state " + std::to_string(target.value));
    }
    return field;
}

HopCount min_cycle_length(const MdpModel& model, StateId s, const DistanceField& field) {
    if (field.target != s) throw std::invalid_argument("distance field does not target the queried state");
    HopCount best = kUnreached;
    for (StateId t : model.successors(s)) best = std::min<HopCount>(best, 1 + field[t]);
    if (best == kUnreached) throw std::logic_error("state without actions has no cycle");
    return best;
}

std::vector<DistanceField> reward_distance_fields(const MdpModel& model) {
    std::vector<DistanceField> fields;
    fields.reserve(model.rewards().size());
    for (const auto& r : model.rewards()) fields.push_back(distance_to(model, r.state));
    return fields;
}

RewardDistanceTable reward_distance_table(const MdpModel& model, std::span<const DistanceField> fields) {
    const auto& rewards = model.rewards();
    if (fields.size() != rewards.size()) throw std::invalid_argument("need one distance field per reward");
    const std::size_t k = rewards.size();
    std::vector<HopCount> entries(k * k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            entries[i * k + j] = i == j ? min_cycle_length(model, rewards[i].state, fields[i])
                                        : fields[j][rewards[i].state];
        }
    }
    return RewardDistanceTable(k, std::move(entries));
}

}  // namespace peakmdp
