#include "peakmdp/core.hpp"

#include <deque>
#include <set>
#include <string>

namespace peakmdp {

MdpModel::MdpModel(std::size_t num_states, const std::vector<std::vector<StateId>>& successors,
                   std::vector<RewardSpec> rewards, double gamma)
    : num_states_(num_states), rewards_(std::move(rewards)), gamma_(gamma) {
    if (successors.size() != num_states) {
        throw std::invalid_argument("successor lists do not match the state count");
    }
    offsets_.reserve(num_states + 1);
    offsets_.push_back(0);
    std::vector<std::size_t> in_degree(num_states, 0);
    for (const auto& row : successors) {
        for (StateId t : row) {
            if (t.value >= num_states) {
                throw std::out_of_range("successor state " + std::to_string(t.value) + " out of range");
            }
            targets_.push_back(t);
            ++in_degree[t.value];
        }
        offsets_.push_back(targets_.size());
    }

    reverse_offsets_.assign(num_states + 1, 0);
    for (std::size_t s = 0; s < num_states; ++s) {
        reverse_offsets_[s + 1] = reverse_offsets_[s] + in_degree[s];
    }
    sources_.resize(targets_.size());
    std::vector<std::size_t> fill(reverse_offsets_.begin(), reverse_offsets_.end() - 1);
    for (std::size_t s = 0; s < num_states; ++s) {
        for (std::size_t e = offsets_[s]; e < offsets_[s + 1]; ++e) {
            sources_[fill[targets_[e].value]++] = StateId{s};
        }
    }

    reward_of_state_.assign(num_states, std::nullopt);
    for (RewardIndex i = 0; i < rewards_.size(); ++i) {
        const auto s = rewards_[i].state.value;
        if (s >= num_states) {
            throw std::out_of_range("reward '" + rewards_[i].id + "' placed outside the state space");
        }
        if (!reward_of_state_[s]) reward_of_state_[s] = i;
    }
}

std::span<const StateId> MdpModel::successors(StateId s) const {
    return {targets_.data() + offsets_[s.value], offsets_[s.value + 1] - offsets_[s.value]};
}

StateId MdpModel::successor(StateId s, ActionId a) const {
    auto row = successors(s);
    if (a.value >= row.size()) throw std::out_of_range("action index out of range");
    return row[a.value];
}

std::span<const StateId> MdpModel::predecessors(StateId s) const {
    return {sources_.data() + reverse_offsets_[s.value],
            reverse_offsets_[s.value + 1] - reverse_offsets_[s.value]};
}

std::optional<RewardIndex> MdpModel::reward_at(StateId s) const { return reward_of_state_[s.value]; }

double MdpModel::reward_value(StateId s) const {
    auto r = reward_of_state_[s.value];
    return r ? rewards_[*r].value : 0.0;
}

MdpModel grid_to_model(const GridScenario& scenario) {
    const std::size_t w = scenario.width;
    const std::size_t h = scenario.height;
    std::vector<std::vector<StateId>> successors(w * h);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            auto& row = successors[y * w + x];
            // Up, Down, Left, Right; y grows upward.
            if (y + 1 < h) row.push_back(scenario.state_at(x, y + 1));
            if (y > 0) row.push_back(scenario.state_at(x, y - 1));
            if (x > 0) row.push_back(scenario.state_at(x - 1, y));
            if (x + 1 < w) row.push_back(scenario.state_at(x + 1, y));
        }
    }
    std::vector<RewardSpec> rewards;
    rewards.reserve(scenario.rewards.size());
    for (const auto& r : scenario.rewards) {
        rewards.push_back({r.id, scenario.state_at(r.x, r.y), r.value});
    }
    return MdpModel(w * h, successors, std::move(rewards), scenario.gamma);
}

MdpModel graph_to_model(const GraphScenario& scenario) {
    std::vector<std::vector<StateId>> successors(scenario.num_states);
    for (const auto& e : scenario.edges) {
        if (e.from >= scenario.num_states) throw std::out_of_range("edge source out of range");
        successors[e.from].push_back(StateId{e.to});
    }
    std::vector<RewardSpec> rewards;
    for (const auto& r : scenario.rewards) rewards.push_back({r.id, StateId{r.state}, r.value});
    return MdpModel(scenario.num_states, successors, std::move(rewards), scenario.gamma);
}

MdpModel to_model(const Scenario& scenario) {
    return std::visit(
        [](const auto& s) {
            if constexpr (std::is_same_v<std::decay_t<decltype(s)>, GridScenario>) {
                return grid_to_model(s);
            } else {
                return graph_to_model(s);
            }
        },
        scenario);
}

std::string_view violation_name(ViolationCode code) {
    switch (code) {
        case ViolationCode::EmptyModel: return "EMPTY_MODEL";
        case ViolationCode::NoActions: return "NO_ACTIONS";
        case ViolationCode::NotStronglyConnected: return "NOT_STRONGLY_CONNECTED";
        case ViolationCode::NoRewards: return "NO_REWARDS";
        case ViolationCode::NonpositiveReward: return "NONPOSITIVE_REWARD";
        case ViolationCode::DuplicateRewardState: return "DUPLICATE_REWARD_STATE";
        case ViolationCode::DuplicateRewardId: return "DUPLICATE_REWARD_ID";
        case ViolationCode::GammaOutOfRange: return "GAMMA_OUT_OF_RANGE";
    }
    return "UNKNOWN";
}

namespace {

template <typename Neighbors>
std::size_t count_reachable(std::size_t n, Neighbors neighbors) {
    std::vector<bool> seen(n, false);
    std::deque<std::size_t> queue{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!queue.empty()) {
        auto s = queue.front();
        queue.pop_front();
        for (StateId t : neighbors(StateId{s})) {
            if (!seen[t.value]) {
                seen[t.value] = true;
                ++count;
                queue.push_back(t.value);
            }
        }
    }
    return count;
}

}  // namespace

ValidationReport validate_model(const MdpModel& model) {
    ValidationReport report;
    auto add = [&](ViolationCode code, std::string msg) {
        report.violations.push_back({code, std::move(msg)});
    };

    const std::size_t n = model.num_states();
    if (n == 0) {
        add(ViolationCode::EmptyModel, "model has no states");
    } else {
        std::size_t without_actions = 0;
        for (std::size_t s = 0; s < n; ++s) {
            if (model.num_actions(StateId{s}) == 0) ++without_actions;
        }
        if (without_actions > 0) {
            add(ViolationCode::NoActions, std::to_string(without_actions) + " state(s) have no actions");
        }
        auto forward = count_reachable(n, [&](StateId s) { return model.successors(s); });
        auto backward = count_reachable(n, [&](StateId s) { return model.predecessors(s); });
        if (forward != n || backward != n) {
            add(ViolationCode::NotStronglyConnected,
                "state 0 reaches " + std::to_string(forward) + " and is reached from " +
                    std::to_string(backward) + " of " + std::to_string(n) + " states");
        }
    }

    if (model.rewards().empty()) add(ViolationCode::NoRewards, "model has no rewards");
    std::set<std::size_t> states;
    std::set<std::string> ids;
    for (const auto& r : model.rewards()) {
        if (!(r.value > 0.0)) {
            add(ViolationCode::NonpositiveReward, "reward '" + r.id + "' has value " + std::to_string(r.value));
        }
        if (!states.insert(r.state.value).second) {
            add(ViolationCode::DuplicateRewardState,
                "more than one reward at state " + std::to_string(r.state.value));
        }
        if (!ids.insert(r.id).second) add(ViolationCode::DuplicateRewardId, "reward id '" + r.id + "' repeated");
    }

    const double g = model.gamma();
    if (!(g > 0.0 && g < 1.0)) add(ViolationCode::GammaOutOfRange, "gamma must lie in (0,1)");

    report.ok = report.violations.empty();
    return report;
}

}  // namespace peakmdp
