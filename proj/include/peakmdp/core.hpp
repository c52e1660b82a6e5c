#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace peakmdp {

/// Dense index of a state in [0, num_states).
struct StateId {
    std::size_t value = 0;

    constexpr StateId() = default;
    constexpr explicit StateId(std::size_t v) : value(v) {}
    friend constexpr auto operator<=>(StateId, StateId) = default;
};

/// Index into the ordered action list of one state.
struct ActionId {
    std::size_t value = 0;

    constexpr ActionId() = default;
    constexpr explicit ActionId(std::size_t v) : value(v) {}
    friend constexpr auto operator<=>(ActionId, ActionId) = default;
};

/// Position of a reward in MdpModel::rewards().
using RewardIndex = std::size_t;

struct RewardSpec {
    std::string id;
    StateId state;
    double value = 0.0;

    friend bool operator==(const RewardSpec&, const RewardSpec&) = default;
};

/**
 * Deterministic transition system with state rewards and a discount factor.
 *
 * Successors are stored in compressed rows: the actions of state s are
 * numbered 0..k-1 in the order they were given. A reverse adjacency is built
 * once so that distance fields can be computed by backward search.
 *
 * The constructor checks only index ranges. Membership in the solvable class
 * (strong connectivity, positive rewards, ...) is reported by validate_model.
 */
class MdpModel {
public:
    MdpModel(std::size_t num_states, const std::vector<std::vector<StateId>>& successors,
             std::vector<RewardSpec> rewards, double gamma);

    std::size_t num_states() const { return num_states_; }
    double gamma() const { return gamma_; }
    const std::vector<RewardSpec>& rewards() const { return rewards_; }
    std::size_t num_edges() const { return targets_.size(); }

    /// Successor of every action at s, indexed by ActionId.
    std::span<const StateId> successors(StateId s) const;
    std::size_t num_actions(StateId s) const { return successors(s).size(); }
    StateId successor(StateId s, ActionId a) const;

    /// States with at least one action leading into s (with multiplicity).
    std::span<const StateId> predecessors(StateId s) const;

    /// Index of the reward collected at s, if any (first one when duplicated).
    std::optional<RewardIndex> reward_at(StateId s) const;

    /// Reward value collected on entering s; 0 when s carries no reward.
    double reward_value(StateId s) const;

private:
    std::size_t num_states_;
    std::vector<std::size_t> offsets_;
    std::vector<StateId> targets_;
    std::vector<std::size_t> reverse_offsets_;
    std::vector<StateId> sources_;
    std::vector<RewardSpec> rewards_;
    std::vector<std::optional<RewardIndex>> reward_of_state_;
    double gamma_;
};

struct GridReward {
    std::string id;
    std::size_t x = 0;
    std::size_t y = 0;
    double value = 0.0;

    friend bool operator==(const GridReward&, const GridReward&) = default;
};

struct GridScenario {
    std::size_t width = 0;
    std::size_t height = 0;
    double gamma = 0.0;
    std::vector<GridReward> rewards;

    StateId state_at(std::size_t x, std::size_t y) const { return StateId{y * width + x}; }

    friend bool operator==(const GridScenario&, const GridScenario&) = default;
};

struct GraphEdge {
    std::size_t from = 0;
    std::size_t to = 0;

    friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

struct GraphReward {
    std::string id;
    std::size_t state = 0;
    double value = 0.0;

    friend bool operator==(const GraphReward&, const GraphReward&) = default;
};

/// General-graph scenario; action order per state is the file order of its edges.
struct GraphScenario {
    std::size_t num_states = 0;
    std::vector<GraphEdge> edges;
    double gamma = 0.0;
    std::vector<GraphReward> rewards;

    friend bool operator==(const GraphScenario&, const GraphScenario&) = default;
};

using Scenario = std::variant<GridScenario, GraphScenario>;

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Parses the line-oriented scenario format (grid or general-graph form).
Scenario parse_scenario(std::string_view text);

/// Grid moves in action order. Out-of-bounds moves are dropped, so a cell
/// has between 0 and 4 actions and the remaining ones are renumbered densely.
enum class Move { Up, Down, Left, Right };

MdpModel grid_to_model(const GridScenario& scenario);
MdpModel graph_to_model(const GraphScenario& scenario);
MdpModel to_model(const Scenario& scenario);

enum class ViolationCode {
    EmptyModel,
    NoActions,
    NotStronglyConnected,
    NoRewards,
    NonpositiveReward,
    DuplicateRewardState,
    DuplicateRewardId,
    GammaOutOfRange,
};

std::string_view violation_name(ViolationCode code);

struct Violation {
    ViolationCode code;
    std::string message;
};

struct ValidationReport {
    bool ok = true;
    std::vector<Violation> violations;
};

ValidationReport validate_model(const MdpModel& model);

}  // namespace peakmdp
