#pragma once

#include "peakmdp/core.hpp"
#include "peakmdp/dist.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace peakmdp {

/// Relative tolerance used for every argmax tie and dominance comparison.
inline constexpr double kTieRelTol = 1e-12;
inline constexpr double kTieAbsFloor = 1e-15;

/// True when a and b are equal up to the tie tolerance.
bool within_tie(double a, double b);

/// gamma^hops; the only discounting primitive used on the peak side.
double discount(double gamma, HopCount hops);

/**
 * Heights at reward states: the optimal value collected from each reward
 * state onward. best_next[i] is the reward whose collection next follows
 * reward i on an optimal path (i itself when cycling alone).
 */
struct HeightTable {
    std::vector<double> heights;
    std::vector<RewardIndex> best_next;
    /// All rewards tied with best_next[i], ascending; always contains best_next[i].
    std::vector<std::vector<RewardIndex>> tie_sets;
    /// Value-iteration sweeps before the exact closure took over.
    std::size_t sweeps = 0;
    /// Policy-improvement rounds spent in the exact closure.
    std::size_t closure_rounds = 0;
};

class NonConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kMaxHeightSweeps = 1'000'000;

HeightTable solve_heights(const MdpModel& model, const RewardDistanceTable& table);

enum class PeakKind { Baseline, Combined, Delta };

std::string_view peak_kind_name(PeakKind kind);

using PeakId = std::size_t;

struct Anchor {
    StateId state;
    double height = 0.0;
};

struct Peak {
    PeakId id = 0;
    PeakKind kind = PeakKind::Baseline;
    /// One reward for Baseline/Delta; cycle visit order for Combined.
    std::vector<RewardIndex> members;
    /// One anchor per member, same order.
    std::vector<Anchor> anchors;
    /// Hops around the repeating cycle; empty for Delta peaks.
    std::optional<HopCount> cycle_length;
    /// For Delta peaks: the reward collected next.
    std::optional<RewardIndex> parent;

    bool is_cycle() const { return kind != PeakKind::Delta; }
};

/**
 * Solved decomposition of the value function into peaks. Peak ids are their
 * positions in `peaks` and are ordered by each peak's lowest reward index.
 */
struct PeakSet {
    std::vector<Peak> peaks;
    HeightTable heights;
    double gamma = 0.0;
    std::vector<RewardSpec> rewards;
    std::vector<DistanceField> fields;
    RewardDistanceTable table;
    /// Owning peak of every reward.
    std::vector<PeakId> peak_of_reward;

    const Peak& peak_of(RewardIndex r) const { return peaks[peak_of_reward[r]]; }
    std::size_t num_states() const { return fields.empty() ? 0 : fields.front().dist.size(); }
};

PeakSet classify_peaks(const MdpModel& model, HeightTable heights, const RewardDistanceTable& table,
                       std::vector<DistanceField> fields);

/// Distance fields, table, heights and classification in one call.
PeakSet solve_peaks(const MdpModel& model);

enum class PropagationMode {
    /// Best entry over the peak's anchors; exact for the optimal value function.
    Achievable,
    /// The closed forms verbatim: per-member geometric series summed for combined peaks.
    Literal,
};

std::string_view mode_name(PropagationMode mode);

double propagate(const PeakSet& peakset, const Peak& peak, StateId s,
                 PropagationMode mode = PropagationMode::Achievable);

/// Maximum over all peaks of the achievable propagation.
double value_at(const PeakSet& peakset, StateId s);

/// value_at for every state.
std::vector<double> value_table(const PeakSet& peakset);

}  // namespace peakmdp
