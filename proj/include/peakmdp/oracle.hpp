#pragma once

#include "peakmdp/core.hpp"
#include "peakmdp/peaks.hpp"

#include <span>
#include <stdexcept>
#include <vector>

// Tabular ground truth. Nothing here uses distances or heights; the peak side
// is only consulted through its per-state values when simulating from it.
namespace peakmdp::oracle {

struct ValueTable {
    std::vector<double> values;
    std::size_t sweeps = 0;
    double residual = 0.0;
};

class SweepLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kDefaultTolerance = 1e-12;

/// Synchronous Bellman sweeps V(s) <- r(s) + gamma * max_a V(T(s,a)) from V = 0,
/// until the sup-norm change drops below tol.
ValueTable value_iteration(const MdpModel& model, double tol = kDefaultTolerance,
                           std::size_t max_sweeps = 1'000'000);

struct Trajectory {
    std::vector<StateId> visited;
    /// Collections per reward; entering a reward state (or starting on it) counts once.
    std::vector<std::size_t> counts;
    /// Repeating part of the trajectory; empty if the horizon ended first.
    std::vector<StateId> cycle;
    std::size_t steps = 0;
};

/// Relative tie tolerance for greedy steps on tabular values, loose enough to
/// absorb the value-iteration residual.
inline constexpr double kOracleTieTolerance = 1e-9;

/**
 * Greedy simulation on a per-state value table, lowest action on ties.
 * Stops after `horizon` steps or one full cycle past the first repeated state.
 */
Trajectory simulate(const MdpModel& model, std::span<const double> values, StateId start, std::size_t horizon,
                    double tie_tolerance = kOracleTieTolerance);
Trajectory simulate(const MdpModel& model, const ValueTable& values, StateId start, std::size_t horizon);
Trajectory simulate(const MdpModel& model, const PeakSet& peaks, StateId start, std::size_t horizon);

struct Comparison {
    double max_abs_diff = 0.0;
    double max_rel_diff = 0.0;
    std::size_t argmax_state = 0;
};

Comparison compare_value_functions(std::span<const double> a, std::span<const double> b);

}  // namespace peakmdp::oracle
