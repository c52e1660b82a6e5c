#include "peakmdp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace peakmdp::oracle {

ValueTable value_iteration(const MdpModel& model, double tol, std::size_t max_sweeps) {
    const std::size_t n = model.num_states();
    const double g = model.gamma();
    ValueTable table;
    table.values.assign(n, 0.0);
    std::vector<double> next(n, 0.0);
    while (table.sweeps < max_sweeps) {
        ++table.sweeps;
        double change = 0.0;
        for (std::size_t s = 0; s < n; ++s) {
            double best = 0.0;
            for (StateId t : model.successors(StateId{s})) best = std::max(best, table.values[t.value]);
            next[s] = model.reward_value(StateId{s}) + g * best;
            change = std::max(change, std::abs(next[s] - table.values[s]));
        }
        table.values.swap(next);
        table.residual = change;
        if (change < tol) return table;
    }
    throw SweepLimitError("value iteration exceeded " + std::to_string(max_sweeps) + " sweeps (residual " +
                          std::to_string(table.residual) + ")");
}

Trajectory simulate(const MdpModel& model, std::span<const double> values, StateId start, std::size_t horizon,
                    double tie_tolerance) {
    if (values.size() != model.num_states()) throw std::invalid_argument("value table size mismatch");
    Trajectory traj;
    traj.counts.assign(model.rewards().size(), 0);
    constexpr std::size_t kUnseen = static_cast<std::size_t>(-1);
    std::vector<std::size_t> first_seen(model.num_states(), kUnseen);

    auto visit = [&](StateId s) {
        traj.visited.push_back(s);
        if (auto r = model.reward_at(s)) ++traj.counts[*r];
    };

    visit(start);
    first_seen[start.value] = 0;
    std::size_t stop_at = kUnseen;
    StateId current = start;
    while (traj.steps < horizon && traj.steps != stop_at) {
        const auto next = model.successors(current);
        double best = 0.0;
        for (StateId t : next) best = std::max(best, values[t.value]);
        for (StateId t : next) {
            if (best - values[t.value] <= tie_tolerance * std::abs(best)) {
                current = t;
                break;
            }
        }
        ++traj.steps;
        visit(current);
        if (stop_at == kUnseen) {
            if (first_seen[current.value] != kUnseen) {
                const std::size_t begin = first_seen[current.value];
                const std::size_t length = traj.steps - begin;
                traj.cycle.assign(traj.visited.begin() + static_cast<std::ptrdiff_t>(begin),
                                  traj.visited.begin() + static_cast<std::ptrdiff_t>(traj.steps));
                stop_at = traj.steps + length;
            } else {
                first_seen[current.value] = traj.steps;
            }
        }
    }
    return traj;
}

Trajectory simulate(const MdpModel& model, const ValueTable& values, StateId start, std::size_t horizon) {
    return simulate(model, values.values, start, horizon);
}

Trajectory simulate(const MdpModel& model, const PeakSet& peaks, StateId start, std::size_t horizon) {
    const auto values = value_table(peaks);
    return simulate(model, values, start, horizon, kTieRelTol);
}

Comparison compare_value_functions(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("value functions differ in length");
    Comparison c;
    for (std::size_t s = 0; s < a.size(); ++s) {
        const double diff = std::abs(a[s] - b[s]);
        const double scale = std::max(std::abs(a[s]), std::abs(b[s]));
        if (diff > c.max_abs_diff) {
            c.max_abs_diff = diff;
            c.argmax_state = s;
        }
        if (scale > 0.0) c.max_rel_diff = std::max(c.max_rel_diff, diff / scale);
    }
    return c;
}

}  // namespace peakmdp::oracle
