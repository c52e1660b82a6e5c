#include "peakmdp/peaks.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace peakmdp {

bool within_tie(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return std::abs(a - b) <= std::max(kTieRelTol * scale, kTieAbsFloor);
}

double discount(double gamma, HopCount hops) { return std::pow(gamma, static_cast<double>(hops)); }

std::string_view peak_kind_name(PeakKind kind) {
    switch (kind) {
        case PeakKind::Baseline: return "baseline";
        case PeakKind::Combined: return "combined";
        case PeakKind::Delta: return "delta";
    }
    return "unknown";
}

std::string_view mode_name(PropagationMode mode) {
    return mode == PropagationMode::Achievable ? "achievable" : "literal";
}

namespace {

struct RewardGraph {
    std::vector<double> values;
    /// gain[i * k + j] = gamma^(delta_plus[i][j])
    std::vector<double> gain;
    std::size_t k = 0;

    double g(std::size_t i, std::size_t j) const { return gain[i * k + j]; }
};

RewardGraph make_graph(const MdpModel& model, const RewardDistanceTable& table) {
    RewardGraph graph;
    graph.k = table.size();
    for (const auto& r : model.rewards()) graph.values.push_back(r.value);
    graph.gain.resize(graph.k * graph.k);
    for (std::size_t i = 0; i < graph.k; ++i) {
        for (std::size_t j = 0; j < graph.k; ++j) graph.gain[i * graph.k + j] = discount(model.gamma(), table.at(i, j));
    }
    return graph;
}

/// Terminal cycle members of the functional graph `next`, per node: the cycle
/// it lies on (empty when it only leads into one).
std::vector<std::vector<RewardIndex>> terminal_cycles(const std::vector<RewardIndex>& next) {
    const std::size_t k = next.size();
    std::vector<std::vector<RewardIndex>> cycle_of(k);
    std::vector<int> state(k, 0);  // 0 unvisited, 1 on stack, 2 done
    for (std::size_t start = 0; start < k; ++start) {
        if (state[start] != 0) continue;
        std::vector<RewardIndex> stack;
        std::size_t node = start;
        while (state[node] == 0) {
            state[node] = 1;
            stack.push_back(node);
            node = next[node];
        }
        if (state[node] == 1) {
            auto it = std::find(stack.begin(), stack.end(), node);
            std::vector<RewardIndex> cycle(it, stack.end());
            for (RewardIndex m : cycle) cycle_of[m] = cycle;
        }
        for (RewardIndex m : stack) state[m] = 2;
    }
    return cycle_of;
}

/// Exact heights of the stationary policy described by `next`.
std::vector<double> close_heights(const RewardGraph& graph, const std::vector<RewardIndex>& next) {
    const std::size_t k = graph.k;
    std::vector<double> heights(k, 0.0);
    std::vector<bool> known(k, false);
    const auto cycles = terminal_cycles(next);

    for (std::size_t i = 0; i < k; ++i) {
        const auto& cycle = cycles[i];
        if (cycle.empty() || known[i]) continue;
        const std::size_t len = cycle.size();
        double loop_gain = 1.0;
        for (std::size_t m = 0; m < len; ++m) loop_gain *= graph.g(cycle[m], cycle[(m + 1) % len]);
        if (!(loop_gain < 1.0)) throw NonConvergenceError("reward cycle does not discount; check gamma");
        for (std::size_t m = 0; m < len; ++m) {
            double sum = 0.0;
            double factor = 1.0;
            for (std::size_t l = 0; l < len; ++l) {
                const auto here = cycle[(m + l) % len];
                sum += factor * graph.values[here];
                factor *= graph.g(here, cycle[(m + l + 1) % len]);
            }
            heights[cycle[m]] = sum / (1.0 - loop_gain);
            known[cycle[m]] = true;
        }
    }

    for (std::size_t i = 0; i < k; ++i) {
        std::vector<RewardIndex> chain;
        std::size_t node = i;
        while (!known[node]) {
            chain.push_back(node);
            node = next[node];
        }
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
            heights[*it] = graph.values[*it] + graph.g(*it, next[*it]) * heights[next[*it]];
            known[*it] = true;
        }
    }
    return heights;
}

struct Choice {
    double best = 0.0;
    std::vector<RewardIndex> ties;
};

Choice best_successors(const RewardGraph& graph, const std::vector<double>& heights, std::size_t i) {
    Choice c;
    for (std::size_t j = 0; j < graph.k; ++j) c.best = std::max(c.best, graph.g(i, j) * heights[j]);
    for (std::size_t j = 0; j < graph.k; ++j) {
        if (within_tie(graph.g(i, j) * heights[j], c.best)) c.ties.push_back(j);
    }
    return c;
}

}  // namespace

HeightTable solve_heights(const MdpModel& model, const RewardDistanceTable& table) {
    if (!(model.gamma() > 0.0 && model.gamma() < 1.0)) throw NonConvergenceError("gamma outside (0,1)");
    if (table.size() != model.rewards().size()) throw std::invalid_argument("distance table does not match rewards");
    const RewardGraph graph = make_graph(model, table);
    const std::size_t k = graph.k;
    HeightTable out;
    if (k == 0) return out;

    // Phase 1: Jacobi iteration from H = v, used to find a good pointer set.
    std::vector<double> h = graph.values;
    std::vector<RewardIndex> next(k, 0);
    std::vector<RewardIndex> previous_next;
    std::size_t stable = 0;
    for (;;) {
        if (out.sweeps >= kMaxHeightSweeps) throw NonConvergenceError("height iteration did not converge");
        ++out.sweeps;
        std::vector<double> updated(k);
        double change = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            double best = -1.0;
            for (std::size_t j = 0; j < k; ++j) {
                const double candidate = graph.g(i, j) * h[j];
                if (candidate > best) {
                    best = candidate;
                    next[i] = j;
                }
            }
            updated[i] = graph.values[i] + best;
            change = std::max(change, std::abs(updated[i] - h[i]));
        }
        h = std::move(updated);
        stable = next == previous_next ? stable + 1 : 0;
        previous_next = next;
        if (change < 1e-13 || stable >= 2) break;
    }

    // Phase 2: exact heights of the pointer policy, improved until no reward
    // prefers another successor beyond the tie tolerance.
    const std::size_t max_rounds = k * k + 16;
    for (;;) {
        if (out.closure_rounds >= max_rounds) throw NonConvergenceError("height closure did not settle");
        ++out.closure_rounds;
        h = close_heights(graph, next);
        bool changed = false;
        for (std::size_t i = 0; i < k; ++i) {
            auto choice = best_successors(graph, h, i);
            const double current = graph.g(i, next[i]) * h[next[i]];
            if (!within_tie(current, choice.best) && choice.best > current) {
                next[i] = choice.ties.front();
                changed = true;
            }
        }
        if (!changed) break;
    }

    out.tie_sets.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        out.tie_sets[i] = best_successors(graph, h, i).ties;
        next[i] = out.tie_sets[i].front();
    }
    out.best_next = next;
    out.heights = close_heights(graph, next);
    return out;
}

PeakSet classify_peaks(const MdpModel& model, HeightTable heights, const RewardDistanceTable& table,
                       std::vector<DistanceField> fields) {
    const std::size_t k = heights.heights.size();
    if (k != model.rewards().size() || fields.size() != k || table.size() != k) {
        throw std::invalid_argument("heights, fields and table must cover every reward");
    }
    PeakSet set;
    set.gamma = model.gamma();
    set.rewards = model.rewards();
    set.peak_of_reward.assign(k, 0);
    std::vector<bool> assigned(k, false);
    const auto cycles = terminal_cycles(heights.best_next);

    for (std::size_t i = 0; i < k; ++i) {
        if (assigned[i]) continue;
        Peak peak;
        peak.id = set.peaks.size();
        if (!cycles[i].empty()) {
            const auto& cycle = cycles[i];
            const auto pos = std::find(cycle.begin(), cycle.end(), i) - cycle.begin();
            HopCount length = 0;
            for (std::size_t m = 0; m < cycle.size(); ++m) {
                const auto member = cycle[(pos + m) % cycle.size()];
                peak.members.push_back(member);
                length += table.at(member, heights.best_next[member]);
            }
            peak.kind = cycle.size() == 1 ? PeakKind::Baseline : PeakKind::Combined;
            peak.cycle_length = length;
        } else {
            peak.kind = PeakKind::Delta;
            peak.members = {i};
            peak.parent = heights.best_next[i];
        }
        for (RewardIndex m : peak.members) {
            peak.anchors.push_back({set.rewards[m].state, heights.heights[m]});
            set.peak_of_reward[m] = peak.id;
            assigned[m] = true;
        }
        set.peaks.push_back(std::move(peak));
    }

    set.heights = std::move(heights);
    set.table = table;
    set.fields = std::move(fields);
    return set;
}

PeakSet solve_peaks(const MdpModel& model) {
    auto fields = reward_distance_fields(model);
    auto table = reward_distance_table(model, fields);
    auto heights = solve_heights(model, table);
    return classify_peaks(model, std::move(heights), table, std::move(fields));
}

double propagate(const PeakSet& peakset, const Peak& peak, StateId s, PropagationMode mode) {
    const double g = peakset.gamma;
    if (mode == PropagationMode::Achievable || peak.kind == PeakKind::Delta) {
        double best = 0.0;
        for (std::size_t m = 0; m < peak.members.size(); ++m) {
            best = std::max(best, discount(g, peakset.fields[peak.members[m]][s]) * peak.anchors[m].height);
        }
        return best;
    }
    const double denom = 1.0 - discount(g, *peak.cycle_length);
    double sum = 0.0;
    for (RewardIndex m : peak.members) {
        sum += discount(g, peakset.fields[m][s]) * (peakset.rewards[m].value / denom);
    }
    return sum;
}

double value_at(const PeakSet& peakset, StateId s) {
    double best = 0.0;
    for (const auto& peak : peakset.peaks) best = std::max(best, propagate(peakset, peak, s));
    return best;
}

std::vector<double> value_table(const PeakSet& peakset) {
    std::vector<double> out(peakset.num_states());
    for (std::size_t s = 0; s < out.size(); ++s) out[s] = value_at(peakset, StateId{s});
    return out;
}

}  // namespace peakmdp
