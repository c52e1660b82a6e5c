#include "peakmdp/explain.hpp"

#include <algorithm>
#include <stdexcept>

namespace peakmdp {

std::string_view count_name(CollectionCount count) {
    return count == CollectionCount::Once ? "once" : "infinite";
}

std::string_view method_name(CollectionMethod method) {
    return method == CollectionMethod::Theorem4 ? "theorem4" : "event-chain";
}

namespace {

/// Rewards whose propagated height ties for the best first collection from s.
std::vector<RewardIndex> first_event_candidates(const PeakSet& peakset, StateId s) {
    const std::size_t k = peakset.rewards.size();
    std::vector<double> worth(k);
    double best = 0.0;
    for (RewardIndex j = 0; j < k; ++j) {
        worth[j] = discount(peakset.gamma, peakset.fields[j][s]) * peakset.heights.heights[j];
        best = std::max(best, worth[j]);
    }
    std::vector<RewardIndex> out;
    for (RewardIndex j = 0; j < k; ++j) {
        if (within_tie(worth[j], best)) out.push_back(j);
    }
    return out;
}

RewardIndex chain_end(const PeakSet& peakset, RewardIndex r) {
    while (!peakset.peak_of(r).is_cycle()) r = peakset.heights.best_next[r];
    return r;
}

}  // namespace

DominanceResult max_rule_peak(const PeakSet& peakset, StateId s, PropagationMode mode) {
    DominanceResult out;
    out.state = s;
    double best = -1.0;
    std::vector<std::pair<PeakId, double>> candidates;
    for (const auto& peak : peakset.peaks) {
        if (!peak.is_cycle()) continue;
        const double v = propagate(peakset, peak, s, mode);
        candidates.emplace_back(peak.id, v);
        best = std::max(best, v);
    }
    for (const auto& [id, v] : candidates) {
        if (within_tie(v, best)) out.co_dominant.push_back(id);
    }
    out.dominant = out.co_dominant.front();
    out.value = propagate(peakset, peakset.peaks[out.dominant], s, mode);
    return out;
}

DominanceResult dominant_peak(const PeakSet& peakset, StateId s, PropagationMode mode) {
    if (mode == PropagationMode::Literal) return max_rule_peak(peakset, s, mode);

    const auto first = first_event_candidates(peakset, s);
    DominanceResult out;
    out.state = s;
    out.dominant = peakset.peak_of_reward[chain_end(peakset, first.front())];
    out.value = propagate(peakset, peakset.peaks[out.dominant], s);

    std::vector<bool> seen(peakset.rewards.size(), false);
    std::vector<RewardIndex> stack(first.rbegin(), first.rend());
    while (!stack.empty()) {
        const RewardIndex r = stack.back();
        stack.pop_back();
        if (seen[r]) continue;
        seen[r] = true;
        const Peak& peak = peakset.peak_of(r);
        if (peak.is_cycle()) {
            out.co_dominant.push_back(peak.id);
            continue;
        }
        for (RewardIndex t : peakset.heights.tie_sets[r]) stack.push_back(t);
    }
    std::sort(out.co_dominant.begin(), out.co_dominant.end());
    out.co_dominant.erase(std::unique(out.co_dominant.begin(), out.co_dominant.end()), out.co_dominant.end());
    return out;
}

DominanceMap region_map(const PeakSet& peakset, PropagationMode mode) {
    DominanceMap map;
    map.mode = mode;
    const std::size_t n = peakset.num_states();
    map.dominant.resize(n);
    map.co_dominant.resize(n);
    for (std::size_t s = 0; s < n; ++s) {
        auto d = dominant_peak(peakset, StateId{s}, mode);
        map.dominant[s] = d.co_dominant.front();
        map.co_dominant[s] = d.is_co_dominant();
    }
    return map;
}

std::size_t CollectionReport::delta_events() const {
    return static_cast<std::size_t>(
        std::count_if(entries.begin(), entries.end(), [](const auto& e) { return e.count == CollectionCount::Once; }));
}

bool same_collection(const CollectionReport& a, const CollectionReport& b) {
    auto key = [](const CollectionReport& r) {
        auto e = r.entries;
        std::sort(e.begin(), e.end(), [](const auto& x, const auto& y) { return x.reward < y.reward; });
        return e;
    };
    return key(a) == key(b);
}

CollectionReport collected_rewards_rule(const PeakSet& peakset, StateId s) {
    const auto dom = dominant_peak(peakset, s);
    CollectionReport report;
    report.state = s;
    report.dominant = dom.dominant;
    report.method = CollectionMethod::Theorem4;
    for (RewardIndex m : peakset.peaks[dom.dominant].members) report.entries.push_back({m, CollectionCount::Infinite});

    std::vector<std::pair<double, RewardIndex>> deltas;
    for (const auto& peak : peakset.peaks) {
        if (peak.kind != PeakKind::Delta) continue;
        const double v = propagate(peakset, peak, s);
        if (v > dom.value && !within_tie(v, dom.value)) deltas.emplace_back(v, peak.members.front());
    }
    std::stable_sort(deltas.begin(), deltas.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (const auto& [v, r] : deltas) report.entries.push_back({r, CollectionCount::Once});
    return report;
}

CollectionReport event_chain(const PeakSet& peakset, StateId s) {
    CollectionReport report;
    report.state = s;
    report.method = CollectionMethod::EventChain;
    RewardIndex r = first_event_candidates(peakset, s).front();
    while (!peakset.peak_of(r).is_cycle()) {
        report.entries.push_back({r, CollectionCount::Once});
        r = peakset.heights.best_next[r];
    }
    const Peak& peak = peakset.peak_of(r);
    report.dominant = peak.id;
    const auto& members = peak.members;
    const auto pos = std::find(members.begin(), members.end(), r) - members.begin();
    for (std::size_t m = 0; m < members.size(); ++m) {
        report.entries.push_back({members[(pos + m) % members.size()], CollectionCount::Infinite});
    }
    return report;
}

ContributionReport relative_contributions(const PeakSet& peakset, StateId s) {
    const auto chain = event_chain(peakset, s);
    std::vector<PeakId> collected;
    for (const auto& e : chain.entries) {
        const PeakId id = peakset.peak_of_reward[e.reward];
        if (std::find(collected.begin(), collected.end(), id) == collected.end()) collected.push_back(id);
    }

    ContributionReport report;
    report.state = s;
    report.total = value_at(peakset, s);
    for (PeakId id : collected) report.entries.push_back({id, propagate(peakset, peakset.peaks[id], s), 0.0, 0.0});
    std::sort(report.entries.begin(), report.entries.end(), [](const auto& a, const auto& b) {
        return a.value != b.value ? a.value > b.value : a.peak < b.peak;
    });
    for (std::size_t i = 0; i < report.entries.size(); ++i) {
        const double below = i + 1 < report.entries.size() ? report.entries[i + 1].value : 0.0;
        auto& e = report.entries[i];
        e.difference = e.value - below;
        e.ratio = e.difference / report.total;
    }
    return report;
}

ActionId policy_action(const MdpModel& model, const PeakSet& peakset, StateId s) {
    const auto next = model.successors(s);
    if (next.empty()) throw std::logic_error("state has no actions");
    std::vector<double> v(next.size());
    double best = 0.0;
    for (std::size_t a = 0; a < next.size(); ++a) {
        v[a] = value_at(peakset, next[a]);
        best = std::max(best, v[a]);
    }
    for (std::size_t a = 0; a < next.size(); ++a) {
        if (within_tie(v[a], best)) return ActionId{a};
    }
    return ActionId{0};
}

PathTrace optimal_path(const MdpModel& model, const PeakSet& peakset, StateId s) {
    const std::size_t n = model.num_states();
    constexpr std::size_t kUnseen = static_cast<std::size_t>(-1);
    std::vector<std::size_t> first_seen(n, kUnseen);
    PathTrace trace;
    StateId current = s;
    for (;;) {
        if (trace.states.size() > 4 * n) throw std::logic_error("internal inconsistency: greedy path never cycles");
        if (first_seen[current.value] != kUnseen) break;
        first_seen[current.value] = trace.states.size();
        trace.states.push_back(current);
        current = model.successor(current, policy_action(model, peakset, current));
    }
    trace.cycle_start = first_seen[current.value];
    trace.cycle_length = trace.states.size() - trace.cycle_start;
    const std::size_t first_repeat = trace.states.size();
    for (std::size_t i = 0; i <= trace.cycle_length; ++i) trace.states.push_back(trace.states[trace.cycle_start + i]);

    double running = -1.0;
    for (std::size_t i = 0; i < first_repeat; ++i) {
        const double v = value_at(peakset, trace.states[i]);
        if (v > running) {
            running = v;
            trace.k_max = i;
        }
    }
    for (std::size_t i = 0; i < trace.states.size(); ++i) {
        if (auto r = model.reward_at(trace.states[i])) trace.events.push_back({i, *r});
    }
    return trace;
}

}  // namespace peakmdp
