#include "peakmdp/cli.hpp"

#include "peakmdp/dist.hpp"
#include "peakmdp/oracle.hpp"
#include "peakmdp/report.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <map>
#include <set>

namespace peakmdp::cli {

using report::Document;
using report::Scalar;
using report::Section;

namespace {

const std::map<std::string, Verb> kVerbs = {
    {"validate", Verb::Validate}, {"solve", Verb::Solve}, {"explain", Verb::Explain},
    {"map", Verb::Map},           {"contributions", Verb::Contributions},
    {"path", Verb::Path},         {"check", Verb::Check},
};

std::string exact_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Output usage_error(const std::string& message, const std::string& help) {
    return {kExitUsage, "", "error: " + message + "\n" + help, {}};
}

/// Everything a verb needs once the scenario is loaded and validated.
struct Loaded {
    Scenario scenario;
    MdpModel model;
    const GridScenario* grid = nullptr;
};

std::string state_label(const Loaded& in, StateId s) {
    if (in.grid) {
        return std::to_string(s.value % in.grid->width) + "," + std::to_string(s.value / in.grid->width);
    }
    return std::to_string(s.value);
}

std::optional<std::size_t> parse_count(std::string_view tok) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size() || tok.empty()) return std::nullopt;
    return v;
}

std::optional<StateId> resolve_state(const Loaded& in, const std::string& text) {
    if (in.grid) {
        const auto comma = text.find(',');
        if (comma == std::string::npos) return std::nullopt;
        auto x = parse_count(std::string_view(text).substr(0, comma));
        auto y = parse_count(std::string_view(text).substr(comma + 1));
        if (!x || !y || *x >= in.grid->width || *y >= in.grid->height) return std::nullopt;
        return in.grid->state_at(*x, *y);
    }
    auto s = parse_count(text);
    if (!s || *s >= in.model.num_states()) return std::nullopt;
    return StateId{*s};
}

std::vector<Scalar> reward_ids(const PeakSet& set, std::span<const RewardIndex> rewards) {
    std::vector<Scalar> out;
    for (RewardIndex r : rewards) out.emplace_back(set.rewards[r].id);
    return out;
}

std::vector<Scalar> peak_ids(std::span<const PeakId> ids) {
    std::vector<Scalar> out;
    for (PeakId id : ids) out.emplace_back(static_cast<std::int64_t>(id));
    return out;
}

void add_validation(Document& doc, const ValidationReport& report) {
    doc.section().add("verb", "validate").add("ok", report.ok).add("violations", report.violations.size());
    for (const auto& v : report.violations) {
        doc.section().add("violation", std::string(violation_name(v.code))).add("message", v.message);
    }
}

void solve_report(Document& doc, const Loaded& in, const PeakSet& set) {
    doc.section()
        .add("verb", "solve")
        .add("form", in.grid ? "grid" : "graph")
        .add("states", in.model.num_states())
        .add("rewards", set.rewards.size())
        .add("gamma", set.gamma)
        .add("peaks", set.peaks.size())
        .add("sweeps", set.heights.sweeps)
        .add("closure_rounds", set.heights.closure_rounds);
    for (RewardIndex r = 0; r < set.rewards.size(); ++r) {
        doc.section()
            .add("reward", set.rewards[r].id)
            .add("state", state_label(in, set.rewards[r].state))
            .add("value", set.rewards[r].value)
            .add("height", set.heights.heights[r])
            .add("min_cycle", static_cast<std::int64_t>(set.table.at(r, r)))
            .add("best_next", set.rewards[set.heights.best_next[r]].id)
            .add_list("ties", reward_ids(set, set.heights.tie_sets[r]))
            .add("peak", set.peak_of_reward[r]);
    }
    for (const auto& peak : set.peaks) {
        auto& sec = doc.section();
        sec.add("peak", peak.id).add("kind", std::string(peak_kind_name(peak.kind)));
        sec.add_list("members", reward_ids(set, peak.members));
        std::vector<Scalar> anchors, heights;
        for (const auto& a : peak.anchors) {
            anchors.emplace_back(state_label(in, a.state));
            heights.emplace_back(a.height);
        }
        sec.add_list("anchors", anchors).add_list("heights", heights);
        if (peak.cycle_length) sec.add("cycle_length", static_cast<std::int64_t>(*peak.cycle_length));
        if (peak.parent) sec.add("parent", set.rewards[*peak.parent].id);
    }
}

void add_collection(Document& doc, const PeakSet& set, const CollectionReport& c) {
    std::vector<Scalar> infinite, once;
    for (const auto& e : c.entries) {
        (e.count == CollectionCount::Infinite ? infinite : once).emplace_back(set.rewards[e.reward].id);
    }
    doc.section()
        .add("collection", std::string(method_name(c.method)))
        .add("dominant", c.dominant)
        .add_list("infinite", infinite)
        .add_list("once", once);
}

void explain_report(Document& doc, const Loaded& in, const PeakSet& set, StateId s, PropagationMode mode) {
    doc.section()
        .add("verb", "explain")
        .add("state", state_label(in, s))
        .add("mode", std::string(mode_name(mode)))
        .add("value", value_at(set, s));
    const auto dom = dominant_peak(set, s, mode);
    const auto rule = max_rule_peak(set, s, mode);
    const Peak& peak = set.peaks[dom.dominant];
    doc.section()
        .add("dominant", dom.dominant)
        .add("kind", std::string(peak_kind_name(peak.kind)))
        .add_list("members", reward_ids(set, peak.members))
        .add("dominant_value", dom.value)
        .add_list("co_dominant", peak_ids(dom.co_dominant))
        .add("codominant", dom.is_co_dominant())
        .add("max_rule_peak", rule.dominant)
        .add("max_rule_agrees", rule.dominant == dom.dominant);
    const auto rule4 = collected_rewards_rule(set, s);
    const auto chain = event_chain(set, s);
    add_collection(doc, set, rule4);
    add_collection(doc, set, chain);
    doc.section().add("agreement", same_collection(rule4, chain)).add("chain_deltas", chain.delta_events());
}

void contributions_report(Document& doc, const Loaded& in, const PeakSet& set, StateId s) {
    const auto c = relative_contributions(set, s);
    doc.section()
        .add("verb", "contributions")
        .add("state", state_label(in, s))
        .add("value", c.total)
        .add("peaks", c.entries.size());
    for (const auto& e : c.entries) {
        const Peak& peak = set.peaks[e.peak];
        doc.section()
            .add("peak", e.peak)
            .add("kind", std::string(peak_kind_name(peak.kind)))
            .add_list("members", reward_ids(set, peak.members))
            .add("value", e.value)
            .add("difference", e.difference)
            .add("ratio", e.ratio);
    }
}

void path_report(Document& doc, const Loaded& in, const PeakSet& set, StateId s) {
    const auto trace = optimal_path(in.model, set, s);
    std::vector<Scalar> states, plus, events;
    for (StateId k : trace.states) states.emplace_back(state_label(in, k));
    for (StateId k : trace.k_plus()) plus.emplace_back(state_label(in, k));
    for (const auto& e : trace.events) events.emplace_back(std::to_string(e.step) + ":" + set.rewards[e.reward].id);
    doc.section()
        .add("verb", "path")
        .add("state", state_label(in, s))
        .add("length", trace.states.size())
        .add("cycle_start", trace.cycle_start)
        .add("cycle_length", trace.cycle_length)
        .add("k_max", trace.k_max)
        .add_list("states", states)
        .add_list("k_plus", plus)
        .add_list("events", events);
}

bool check_report(Document& doc, const Loaded& in, const PeakSet& set, double budget) {
    const auto table = oracle::value_iteration(in.model);
    const auto peaks = value_table(set);
    const auto cmp = oracle::compare_value_functions(peaks, table.values);
    const bool pass = cmp.max_abs_diff <= budget;
    doc.section()
        .add("verb", "check")
        .add("states", in.model.num_states())
        .add("rewards", set.rewards.size())
        .add("budget", budget)
        .add("oracle_tolerance", oracle::kDefaultTolerance)
        .add("oracle_sweeps", table.sweeps)
        .add("max_abs_diff", cmp.max_abs_diff)
        .add("max_rel_diff", cmp.max_rel_diff)
        .add("argmax_state", state_label(in, StateId{cmp.argmax_state}))
        .add("pass", pass);
    return pass;
}

}  // namespace

std::variant<Command, Output> parse_command(const std::vector<std::string>& args) {
    CLI::App app{"Peak-based solver and explainer for deterministic reward MDPs", "peakmdp"};
    Command cmd;
    std::string verb;
    std::string format = "text";
    std::string mode = "achievable";
    std::vector<std::string> verb_names;
    for (const auto& [name, v] : kVerbs) verb_names.push_back(name);
    app.add_option("verb", verb, "validate | solve | explain | map | contributions | path | check")
        ->required()
        ->check(CLI::IsMember(verb_names));
    app.add_option("scenario", cmd.scenario_path, "Scenario file")->required();
    app.add_option("--state", cmd.state, "Query state: x,y on grids, index on graphs");
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--mode", mode, "Peak propagation mode")->check(CLI::IsMember({"achievable", "literal"}));
    app.add_option("--budget", cmd.budget, "check: allowed max abs difference")->check(CLI::NonNegativeNumber);
    app.add_option("--ppm", cmd.ppm_path, "map: also write a P6 image to this path");
    app.add_option("--scale", cmd.scale, "map: pixels per cell")->check(CLI::Range(1, 64));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        return Output{kExitOk, app.help(), "", {}};
    } catch (const CLI::ParseError& e) {
        return usage_error(e.what(), app.help());
    }

    cmd.verb = kVerbs.at(verb);
    cmd.format = format == "json" ? Format::Json : Format::Text;
    cmd.mode = mode == "literal" ? PropagationMode::Literal : PropagationMode::Achievable;
    const bool needs_state = cmd.verb == Verb::Explain || cmd.verb == Verb::Contributions || cmd.verb == Verb::Path;
    if (needs_state && !cmd.state) return usage_error("'" + verb + "' requires --state", app.help());
    if (cmd.ppm_path && cmd.verb != Verb::Map) return usage_error("--ppm is only valid with 'map'", app.help());
    return cmd;
}

Output run(const Command& command, std::string_view scenario_text) {
    Output out;
    std::optional<Loaded> loaded;
    try {
        auto scenario = parse_scenario(scenario_text);
        auto model = to_model(scenario);
        loaded.emplace(Loaded{std::move(scenario), std::move(model)});
        loaded->grid = std::get_if<GridScenario>(&loaded->scenario);
    } catch (const ParseError& e) {
        return {kExitInvalid, "", std::string("error: ") + e.what() + "\n", {}};
    }
    const Loaded& in = *loaded;

    Document doc;
    const auto validation = validate_model(in.model);
    if (command.verb == Verb::Validate || !validation.ok) {
        add_validation(doc, validation);
        out.exit_code = validation.ok ? kExitOk : kExitInvalid;
        out.out = command.format == Format::Json ? doc.to_json() : doc.to_text();
        return out;
    }

    std::optional<StateId> state;
    if (command.state) {
        state = resolve_state(in, *command.state);
        if (!state) return {kExitUsage, "", "error: invalid --state '" + *command.state + "'\n", {}};
    }

    const PeakSet set = solve_peaks(in.model);
    switch (command.verb) {
        case Verb::Validate: break;
        case Verb::Solve: solve_report(doc, in, set); break;
        case Verb::Explain: explain_report(doc, in, set, *state, command.mode); break;
        case Verb::Contributions: contributions_report(doc, in, set, *state); break;
        case Verb::Path: path_report(doc, in, set, *state); break;
        case Verb::Check:
            if (!check_report(doc, in, set, command.budget)) out.exit_code = kExitInvalid;
            break;
        case Verb::Map: {
            const auto map = region_map(set, command.mode);
            std::size_t shared = static_cast<std::size_t>(std::count(map.co_dominant.begin(), map.co_dominant.end(), true));
            std::set<PeakId> regions(map.dominant.begin(), map.dominant.end());
            auto& head = doc.section();
            head.add("verb", "map")
                .add("mode", std::string(mode_name(command.mode)))
                .add("states", in.model.num_states())
                .add("regions", regions.size())
                .add("codominant_cells", shared);
            if (in.grid) {
                head.add("width", in.grid->width).add("height", in.grid->height);
                doc.set_body("rows", render_ascii_map(map, set, *in.grid));
                if (command.ppm_path) out.ppm = render_ppm_map(map, *in.grid, command.scale);
            } else {
                if (command.ppm_path) return {kExitUsage, "", "error: --ppm needs a grid scenario\n", {}};
                std::vector<Scalar> assignment;
                for (std::size_t s = 0; s < map.dominant.size(); ++s) {
                    assignment.emplace_back(static_cast<std::int64_t>(map.dominant[s]));
                }
                std::vector<Scalar> tied;
                for (std::size_t s = 0; s < map.co_dominant.size(); ++s) {
                    if (map.co_dominant[s]) tied.emplace_back(static_cast<std::int64_t>(s));
                }
                doc.section().add_list("assignment", assignment).add_list("codominant_states", tied);
            }
            break;
        }
    }
    out.out = command.format == Format::Json ? doc.to_json() : doc.to_text();
    return out;
}

std::string render_scenario(const Scenario& scenario) {
    std::string out;
    if (const auto* grid = std::get_if<GridScenario>(&scenario)) {
        out += "grid " + std::to_string(grid->width) + " " + std::to_string(grid->height) + "\n";
        out += "gamma " + exact_real(grid->gamma) + "\n";
        for (const auto& r : grid->rewards) {
            out += "reward " + r.id + " " + std::to_string(r.x) + " " + std::to_string(r.y) + " " +
                   exact_real(r.value) + "\n";
        }
        return out;
    }
    const auto& graph = std::get<GraphScenario>(scenario);
    out += "states " + std::to_string(graph.num_states) + "\n";
    for (const auto& e : graph.edges) out += "edge " + std::to_string(e.from) + " " + std::to_string(e.to) + "\n";
    out += "gamma " + exact_real(graph.gamma) + "\n";
    for (const auto& r : graph.rewards) {
        out += "reward " + r.id + " " + std::to_string(r.state) + " " + exact_real(r.value) + "\n";
    }
    return out;
}

std::vector<std::string> render_ascii_map(const DominanceMap& map, const PeakSet& peakset,
                                          const GridScenario& scenario) {
    std::map<PeakId, char> glyph;
    std::set<char> used;
    bool unique = true;
    for (const auto& peak : peakset.peaks) {
        if (!peak.is_cycle()) continue;
        const auto& id = peakset.rewards[peak.members.front()].id;
        const unsigned char c = id.empty() ? 0 : static_cast<unsigned char>(id.front());
        const char lower = static_cast<char>(std::tolower(c));
        if (!std::isalnum(c) || !used.insert(lower).second) {
            unique = false;
            break;
        }
        glyph[peak.id] = lower;
    }

    std::vector<std::string> rows;
    if (!unique) {
        for (std::size_t s = 0; s < map.dominant.size(); ++s) {
            rows.push_back(std::to_string(s % scenario.width) + "," + std::to_string(s / scenario.width) + " " +
                           (map.co_dominant[s] ? std::string("=") : std::to_string(map.dominant[s])));
        }
        return rows;
    }

    for (std::size_t row = scenario.height; row-- > 0;) {
        std::string line;
        for (std::size_t x = 0; x < scenario.width; ++x) {
            const StateId s = scenario.state_at(x, row);
            if (map.co_dominant[s.value]) {
                line += '=';
                continue;
            }
            const Peak& peak = peakset.peaks[map.dominant[s.value]];
            const bool anchor = std::any_of(peak.anchors.begin(), peak.anchors.end(),
                                            [&](const Anchor& a) { return a.state == s; });
            const char c = glyph.at(peak.id);
            line += anchor ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c;
        }
        rows.push_back(std::move(line));
    }
    return rows;
}

std::vector<std::uint8_t> render_ppm_map(const DominanceMap& map, const GridScenario& scenario, std::size_t scale) {
    if (scale == 0) throw std::invalid_argument("scale must be positive");
    const std::size_t w = scenario.width * scale;
    const std::size_t h = scenario.height * scale;
    const std::string header = "P6\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
    std::vector<std::uint8_t> bytes(header.begin(), header.end());
    bytes.reserve(bytes.size() + w * h * 3);
    constexpr std::size_t kColors = std::size(kPalette);
    for (std::size_t py = 0; py < h; ++py) {
        const std::size_t y = scenario.height - 1 - py / scale;
        for (std::size_t px = 0; px < w; ++px) {
            const std::size_t s = scenario.state_at(px / scale, y).value;
            if (map.co_dominant[s]) {
                bytes.insert(bytes.end(), {0, 0, 0});
            } else {
                const auto* c = kPalette[map.dominant[s] % kColors];
                bytes.insert(bytes.end(), {c[0], c[1], c[2]});
            }
        }
    }
    return bytes;
}

}  // namespace peakmdp::cli
