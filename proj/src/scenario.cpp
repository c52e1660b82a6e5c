#include "peakmdp/core.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>
#include <utility>

namespace peakmdp {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

std::size_t to_index(std::string_view tok, std::size_t line, const char* what) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw ParseError(line, std::string("expected a nonnegative integer for ") + what + ", got '" +
                                   std::string(tok) + "'");
    }
    return v;
}

double to_real(std::string_view tok, std::size_t line, const char* what) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
        throw ParseError(line, std::string("expected a real number for ") + what + ", got '" + std::string(tok) + "'");
    }
    return v;
}

void expect_arity(const std::vector<std::string_view>& toks, std::size_t n, std::size_t line, const char* usage) {
    if (toks.size() != n) throw ParseError(line, std::string("expected '") + usage + "'");
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
    enum class Form { Unknown, Grid, Graph };
    Form form = Form::Unknown;
    GridScenario grid;
    GraphScenario graph;
    std::optional<double> gamma;
    std::set<std::string, std::less<>> ids;
    std::set<std::size_t> reward_states;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        auto toks = tokenize(line);
        if (toks.empty()) continue;
        const auto key = toks[0];

        if (form == Form::Unknown && key != "grid" && key != "states") {
            throw ParseError(line_no, "scenario must start with 'grid <width> <height>' or 'states <n>'");
        }

        if (key == "grid" || key == "states") {
            if (form != Form::Unknown) throw ParseError(line_no, "scenario header given twice");
            if (key == "grid") {
                expect_arity(toks, 3, line_no, "grid <width> <height>");
                grid.width = to_index(toks[1], line_no, "width");
                grid.height = to_index(toks[2], line_no, "height");
                if (grid.width == 0 || grid.height == 0) throw ParseError(line_no, "grid dimensions must be positive");
                form = Form::Grid;
            } else {
                expect_arity(toks, 2, line_no, "states <n>");
                graph.num_states = to_index(toks[1], line_no, "state count");
                if (graph.num_states == 0) throw ParseError(line_no, "state count must be positive");
                form = Form::Graph;
            }
        } else if (key == "gamma") {
            expect_arity(toks, 2, line_no, "gamma <float>");
            if (gamma) throw ParseError(line_no, "gamma given twice");
            double g = to_real(toks[1], line_no, "gamma");
            if (!(g > 0.0 && g < 1.0)) throw ParseError(line_no, "gamma outside (0,1)");
            gamma = g;
        } else if (key == "edge") {
            if (form != Form::Graph) throw ParseError(line_no, "'edge' is only valid after 'states <n>'");
            expect_arity(toks, 3, line_no, "edge <from> <to>");
            GraphEdge e{to_index(toks[1], line_no, "edge source"), to_index(toks[2], line_no, "edge target")};
            if (e.from >= graph.num_states || e.to >= graph.num_states) {
                throw ParseError(line_no, "edge endpoint out of range");
            }
            graph.edges.push_back(e);
        } else if (key == "reward") {
            std::string id;
            std::size_t state = 0;
            double value = 0.0;
            if (form == Form::Grid) {
                expect_arity(toks, 5, line_no, "reward <id> <x> <y> <value>");
                id = std::string(toks[1]);
                auto x = to_index(toks[2], line_no, "x");
                auto y = to_index(toks[3], line_no, "y");
                value = to_real(toks[4], line_no, "reward value");
                if (x >= grid.width || y >= grid.height) throw ParseError(line_no, "reward cell outside the grid");
                state = y * grid.width + x;
                grid.rewards.push_back({id, x, y, value});
            } else {
                expect_arity(toks, 4, line_no, "reward <id> <state> <value>");
                id = std::string(toks[1]);
                state = to_index(toks[2], line_no, "reward state");
                value = to_real(toks[3], line_no, "reward value");
                if (state >= graph.num_states) throw ParseError(line_no, "reward state out of range");
                graph.rewards.push_back({id, state, value});
            }
            if (!(value > 0.0)) throw ParseError(line_no, "reward value must be positive");
            if (!ids.insert(id).second) throw ParseError(line_no, "duplicate reward id '" + id + "'");
            if (!reward_states.insert(state).second) throw ParseError(line_no, "duplicate reward cell");
        } else {
            throw ParseError(line_no, "unknown key '" + std::string(key) + "'");
        }
    }

    if (form == Form::Unknown) throw ParseError(line_no, "empty scenario");
    if (!gamma) throw ParseError(line_no, "missing 'gamma <float>'");
    if (form == Form::Grid) {
        grid.gamma = *gamma;
        return grid;
    }
    graph.gamma = *gamma;
    return graph;
}

}  // namespace peakmdp
