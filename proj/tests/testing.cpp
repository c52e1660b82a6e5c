#include "testing.hpp"

#include <algorithm>
#include <numeric>

namespace peakmdp::testing {

GridScenario corridor(std::size_t width, double gamma,
                      const std::vector<std::tuple<std::string, std::size_t, double>>& rewards) {
    GridScenario s{width, 1, gamma, {}};
    for (const auto& [id, x, v] : rewards) s.rewards.push_back({id, x, 0, v});
    return s;
}

GraphScenario graph(std::size_t n, double gamma, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                    const std::vector<std::tuple<std::string, std::size_t, double>>& rewards) {
    GraphScenario s;
    s.num_states = n;
    s.gamma = gamma;
    for (const auto& [a, b] : edges) s.edges.push_back({a, b});
    for (const auto& [id, st, v] : rewards) s.rewards.push_back({id, st, v});
    return s;
}

std::string reward_letter(std::size_t i) { return std::string(1, static_cast<char>('A' + i)); }

namespace {

double pick_gamma(std::mt19937_64& rng) {
    static constexpr double kGammas[] = {0.8, 0.9, 0.95};
    return kGammas[std::uniform_int_distribution<std::size_t>(0, 2)(rng)];
}

std::vector<std::size_t> distinct_cells(std::mt19937_64& rng, std::size_t cells, std::size_t count) {
    std::vector<std::size_t> all(cells);
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(count);
    return all;
}

}  // namespace

GridScenario random_grid(std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> side(1, 12);
    GridScenario s;
    do {
        s.width = side(rng);
        s.height = side(rng);
    } while (s.width * s.height < 2);
    s.gamma = pick_gamma(rng);
    const std::size_t count =
        std::min<std::size_t>(std::uniform_int_distribution<std::size_t>(1, 5)(rng), s.width * s.height);
    std::uniform_real_distribution<double> value(0.1, 10.0);
    std::size_t i = 0;
    for (std::size_t cell : distinct_cells(rng, s.width * s.height, count)) {
        s.rewards.push_back({reward_letter(i++), cell % s.width, cell / s.width, value(rng)});
    }
    return s;
}

GraphScenario random_graph(std::mt19937_64& rng, std::size_t max_states) {
    GraphScenario s;
    s.num_states = std::uniform_int_distribution<std::size_t>(2, max_states)(rng);
    s.gamma = pick_gamma(rng);
    std::vector<std::size_t> order(s.num_states);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i = 0; i < order.size(); ++i) s.edges.push_back({order[i], order[(i + 1) % order.size()]});
    std::uniform_int_distribution<std::size_t> node(0, s.num_states - 1);
    const std::size_t extra = std::uniform_int_distribution<std::size_t>(0, 2 * s.num_states)(rng);
    for (std::size_t e = 0; e < extra; ++e) s.edges.push_back({node(rng), node(rng)});
    std::shuffle(s.edges.begin(), s.edges.end(), rng);
    const std::size_t count = std::min<std::size_t>(std::uniform_int_distribution<std::size_t>(1, 5)(rng), s.num_states);
    std::uniform_real_distribution<double> value(0.1, 10.0);
    std::size_t i = 0;
    for (std::size_t st : distinct_cells(rng, s.num_states, count)) s.rewards.push_back({reward_letter(i++), st, value(rng)});
    return s;
}

Instance::Instance(Scenario s) : scenario(std::move(s)), model(to_model(scenario)), peaks(solve_peaks(model)) {}

}  // namespace peakmdp::testing
