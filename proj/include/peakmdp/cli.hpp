#pragma once

#include "peakmdp/core.hpp"
#include "peakmdp/explain.hpp"
#include "peakmdp/peaks.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace peakmdp::cli {

enum class Verb { Validate, Solve, Explain, Map, Contributions, Path, Check };
enum class Format { Text, Json };

struct Command {
    Verb verb = Verb::Validate;
    std::string scenario_path;
    /// `x,y` on grids, a state index on general graphs.
    std::optional<std::string> state;
    Format format = Format::Text;
    PropagationMode mode = PropagationMode::Achievable;
    double budget = 1e-8;
    std::optional<std::string> ppm_path;
    std::size_t scale = 1;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitUsage = 2;

struct Output {
    int exit_code = kExitOk;
    std::string out;
    std::string err;
    /// P6 image for `map --ppm`; the caller writes it to Command::ppm_path.
    std::vector<std::uint8_t> ppm;
};

/// Parses argv (without the program name). On usage errors or --help the
/// returned Output carries the message and exit code instead of a Command.
std::variant<Command, Output> parse_command(const std::vector<std::string>& args);

Output run(const Command& command, std::string_view scenario_text);

/// Scenario file text that parses back to an equal scenario.
std::string render_scenario(const Scenario& scenario);

/**
 * One character per cell, top row first (y grows upward). Cells show the
 * lowercase first letter of the dominant peak's first reward id, uppercase on
 * that peak's own anchors, and '=' where peaks are co-dominant. Falls back to
 * a `x,y peak` table when the letters would not be unique.
 */
std::vector<std::string> render_ascii_map(const DominanceMap& map, const PeakSet& peakset,
                                          const GridScenario& scenario);

/// Fixed palette, indexed by peak id modulo its size; co-dominant cells are black.
inline constexpr std::uint8_t kPalette[][3] = {
    {230, 25, 75},  {60, 180, 75},  {0, 130, 200},   {255, 225, 25}, {245, 130, 48}, {145, 30, 180},
    {70, 240, 240}, {240, 50, 230}, {210, 245, 60},  {250, 190, 212}, {0, 128, 128}, {170, 110, 40},
};

std::vector<std::uint8_t> render_ppm_map(const DominanceMap& map, const GridScenario& scenario,
                                         std::size_t scale = 1);

}  // namespace peakmdp::cli
