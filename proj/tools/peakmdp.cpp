#include "peakmdp/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
    using namespace peakmdp::cli;
    const std::vector<std::string> args(argv + 1, argv + argc);
    auto parsed = parse_command(args);
    if (auto* early = std::get_if<Output>(&parsed)) {
        std::cout << early->out;
        std::cerr << early->err;
        return early->exit_code;
    }
    const auto& command = std::get<Command>(parsed);

    std::ifstream file(command.scenario_path, std::ios::binary);
    if (!file) {
        std::cerr << "error: cannot read scenario '" << command.scenario_path << "'\n";
        return kExitUsage;
    }
    std::ostringstream text;
    text << file.rdbuf();

    const auto result = run(command, text.str());
    std::cout << result.out;
    std::cerr << result.err;
    if (command.ppm_path && !result.ppm.empty()) {
        std::ofstream image(*command.ppm_path, std::ios::binary);
        image.write(reinterpret_cast<const char*>(result.ppm.data()), static_cast<std::streamsize>(result.ppm.size()));
        if (!image) {
            std::cerr << "error: cannot write '" << *command.ppm_path << "'\n";
            return kExitUsage;
        }
    }
    return result.exit_code;
}
