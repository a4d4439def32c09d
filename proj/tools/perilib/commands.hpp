#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace perilib::cli {

enum ExitCode { kOk = 0, kConfig = 2, kNumerical = 3, kIo = 4 };

// Writes path.tmp then renames it onto path.
void write_atomic(const std::string& path, const std::string& content);

struct CommandResult {
    std::vector<std::string> files;
    std::string summary;
};

CommandResult cmd_portrait(const ExperimentConfig& cfg, const std::vector<double>& eps);
CommandResult cmd_verify_renorm(const ExperimentConfig& cfg, const std::vector<double>& eps);
// state: "auto" or four comma-separated numbers; T: a duration or "auto".
CommandResult cmd_evolve(const ExperimentConfig& cfg, const std::string& chart, const std::string& state,
                         const std::string& T);
CommandResult cmd_check_theorem(const ExperimentConfig& cfg, std::optional<double> N);
CommandResult cmd_normalform(const ExperimentConfig& cfg, std::optional<int> N);

// Full command line: parses, dispatches, maps exceptions to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace perilib::cli
