#pragma once

#include <filesystem>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace coagfrag::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CliConfig {
  std::string command;
  nlohmann::json params = nlohmann::json::object();
  std::string format = "csv";
};

const std::vector<std::string>& commands();

// Checks the command name, the allowed and required keys, and value types.
void validate(const CliConfig& config);

// Merges an optional --config JSON file with flags; flags win.
CliConfig parse_arguments(int argc, const char* const* argv);

// Runs the experiment, writes its artifact, and prints a one-line JSON summary to out.
int dispatch(const CliConfig& config, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Writes through a sibling temporary file and renames it into place.
void write_atomically(const std::filesystem::path& path, const std::string& content);

}  // namespace coagfrag::cli
