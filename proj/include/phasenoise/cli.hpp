#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace phasenoise::cli {

enum ExitCode : int {
  kSuccess = 0,
  kConfigError = 2,
  kInconsistent = 3,
};

struct Options {
  std::string command;  // transduce | simulate | calibrate | budget
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> out;
  std::optional<std::filesystem::path> bundle;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  bool sweep_power = false;
};

/// Runs one subcommand; maps failures to exit codes and writes diagnostics to err.
int run(const Options& options, std::ostream& out, std::ostream& err);

/// argv front end.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace phasenoise::cli
