#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace jcdm::cli {

using json = nlohmann::json;

// exit codes
constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int run(const std::vector<std::string>& args);
int run(int argc, const char* const* argv);

// Runs one resolved configuration, writing artifacts into out.
// Returns a small summary object; file names are appended to outputs.
json execute(const json& config, const std::filesystem::path& out, std::vector<std::string>& outputs);

// JCDM_THREADS if set, else the hardware concurrency
int default_threads();

}  // namespace jcdm::cli
