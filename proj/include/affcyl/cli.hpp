#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "affcyl/classify.hpp"
#include "affcyl/spec.hpp"

namespace affcyl {

inline constexpr int kExitParse = 1;
inline constexpr int kExitCorpusMismatch = 5;

struct RunConfig {
  ClassifyConfig classify;
  int samples = 8;
  std::string format = "json"; // json | csv
};

struct CommandResult {
  std::string output;
  int exit_code = 0;
};

/// Parse a spec file. Throws ParseError carrying "path:line:column: message".
SpecDocument load_spec_file(const std::filesystem::path& path);

CommandResult cmd_analyze(const std::filesystem::path& input, const RunConfig& cfg);
/// Inputs are classified concurrently; outputs keep input order. The exit
/// code is the largest over inputs.
CommandResult cmd_classify(const std::vector<std::filesystem::path>& inputs, const RunConfig& cfg);
CommandResult cmd_corpus_gen(std::uint64_t seed, const std::filesystem::path& out_dir);
/// Re-classifies every entry and compares with its expectations.
CommandResult cmd_corpus_verify(const std::filesystem::path& dir, const RunConfig& cfg);

int run_cli(int argc, char** argv);

} // namespace affcyl
