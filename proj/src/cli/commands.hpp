#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "shopscope/config.hpp"
#include "shopscope/corpus.hpp"
#include "tables.hpp"

namespace shopscope::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kData = 3, kInternal = 4 };

/// Environment variable that replaces harvest.fixture_dir.
inline constexpr const char* kFixtureDirEnv = "SHOPSCOPE_FIXTURE_DIR";

/// Artifacts written by one command, keyed by file name, with their SHA-256.
struct CommandResult {
  std::filesystem::path directory;
  std::map<std::string, std::string> outputs;
};

CommandResult cmd_harvest(const PipelineConfig& config);
CommandResult cmd_train(const PipelineConfig& config);
CommandResult cmd_sweep(const PipelineConfig& config);
CommandResult cmd_report(const PipelineConfig& config);
/// `topic` is 1-based as in the report tables.
CommandResult cmd_query(const PipelineConfig& config, int topic, int n_terms);

/// Tokenize, filter and encode a dataset exactly as train/sweep do.
EncodedCorpus corpus_from_dataset(const ShopDataset& dataset, const PipelineConfig& config);

std::filesystem::path dataset_path(const PipelineConfig& config);
std::filesystem::path model_path(const PipelineConfig& config);

/// Parses arguments, runs one subcommand, maps failures to exit codes.
int run_cli(int argc, char** argv);

}  // namespace shopscope::cli
