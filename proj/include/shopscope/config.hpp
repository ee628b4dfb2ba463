#pragma once

#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <map>
#include <string>
#include <vector>

#include "shopscope/corpus.hpp"
#include "shopscope/harvest/crawl.hpp"

namespace shopscope {

struct HarvestSection {
  std::vector<harvest::ForumRules> forums;
  std::string mode = "fixture";  ///< "fixture" or "live"
  std::string fixture_dir = "fixtures/forum";
  std::string record_dir;  ///< live mode only: also record responses here
  std::string api_base = "https://shoppy.gg/api/v1";
  std::size_t max_pages = 10000;
  std::size_t max_depth = 32;
  std::int64_t min_delay_ms = -1;  ///< -1: 1000 ms live, 0 ms fixtures
  std::size_t workers = 1;
  int max_retries = 3;
  std::int64_t retry_base_delay_ms = 200;
  std::size_t body_cap = 8u << 20;
  std::string handle_pattern = "[a-z0-9._-]{1,64}";
  std::vector<std::string> marketplace_hosts{"shoppy.gg", "www.shoppy.gg"};
  std::vector<std::string> reserved_paths{"api", "product", "products", "login", "register", "dashboard",
                                          "terms", "privacy", "faq", "blog", "feedback", "contact"};
};

struct CorpusSection {
  TokenizerConfig tokenizer;
  std::int64_t min_df = 2;
  double max_df_ratio = 0.5;
};

struct LdaSection {
  int k = 20;
  std::vector<int> k_values{5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
  double alpha_numerator = 5.0;  ///< alpha = alpha_numerator / k
  double beta = 0.01;
  int iterations = 1000;
  int averaging_sweeps = 0;
  std::uint64_t master_seed = 0;
  std::size_t workers = 0;
};

struct CoherenceSection {
  int window_width = 110;
  int top_n = 20;
  double epsilon = 1e-12;
};

struct TermrankSection {
  double lambda = 0.6;
  int key_terms = 20;
  int samples_per_topic = 3;
  int query_terms = 3;
  std::map<std::string, std::vector<std::string>> augmentations{{"database", {"db"}}};
};

struct StatsSection {
  std::vector<double> bin_edges{0, 1, 5, 10, 50, 100, 500};
  double flag_threshold = 500.0;
  std::vector<std::string> keywords{"terms of service", "discord", "telegram", "read before buying", "contact",
                                    "support"};
  std::vector<std::string> filler_terms{"buy", "dont", "don", "do", "not", "me", "here", "click", "info",
                                        "information", "important", "notice", "note", "please", "read", "service",
                                        "services", "shop", "store", "join", "server", "link", "links", "new",
                                        "warranty", "general", "feedback", "vouch", "vouches", "tos"};
  double band_low = 1.0;
  double band_high = 10.0;
};

struct OutputSection {
  std::string directory = "out";
  std::string dataset;  ///< input dataset; defaults to <directory>/dataset.jsonl
  std::string model;    ///< input model; defaults to <directory>/model.json
  bool human_readable = true;
};

struct PipelineConfig {
  HarvestSection harvest;
  CorpusSection corpus;
  LdaSection lda;
  CoherenceSection coherence;
  TermrankSection termrank;
  StatsSection stats;
  OutputSection output;
};

nlohmann::json config_to_json(const PipelineConfig& config);
/// Missing keys take defaults; unknown keys raise DataError naming the key path.
PipelineConfig config_from_json(const nlohmann::json& j);
std::string serialize_config(const PipelineConfig& config);
PipelineConfig parse_config(const std::string& text, const std::string& source_name = "<config>");
PipelineConfig load_config(const std::filesystem::path& path);
std::string config_hash(const PipelineConfig& config);

/// Sets a dotted key (e.g. "lda.k") from a value string. The value is parsed as JSON
/// when possible and taken as a plain string otherwise.
void apply_override(PipelineConfig& config, const std::string& key, const std::string& value);

}  // namespace shopscope
