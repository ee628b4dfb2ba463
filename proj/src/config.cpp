#include "shopscope/config.hpp"

#include "shopscope/error.hpp"
#include "shopscope/util.hpp"

namespace shopscope {
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(TokenizerConfig, min_len, stopwords, lemmatize, lemmas)
}  // namespace shopscope

namespace shopscope::harvest {
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ForumRules, forum, seed_url, allowed_prefixes, board_pattern,
                                                thread_pattern, post_class, username_class, signature_class)
}  // namespace shopscope::harvest

namespace shopscope {

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(HarvestSection, forums, mode, fixture_dir, record_dir, api_base,
                                                max_pages, max_depth, min_delay_ms, workers, max_retries,
                                                retry_base_delay_ms, body_cap, handle_pattern, marketplace_hosts,
                                                reserved_paths)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(CorpusSection, tokenizer, min_df, max_df_ratio)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(LdaSection, k, k_values, alpha_numerator, beta, iterations,
                                                averaging_sweeps, master_seed, workers)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(CoherenceSection, window_width, top_n, epsilon)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(TermrankSection, lambda, key_terms, samples_per_topic, query_terms,
                                                augmentations)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(StatsSection, bin_edges, flag_threshold, keywords, filler_terms,
                                                band_low, band_high)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(OutputSection, directory, dataset, model, human_readable)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(PipelineConfig, harvest, corpus, lda, coherence, termrank, stats,
                                                output)

namespace {

using nlohmann::json;

// Free-form maps whose keys are data, not schema.
bool is_map_path(const std::string& path) {
  return path == "termrank.augmentations" || path == "corpus.tokenizer.lemmas";
}

void check_known_keys(const json& given, const json& known, const std::string& path) {
  if (!given.is_object() || is_map_path(path)) return;
  for (const auto& [key, value] : given.items()) {
    const std::string child = path.empty() ? key : path + "." + key;
    if (!known.is_object() || !known.contains(key)) throw DataError("unknown config key '" + child + "'");
    check_known_keys(value, known.at(key), child);
  }
}

}  // namespace

nlohmann::json config_to_json(const PipelineConfig& config) { return config; }

PipelineConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DataError("config must be a JSON object");
  PipelineConfig config;
  try {
    config = j.get<PipelineConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("config: ") + e.what());
  }
  check_known_keys(j, config_to_json(config), "");
  if (j.contains("harvest") && j["harvest"].contains("forums")) {
    const auto& forums = j["harvest"]["forums"];
    for (std::size_t i = 0; i < forums.size(); ++i) {
      check_known_keys(forums[i], json(harvest::ForumRules{}), "harvest.forums[" + std::to_string(i) + "]");
    }
  }
  return config;
}

std::string serialize_config(const PipelineConfig& config) { return config_to_json(config).dump(2) + "\n"; }

PipelineConfig parse_config(const std::string& text, const std::string& source_name) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(source_name + ": " + e.what());
  }
  try {
    return config_from_json(j);
  } catch (const DataError& e) {
    throw DataError(source_name + ": " + e.what());
  }
}

PipelineConfig load_config(const std::filesystem::path& path) { return parse_config(read_file(path), path.string()); }

std::string config_hash(const PipelineConfig& config) { return sha256_hex(config_to_json(config).dump()); }

void apply_override(PipelineConfig& config, const std::string& key, const std::string& value) {
  json j = config_to_json(config);
  std::string pointer;
  for (std::size_t pos = 0; pos <= key.size();) {
    const auto dot = key.find('.', pos);
    pointer += "/" + key.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
    if (dot == std::string::npos) break;
    pos = dot + 1;
  }
  const json::json_pointer ptr(pointer);
  if (!j.contains(ptr)) throw ConfigError("unknown config key '" + key + "'");
  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::parse_error&) {
    parsed = value;
  }
  j[ptr] = parsed;
  try {
    config = config_from_json(j);
  } catch (const DataError& e) {
    throw ConfigError("override " + key + "=" + value + ": " + e.what());
  }
}

}  // namespace shopscope
