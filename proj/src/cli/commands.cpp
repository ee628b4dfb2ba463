#include "commands.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <optional>

#include "shopscope/coherence.hpp"
#include "shopscope/error.hpp"
#include "shopscope/harvest/fetch.hpp"
#include "shopscope/harvest/harvest.hpp"
#include "shopscope/lda.hpp"
#include "shopscope/market_stats.hpp"
#include "shopscope/termrank.hpp"
#include "shopscope/util.hpp"

namespace shopscope::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class Outputs {
 public:
  explicit Outputs(const PipelineConfig& config) : config_(config), human_(config.output.human_readable) {
    result_.directory = config.output.directory;
  }

  void write(const std::string& name, const std::string& content) {
    atomic_write(result_.directory / name, content);
    result_.outputs[name] = sha256_hex(content);
    spdlog::debug("wrote {}", (result_.directory / name).string());
  }

  void table(const std::string& stem, const Table& t) {
    write(stem + ".tsv", t.to_tsv());
    if (human_) write(stem + ".txt", t.to_text());
  }

  /// Reads an input file and remembers its hash for the manifest.
  std::string input(const fs::path& path) {
    if (!fs::exists(path)) throw DataError("missing input: " + path.string());
    std::string content = read_file(path);
    inputs_[path.string()] = sha256_hex(content);
    return content;
  }

  CommandResult finish(const std::string& command, json seeds) {
    json m;
    m["command"] = command;
    m["manifest_version"] = 1;
    m["config_hash"] = config_hash(config_);
    m["config"] = config_to_json(config_);
    m["seeds"] = std::move(seeds);
    m["inputs"] = inputs_;
    m["outputs"] = result_.outputs;
    m["created_at"] = format_utc(utc_now());
    atomic_write(result_.directory / ("manifest_" + command + ".json"), m.dump(2) + "\n");
    spdlog::info("{}: {} outputs in {}", command, result_.outputs.size(), result_.directory.string());
    return result_;
  }

 private:
  const PipelineConfig& config_;
  bool human_;
  CommandResult result_;
  std::map<std::string, std::string> inputs_;
};

ShopDataset load_dataset(const PipelineConfig& config, Outputs& out) {
  const fs::path path = dataset_path(config);
  ShopDataset dataset = parse_jsonl(out.input(path), path.string());
  if (dataset.empty() || dataset.product_count() == 0) throw DataError(path.string() + ": dataset is empty");
  return dataset;
}

lda::LdaModel load_model_checked(const PipelineConfig& config, const EncodedCorpus& corpus, Outputs& out) {
  const fs::path path = model_path(config);
  lda::LdaModel model = lda::deserialize_model(out.input(path), path.string());
  if (model.vocabulary_hash != corpus.vocabulary.hash() ||
      model.documents() != static_cast<Eigen::Index>(corpus.documents.size())) {
    throw DataError(path.string() + ": model was not trained on this dataset and corpus configuration");
  }
  return model;
}

Tokenizer make_tokenizer(const PipelineConfig& config) { return Tokenizer(config.corpus.tokenizer); }

void write_corpus_files(const EncodedCorpus& corpus, Outputs& out) {
  out.write("vocab.tsv", vocabulary_to_tsv(corpus.vocabulary));
  out.write("docs.txt", documents_to_text(corpus));
}

void write_distributions(const lda::LdaModel& model, const EncodedCorpus& corpus, Outputs& out) {
  const auto dist = lda::distributions(model);
  Table phi{"phi/v1", {"topic"}, {}};
  for (const auto& term : corpus.vocabulary.terms()) phi.columns.push_back(term);
  for (Eigen::Index k = 0; k < dist.phi.rows(); ++k) {
    std::vector<std::string> row{std::to_string(k + 1)};
    for (Eigen::Index w = 0; w < dist.phi.cols(); ++w) row.push_back(exact(dist.phi(k, w)));
    phi.add(std::move(row));
  }
  out.table("phi", phi);

  Table theta{"theta/v1", {"shop"}, {}};
  for (Eigen::Index k = 0; k < dist.theta.cols(); ++k) theta.columns.push_back("topic_" + std::to_string(k + 1));
  for (Eigen::Index d = 0; d < dist.theta.rows(); ++d) {
    std::vector<std::string> row{corpus.documents[static_cast<std::size_t>(d)].shop_handle};
    for (Eigen::Index k = 0; k < dist.theta.cols(); ++k) row.push_back(exact(dist.theta(d, k)));
    theta.add(std::move(row));
  }
  out.table("theta", theta);
}

harvest::HarvestOptions harvest_options(const PipelineConfig& config, bool fixtures) {
  const auto& h = config.harvest;
  if (h.forums.empty()) throw ConfigError("harvest.forums is empty");
  harvest::HarvestOptions opts;
  opts.forums = h.forums;
  opts.limits.max_pages = h.max_pages;
  opts.limits.max_depth = h.max_depth;
  opts.limits.workers = h.workers;
  opts.limits.min_delay = std::chrono::milliseconds(h.min_delay_ms >= 0 ? h.min_delay_ms : (fixtures ? 0 : 1000));
  opts.retry.max_retries = h.max_retries;
  opts.retry.base_delay = std::chrono::milliseconds(h.retry_base_delay_ms);
  // Replayed responses never change, so waiting between retries gains nothing.
  if (fixtures) opts.retry.sleep = [](std::chrono::milliseconds) {};
  opts.grammar = harvest::HandleGrammar(h.handle_pattern);
  opts.market.hosts = h.marketplace_hosts;
  opts.market.reserved_paths = h.reserved_paths;
  return opts;
}

Table summary_table(const harvest::HarvestSummary& s) {
  Table t{"harvest_summary/v1", {"source", "collected", "valid", "unknown"}, {}};
  for (const auto& row : s.rows) {
    t.add({row.forum + " - " + std::string(harvest::to_string(row.source)), std::to_string(row.collected),
           std::to_string(row.valid), std::to_string(row.unknown)});
  }
  t.add({"Total (unique)", std::to_string(s.collected_unique), std::to_string(s.valid_unique),
         std::to_string(s.unknown_unique)});
  return t;
}

Table issues_table(const harvest::HarvestOutput& h) {
  Table t{"harvest_issues/v1", {"kind", "subject", "detail"}, {}};
  for (const auto& p : h.skipped_pages) t.add({"skipped_page", p.url, p.reason});
  for (const auto& handle : h.validation.invalid) t.add({"invalid_handle", handle, ""});
  for (const auto& handle : h.validation.unknown) t.add({"unknown_handle", handle, "retries exhausted"});
  for (const auto& handle : h.gone) t.add({"gone_shop", handle, ""});
  for (const auto& d : h.diagnostics) t.add({"diagnostic", "", d});
  return t;
}

std::string category_name(Category c) { return std::string(to_string(c)); }

Table cdf_table(const std::string& schema, std::vector<double> values) {
  Table t{schema, {"x", "F"}, {}};
  for (const auto& p : stats::empirical_cdf(std::move(values))) t.add({exact(p.x), fixed(p.f, 9)});
  return t;
}

void write_market_tables(const ShopDataset& dataset, const PipelineConfig& config, Outputs& out) {
  const auto counts = stats::category_counts(dataset);
  Table cats{"category_counts/v1", {"category", "count", "fraction"}, {}};
  for (Category c : kCategories) {
    cats.add({category_name(c), std::to_string(counts[c]),
              fixed(counts.total ? static_cast<double>(counts[c]) / counts.total : 0.0, 6)});
  }
  cats.add({"total", std::to_string(counts.total), fixed(counts.total ? 1.0 : 0.0, 6)});
  out.table("category_counts", cats);

  out.table("items_per_shop_cdf", cdf_table("items_per_shop_cdf/v1", stats::items_per_shop(dataset)));
  const auto all_prices = stats::prices(dataset);
  out.table("price_cdf", cdf_table("price_cdf/v1", all_prices));

  Table fit{"lognormal_fit/v1", {"mu", "sigma", "n_used", "n_excluded", "status"}, {}};
  try {
    const auto f = stats::fit_lognormal(all_prices);
    fit.add({fixed(f.mu, 6), fixed(f.sigma, 6), std::to_string(f.n_used), std::to_string(f.n_excluded), "ok"});
  } catch (const InsufficientDataError& e) {
    spdlog::warn("lognormal fit skipped: {}", e.what());
    fit.add({"", "", "", "", "insufficient_data"});
  }
  out.table("lognormal_fit", fit);

  const auto s = stats::price_stats(all_prices, config.stats.band_low, config.stats.band_high);
  Table summary{"price_summary/v1", {"count", "median", "max", "band_low", "band_high", "band_fraction"}, {}};
  summary.add({std::to_string(s.count), exact(s.median), exact(s.max), exact(s.band_low), exact(s.band_high),
               fixed(s.band_fraction, 6)});
  out.table("price_summary", summary);

  const auto bins = stats::price_bins(dataset, config.stats.bin_edges);
  Table b{"price_bins/v1", {"lower", "upper", "account", "service", "file", "total", "account_fraction",
                            "service_fraction", "file_fraction"}, {}};
  for (const auto& bin : bins.bins) {
    b.add({exact(bin.lower), exact(bin.upper), std::to_string(bin.counts.at(Category::account)),
           std::to_string(bin.counts.at(Category::service)), std::to_string(bin.counts.at(Category::file)),
           std::to_string(bin.total), fixed(bin.fraction(Category::account), 6),
           fixed(bin.fraction(Category::service), 6), fixed(bin.fraction(Category::file), 6)});
  }
  out.table("price_bins", b);

  stats::FalseProductRules rules;
  rules.price_threshold = config.stats.flag_threshold;
  rules.keywords = config.stats.keywords;
  rules.filler_terms = config.stats.filler_terms;
  Table flagged{"false_products/v1", {"shop", "title", "price_usd", "category", "rule"}, {}};
  for (const auto& f : stats::flag_false_products(dataset, rules)) {
    flagged.add({f.shop_handle, f.product.title, exact(f.product.price_usd), category_name(f.product.category), f.rule});
  }
  out.table("false_products", flagged);
}

std::vector<std::string> terms_of(const std::vector<termrank::TermScore>& ranked, int n) {
  std::vector<std::string> out;
  for (const auto& t : ranked) {
    if (static_cast<int>(out.size()) >= n) break;
    out.push_back(t.term);
  }
  return out;
}

lda::LdaHyperparams train_hyperparams(const PipelineConfig& config) {
  const auto& l = config.lda;
  auto hp = lda::LdaHyperparams::with_alpha_rule(l.k, l.alpha_numerator);
  hp.beta = l.beta;
  hp.iterations = l.iterations;
  hp.averaging_sweeps = l.averaging_sweeps;
  hp.seed = coherence::seed_for_k(l.master_seed, l.k);
  return hp;
}

}  // namespace

fs::path dataset_path(const PipelineConfig& config) {
  return config.output.dataset.empty() ? fs::path(config.output.directory) / "dataset.jsonl"
                                       : fs::path(config.output.dataset);
}

fs::path model_path(const PipelineConfig& config) {
  return config.output.model.empty() ? fs::path(config.output.directory) / "model.json" : fs::path(config.output.model);
}

EncodedCorpus corpus_from_dataset(const ShopDataset& dataset, const PipelineConfig& config) {
  const auto docs = build_documents(dataset, make_tokenizer(config));
  for (const auto& handle : docs.dropped_empty) spdlog::debug("shop {} has no usable title tokens", handle);
  VocabularyOptions vopts;
  vopts.min_df = config.corpus.min_df;
  vopts.max_df_ratio = config.corpus.max_df_ratio;
  auto vocabulary = build_vocabulary(docs.documents, vopts);
  auto corpus = encode(docs.documents, vocabulary);
  spdlog::info("corpus: {} documents, {} terms, {} tokens", corpus.documents.size(), corpus.vocabulary.size(),
               corpus.token_count());
  return corpus;
}

CommandResult cmd_harvest(const PipelineConfig& config) {
  Outputs out(config);
  const auto& h = config.harvest;
  harvest::HarvestOutput result;
  if (h.mode == "fixture") {
    const fs::path dir = h.fixture_dir;
    out.input(dir / "index.json");
    auto store = harvest::FixtureStore::load(dir);
    harvest::FixtureFetcher fetcher(std::move(store), h.body_cap);
    harvest::ApiShopClient client(fetcher, h.api_base);
    result = harvest::run_harvest(harvest_options(config, true), fetcher, client);
  } else if (h.mode == "live") {
    harvest::HttpFetcher::Options hopts;
    hopts.body_cap = h.body_cap;
    harvest::HttpFetcher http(hopts);
    if (h.record_dir.empty()) {
      harvest::ApiShopClient client(http, h.api_base);
      result = harvest::run_harvest(harvest_options(config, false), http, client);
    } else {
      harvest::FixtureStore store(h.record_dir);
      harvest::RecordingFetcher recorder(http, store);
      harvest::ApiShopClient client(recorder, h.api_base);
      result = harvest::run_harvest(harvest_options(config, false), recorder, client);
      store.save();
    }
  } else {
    throw ConfigError("harvest.mode must be \"fixture\" or \"live\", got \"" + h.mode + "\"");
  }

  out.write("dataset.jsonl", to_jsonl(result.dataset));
  out.write("harvest_records.jsonl", harvest::records_to_jsonl(result.records));
  out.table("harvest_summary", summary_table(result.summary));
  out.table("harvest_issues", issues_table(result));
  spdlog::info("harvest: {} records, {} valid shops, {} products", result.records.size(),
               result.validation.valid.size(), result.dataset.product_count());
  return out.finish("harvest", json::object());
}

CommandResult cmd_train(const PipelineConfig& config) {
  Outputs out(config);
  const auto dataset = load_dataset(config, out);
  const auto corpus = corpus_from_dataset(dataset, config);
  const auto hp = train_hyperparams(config);
  hp.validate();
  spdlog::info("train: k={} alpha={} beta={} iterations={}", hp.k, hp.alpha, hp.beta, hp.iterations);
  const auto model = lda::train(corpus, hp, [](const lda::GibbsSampler& s) {
    if (s.sweeps_done() % 100 == 0) spdlog::debug("sweep {}", s.sweeps_done());
  });
  write_corpus_files(corpus, out);
  out.write("model.json", lda::serialize_model(model));
  write_distributions(model, corpus, out);
  return out.finish("train", json{{"master_seed", config.lda.master_seed}, {"k", hp.k}, {"lda_seed", hp.seed}});
}

CommandResult cmd_sweep(const PipelineConfig& config) {
  Outputs out(config);
  const auto dataset = load_dataset(config, out);
  const auto corpus = corpus_from_dataset(dataset, config);
  coherence::SweepOptions opts;
  opts.k_values = config.lda.k_values;
  opts.alpha_numerator = config.lda.alpha_numerator;
  opts.beta = config.lda.beta;
  opts.iterations = config.lda.iterations;
  opts.averaging_sweeps = config.lda.averaging_sweeps;
  opts.master_seed = config.lda.master_seed;
  opts.top_n = config.coherence.top_n;
  opts.epsilon = config.coherence.epsilon;
  opts.workers = config.lda.workers;
  const auto stats = coherence::build_window_stats(corpus, config.coherence.window_width);
  spdlog::info("sweep: {} values of k, {} windows", opts.k_values.size(), stats.total_windows());
  const auto result = coherence::select_k(corpus, opts, stats);

  Table cv{"coherence/v1", {"k", "cv", "seed"}, {}};
  Table per_topic{"coherence_topics/v1", {"k", "topic", "cv"}, {}};
  json seeds{{"master_seed", config.lda.master_seed}, {"per_k", json::object()}};
  for (const auto& e : result.report.entries) {
    cv.add({std::to_string(e.k), fixed(e.cv, 6), std::to_string(e.seed)});
    for (std::size_t t = 0; t < e.per_topic.size(); ++t) {
      per_topic.add({std::to_string(e.k), std::to_string(t + 1), fixed(e.per_topic[t], 6)});
    }
    seeds["per_k"][std::to_string(e.k)] = e.seed;
  }
  seeds["best_k"] = result.report.best_k;
  spdlog::info("sweep: best k={}", result.report.best_k);
  write_corpus_files(corpus, out);
  out.table("coherence", cv);
  out.table("coherence_topics", per_topic);
  out.write("coherence.json", result.report.to_json().dump(2) + "\n");
  out.write("model.json", lda::serialize_model(result.best_model));
  write_distributions(result.best_model, corpus, out);
  return out.finish("sweep", seeds);
}

CommandResult cmd_report(const PipelineConfig& config) {
  Outputs out(config);
  const auto dataset = load_dataset(config, out);
  const auto corpus = corpus_from_dataset(dataset, config);
  const auto model = load_model_checked(config, corpus, out);
  const auto dist = lda::distributions(model);
  const auto dominant = lda::dominant_topic_counts(dist.theta);
  const Eigen::VectorXd term_probs = termrank::term_probabilities(corpus);
  const int n_terms = config.termrank.key_terms;

  Table topics{"topics/v1", {"topic", "documents", "key_terms", "key_terms_phi"}, {}};
  std::vector<std::vector<std::string>> key_terms;
  for (int k = 0; k < model.topics(); ++k) {
    key_terms.push_back(terms_of(
        termrank::relevance(dist.phi, term_probs, k, config.termrank.lambda, &corpus.vocabulary), n_terms));
    const auto by_phi = terms_of(termrank::relevance(dist.phi, term_probs, k, 1.0, &corpus.vocabulary), n_terms);
    topics.add({std::to_string(k + 1), std::to_string(dominant[static_cast<std::size_t>(k)]),
                join(key_terms.back(), " "), join(by_phi, " ")});
  }
  out.table("topics", topics);

  Table samples{"samples/v1", {"topic", "shop", "title", "price_usd", "topic_terms"}, {}};
  for (const auto& s : termrank::sample_products(dataset, corpus, dist.theta, key_terms, make_tokenizer(config),
                                                 config.termrank.samples_per_topic)) {
    samples.add({std::to_string(s.topic + 1), s.shop_handle, s.title, exact(s.price_usd), std::to_string(s.topic_terms)});
  }
  out.table("samples", samples);

  write_market_tables(dataset, config, out);
  return out.finish("report", json{{"master_seed", config.lda.master_seed}, {"lda_seed", model.hyperparams.seed}});
}

CommandResult cmd_query(const PipelineConfig& config, int topic, int n_terms) {
  Outputs out(config);
  const auto dataset = load_dataset(config, out);
  const auto corpus = corpus_from_dataset(dataset, config);
  const auto model = load_model_checked(config, corpus, out);
  if (topic < 1 || topic > model.topics()) {
    throw ConfigError("topic must be in 1.." + std::to_string(model.topics()) + ", got " + std::to_string(topic));
  }
  if (n_terms < 1) throw ConfigError("n_terms must be positive");

  const auto terms = termrank::top_salient_terms(model, corpus, topic - 1, n_terms);
  std::vector<std::string> augment;
  for (const auto& term : terms) {
    const auto it = config.termrank.augmentations.find(term);
    if (it != config.termrank.augmentations.end()) augment.insert(augment.end(), it->second.begin(), it->second.end());
  }
  spdlog::info("query topic {}: {}{}{}", topic, join(terms, ", "), augment.empty() ? "" : " + ", join(augment, ", "));

  const std::string stem = "query_topic" + std::to_string(topic);
  Table term_table{"query_terms/v1", {"rank", "term", "augmented"}, {}};
  int rank = 0;
  for (const auto& t : terms) term_table.add({std::to_string(++rank), t, "no"});
  for (const auto& t : augment) term_table.add({std::to_string(++rank), t, "yes"});
  out.table(stem + "_terms", term_table);

  Table listing{"query_products/v1", {"title", "records", "price_usd", "category", "shop", "matched_terms"}, {}};
  for (const auto& m : termrank::query_products(dataset, terms, augment, make_tokenizer(config))) {
    listing.add({m.product.title, m.record_count ? std::to_string(*m.record_count) : "",
                 exact(m.product.price_usd), category_name(m.product.category), m.shop_handle,
                 join(m.matched_terms, " ")});
  }
  out.table(stem, listing);
  return out.finish("query", json{{"master_seed", config.lda.master_seed}, {"topic", topic}, {"n_terms", n_terms}});
}

int run_cli(int argc, char** argv) {
  CLI::App app{"shopscope: forum-to-marketplace harvesting, topic modelling and market statistics"};
  app.fallthrough();
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::vector<std::string> sets;
  bool verbose = false;
  bool quiet = false;
  app.add_option("--config", config_path, "pipeline config (JSON)")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "master seed (lda.master_seed)");
  app.add_option("--out", out_dir, "output directory (output.directory)");
  app.add_option("--set", sets, "override a config key, e.g. --set lda.iterations=200")->allow_extra_args(false);
  app.add_flag("-v,--verbose", verbose, "debug logging");
  app.add_flag("-q,--quiet", quiet, "warnings and errors only");

  std::string fixtures;
  std::string mode;
  auto* harvest_cmd = app.add_subcommand("harvest", "crawl forums, validate handles, fetch shop listings");
  harvest_cmd->add_option("--fixtures", fixtures, "fixture directory (harvest.fixture_dir)");
  harvest_cmd->add_option("--mode", mode, "fixture or live (harvest.mode)");

  std::string dataset;
  std::string model;
  std::optional<int> k;
  std::optional<int> iterations;
  std::vector<int> k_values;
  auto* train_cmd = app.add_subcommand("train", "fit LDA at a single k");
  train_cmd->add_option("--dataset", dataset, "input dataset (output.dataset)");
  train_cmd->add_option("--k", k, "number of topics (lda.k)");
  train_cmd->add_option("--iterations", iterations, "Gibbs sweeps (lda.iterations)");

  auto* sweep_cmd = app.add_subcommand("sweep", "fit LDA over a range of k and keep the most coherent");
  sweep_cmd->add_option("--dataset", dataset, "input dataset (output.dataset)");
  sweep_cmd->add_option("--k-values", k_values, "comma-separated k values (lda.k_values)")->delimiter(',');
  sweep_cmd->add_option("--iterations", iterations, "Gibbs sweeps (lda.iterations)");

  auto* report_cmd = app.add_subcommand("report", "topic, sample product and market statistics tables");
  report_cmd->add_option("--dataset", dataset, "input dataset (output.dataset)");
  report_cmd->add_option("--model", model, "input model (output.model)");

  int topic = 0;
  std::optional<int> n_terms;
  auto* query_cmd = app.add_subcommand("query", "list products matching a topic's most salient terms");
  query_cmd->add_option("--dataset", dataset, "input dataset (output.dataset)");
  query_cmd->add_option("--model", model, "input model (output.model)");
  query_cmd->add_option("--topic", topic, "topic number as shown in topics.tsv")->required();
  query_cmd->add_option("--n-terms", n_terms, "salient terms to query (termrank.query_terms)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  auto logger = std::make_shared<spdlog::logger>("shopscope", std::make_shared<spdlog::sinks::stderr_color_sink_mt>());
  logger->set_level(verbose ? spdlog::level::debug : quiet ? spdlog::level::warn : spdlog::level::info);
  logger->set_pattern("[%H:%M:%S] [%^%l%$] %v");
  spdlog::set_default_logger(logger);

  try {
    PipelineConfig config = config_path.empty() ? PipelineConfig{} : load_config(config_path);
    if (const char* env = std::getenv(kFixtureDirEnv); env && *env) config.harvest.fixture_dir = env;
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + s + "'");
      apply_override(config, s.substr(0, eq), s.substr(eq + 1));
    }
    if (seed) config.lda.master_seed = *seed;
    if (!out_dir.empty()) config.output.directory = out_dir;
    if (!fixtures.empty()) config.harvest.fixture_dir = fixtures;
    if (!mode.empty()) config.harvest.mode = mode;
    if (!dataset.empty()) config.output.dataset = dataset;
    if (!model.empty()) config.output.model = model;
    if (k) config.lda.k = *k;
    if (iterations) config.lda.iterations = *iterations;
    if (!k_values.empty()) config.lda.k_values = k_values;

    if (harvest_cmd->parsed()) {
      cmd_harvest(config);
    } else if (train_cmd->parsed()) {
      cmd_train(config);
    } else if (sweep_cmd->parsed()) {
      cmd_sweep(config);
    } else if (report_cmd->parsed()) {
      cmd_report(config);
    } else if (query_cmd->parsed()) {
      cmd_query(config, topic, n_terms.value_or(config.termrank.query_terms));
    }
    return kOk;
  } catch (const ConfigError& e) {
    spdlog::error("{}", e.what());
    return kUsage;
  } catch (const DataError& e) {
    spdlog::error("{}", e.what());
    return kData;
  } catch (const TransportError& e) {
    spdlog::error("{}", e.what());
    return kData;
  } catch (const std::exception& e) {
    spdlog::critical("internal error: {}", e.what());
    return kInternal;
  }
}

}  // namespace shopscope::cli
