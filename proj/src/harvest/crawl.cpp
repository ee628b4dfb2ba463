#include "shopscope/harvest/crawl.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <regex>
#include <set>
#include <thread>

#include "shopscope/error.hpp"
#include "shopscope/harvest/url.hpp"

namespace shopscope::harvest {

std::string_view to_string(RecordSource s) {
  return s == RecordSource::forum_username ? "usernames" : "signatures";
}

namespace {

using Clock = std::chrono::steady_clock;

struct PageOutcome {
  std::optional<FetchResponse> response;
  std::string error;
};

/// Per-host politeness: a host's requests run on one worker, in order, spaced by min_delay.
class PoliteFetcher {
 public:
  PoliteFetcher(Fetcher& fetcher, std::chrono::milliseconds min_delay) : fetcher_(fetcher), min_delay_(min_delay) {}

  PageOutcome fetch(const std::string& url, const std::string& host) {
    Clock::time_point ready;
    {
      std::lock_guard lock(mutex_);
      const auto it = last_.find(host);
      ready = it == last_.end() ? Clock::now() : it->second + min_delay_;
    }
    std::this_thread::sleep_until(ready);
    {
      std::lock_guard lock(mutex_);
      last_[host] = Clock::now();
    }
    PageOutcome out;
    try {
      out.response = fetcher_.fetch(FetchRequest{url, {}});
    } catch (const TransportError& e) {
      out.error = e.what();
    }
    return out;
  }

 private:
  Fetcher& fetcher_;
  std::chrono::milliseconds min_delay_;
  std::mutex mutex_;
  std::map<std::string, Clock::time_point> last_;
};

std::vector<PageOutcome> fetch_level(const std::vector<std::string>& urls, PoliteFetcher& polite, std::size_t workers) {
  std::map<std::string, std::vector<std::size_t>> by_host;
  for (std::size_t i = 0; i < urls.size(); ++i) {
    const auto url = parse_url(urls[i]);
    by_host[url ? url->authority() : std::string{}].push_back(i);
  }
  std::vector<std::pair<std::string, std::vector<std::size_t>>> groups(by_host.begin(), by_host.end());
  std::vector<PageOutcome> outcomes(urls.size());
  std::atomic<std::size_t> next{0};
  const auto run = [&] {
    for (std::size_t g = next++; g < groups.size(); g = next++) {
      for (const auto idx : groups[g].second) outcomes[idx] = polite.fetch(urls[idx], groups[g].first);
    }
  };
  const std::size_t n_threads = std::min(std::max<std::size_t>(workers, 1), groups.size());
  if (n_threads <= 1) {
    run();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(run);
  }
  return outcomes;
}

// Elements with class `cls` under `post`, not descending into posts nested by broken markup.
void own_by_class(const HtmlNode& node, const ForumRules& rules, const std::string& cls,
                  std::vector<const HtmlNode*>& out) {
  for (const auto& child : node.children) {
    if (child.is_text() || child.has_class(rules.post_class)) continue;
    if (child.has_class(cls)) out.push_back(&child);
    own_by_class(child, rules, cls, out);
  }
}

std::vector<const HtmlNode*> own_by_class(const HtmlNode& post, const ForumRules& rules, const std::string& cls) {
  std::vector<const HtmlNode*> out;
  own_by_class(post, rules, cls, out);
  return out;
}

bool allowed(const std::string& url, const ForumRules& rules) {
  if (rules.allowed_prefixes.empty()) return true;
  return std::any_of(rules.allowed_prefixes.begin(), rules.allowed_prefixes.end(),
                     [&](const std::string& p) { return url.starts_with(p); });
}

}  // namespace

std::vector<HarvestRecord> extract_post_records(const HtmlNode& page, const ForumRules& rules, std::string_view page_url,
                                                const HandleGrammar& grammar, const MarketplacePattern& market,
                                                std::vector<std::string>* diagnostics) {
  std::vector<HarvestRecord> records;
  for (const HtmlNode* post : find_by_class(page, rules.post_class)) {
    const auto names = own_by_class(*post, rules, rules.username_class);
    if (!names.empty()) {
      const std::string name = names.front()->inner_text();
      if (!name.empty()) {
        records.push_back(HarvestRecord{RecordSource::forum_username, rules.forum, name, grammar.normalize(name),
                                        std::string(page_url)});
      }
    }
    for (const HtmlNode* sig : own_by_class(*post, rules, rules.signature_class)) {
      const auto links = extract_signature_links(*sig, grammar, market);
      if (diagnostics) {
        for (const auto& d : links.diagnostics) diagnostics->push_back(std::string(page_url) + ": " + d);
      }
      for (std::size_t i = 0; i < links.handles.size(); ++i) {
        records.push_back(HarvestRecord{RecordSource::forum_signature, rules.forum, links.raw_values[i],
                                        links.handles[i], std::string(page_url)});
      }
    }
  }
  return records;
}

CrawlResult crawl_forum(const ForumRules& rules, Fetcher& fetcher, const CrawlLimits& limits,
                        const HandleGrammar& grammar, const MarketplacePattern& market) {
  const auto seed = parse_url(rules.seed_url);
  if (!seed) throw TransportError("seed url is not absolute: " + rules.seed_url);
  const std::regex board_re(rules.board_pattern);
  const std::regex thread_re(rules.thread_pattern);

  CrawlResult result;
  PoliteFetcher polite(fetcher, limits.min_delay);
  std::set<std::string> seen{seed->str()};
  std::vector<std::string> level{seed->str()};
  bool is_seed_level = true;

  for (std::size_t depth = 0; !level.empty() && result.fetched.size() + result.skipped.size() < limits.max_pages; ++depth) {
    const std::size_t budget = limits.max_pages - result.fetched.size() - result.skipped.size();
    if (level.size() > budget) level.resize(budget);

    const auto outcomes = fetch_level(level, polite, limits.workers);
    std::set<std::string> next;
    for (std::size_t i = 0; i < level.size(); ++i) {
      const auto& url = level[i];
      const auto& outcome = outcomes[i];
      std::string failure = outcome.error;
      if (failure.empty() && (outcome.response->status < 200 || outcome.response->status >= 300))
        failure = "HTTP " + std::to_string(outcome.response->status);
      if (!failure.empty()) {
        if (is_seed_level) throw TransportError("seed fetch failed: " + url + ": " + failure);
        result.skipped.push_back({url, failure});
        continue;
      }
      result.fetched.push_back(url);
      const HtmlDocument doc = parse_html(outcome.response->body);
      for (const auto& d : doc.diagnostics) result.diagnostics.push_back(url + ": " + d);

      auto records = extract_post_records(doc.root, rules, url, grammar, market, &result.diagnostics);
      std::move(records.begin(), records.end(), std::back_inserter(result.records));

      if (depth + 1 > limits.max_depth) continue;
      for (const HtmlNode* a : find_by_tag(doc.root, "a")) {
        const auto target = resolve_url(url, a->attribute("href"));
        if (!target || seen.contains(*target) || !allowed(*target, rules)) continue;
        if (std::regex_search(*target, board_re) || std::regex_search(*target, thread_re)) next.insert(*target);
      }
    }
    is_seed_level = false;
    seen.insert(next.begin(), next.end());
    level.assign(next.begin(), next.end());
  }
  return result;
}

}  // namespace shopscope::harvest
