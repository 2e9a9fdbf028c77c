#include "bbpe/analytics.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace bbpe {

namespace {

void check_tags(std::span<const std::string> tags) {
  std::unordered_set<std::string_view> seen;
  for (const auto& tag : tags) {
    if (tag.empty()) throw std::invalid_argument("language tag is empty");
    if (!seen.insert(tag).second) {
      throw std::invalid_argument("duplicate language tag '" + tag + "'");
    }
  }
}

std::size_t intersection_size(const std::set<TokenId>& a, const std::set<TokenId>& b,
                              TokenId min_id) {
  std::size_t n = 0;
  auto i = a.lower_bound(min_id);
  auto j = b.lower_bound(min_id);
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

std::size_t common_size(std::span<const UsedTokenSet> used, TokenId min_id) {
  std::size_t n = 0;
  for (auto it = used.front().ids.lower_bound(min_id); it != used.front().ids.end(); ++it) {
    const bool everywhere = std::all_of(used.begin() + 1, used.end(),
                                        [&](const UsedTokenSet& u) { return u.ids.contains(*it); });
    if (everywhere) ++n;
  }
  return n;
}

TagPair ordered(std::string_view a, std::string_view b) {
  return a < b ? TagPair{std::string(a), std::string(b)}
               : TagPair{std::string(b), std::string(a)};
}

}  // namespace

LanguageTally::LanguageTally(const TokenizerModel& model, std::string tag)
    : model_(&model), used_{std::move(tag), {}} {}

void LanguageTally::add(std::string_view utterance) {
  scratch_ = model_->encode(utterance);
  ++utterances_;
  total_tokens_ += scratch_.size();
  const auto& vocab = model_->vocab();
  for (const TokenId id : scratch_) {
    if (!vocab.is_special(id)) used_.ids.insert(id);
  }
}

std::size_t SharedTokenStats::merged(std::string_view a, std::string_view b) const {
  return pairwise_merged.at(ordered(a, b));
}

std::size_t SharedTokenStats::all(std::string_view a, std::string_view b) const {
  return pairwise_all.at(ordered(a, b));
}

const LanguageStats& CorpusStats::language(std::string_view tag) const {
  for (const auto& l : per_language) {
    if (l.tag == tag) return l;
  }
  throw std::out_of_range("no statistics for language '" + std::string(tag) + "'");
}

UsedTokenSet used_tokens(const TokenizerModel& model, const LanguagePartition& part) {
  LanguageTally tally(model, part.tag);
  for (const auto& u : part.utterances) tally.add(u);
  return tally.used();
}

SharedTokenStats shared_tokens(const TokenizerModel& model,
                               std::span<const UsedTokenSet> used) {
  if (used.size() < 2) {
    throw std::invalid_argument("token sharing needs at least two partitions");
  }
  std::vector<std::string> tags;
  for (const auto& u : used) tags.push_back(u.tag);
  check_tags(tags);

  const TokenId first_merged = model.vocab().first_merged_id();
  SharedTokenStats s;
  for (std::size_t i = 0; i < used.size(); ++i) {
    for (std::size_t j = i + 1; j < used.size(); ++j) {
      const TagPair key = ordered(used[i].tag, used[j].tag);
      s.pairwise_all[key] = intersection_size(used[i].ids, used[j].ids, 0);
      s.pairwise_merged[key] = intersection_size(used[i].ids, used[j].ids, first_merged);
    }
  }
  s.all_all = common_size(used, 0);
  s.all_merged = common_size(used, first_merged);
  return s;
}

SharedTokenStats shared_tokens(const TokenizerModel& model,
                               std::span<const LanguagePartition> parts) {
  std::vector<UsedTokenSet> used;
  used.reserve(parts.size());
  for (const auto& p : parts) used.push_back(used_tokens(model, p));
  return shared_tokens(model, used);
}

double tokens_per_utterance(const TokenizerModel& model, const LanguagePartition& part) {
  if (part.utterances.empty()) {
    throw std::invalid_argument("partition '" + part.tag + "' has no utterances");
  }
  std::uint64_t total = 0;
  for (const auto& u : part.utterances) total += model.encode(u).size();
  return static_cast<double>(total) / static_cast<double>(part.utterances.size());
}

double relative_reduction(double a, double b) {
  if (!(a > 0.0)) throw std::invalid_argument("reduction baseline must be positive");
  return 100.0 * (b - a) / a;
}

double coverage(const TokenizerModel& model, const UsedTokenSet& used) {
  const std::size_t denom = model.vocab().content_size();
  return 100.0 * static_cast<double>(used.ids.size()) / static_cast<double>(denom);
}

double coverage(const TokenizerModel& model, const LanguagePartition& part) {
  return coverage(model, used_tokens(model, part));
}

LanguageStats finish(const TokenizerModel& model, const LanguageTally& tally) {
  if (tally.utterances() == 0) {
    throw std::invalid_argument("partition '" + tally.tag() + "' has no utterances");
  }
  LanguageStats s;
  s.tag = tally.tag();
  s.utterances = tally.utterances();
  s.total_tokens = tally.total_tokens();
  s.mean_tokens_per_utterance =
      static_cast<double>(s.total_tokens) / static_cast<double>(s.utterances);
  s.coverage_percent = coverage(model, tally.used());
  s.used = tally.used();
  return s;
}

CorpusStats compute_stats(const TokenizerModel& model,
                          std::span<const LanguageTally> tallies) {
  std::vector<std::string> tags;
  for (const auto& t : tallies) tags.push_back(t.tag());
  check_tags(tags);

  CorpusStats stats;
  for (const auto& t : tallies) stats.per_language.push_back(finish(model, t));
  std::ranges::sort(stats.per_language, {}, &LanguageStats::tag);
  if (stats.per_language.size() >= 2) {
    std::vector<UsedTokenSet> used;
    for (const auto& l : stats.per_language) used.push_back(l.used);
    stats.shared = shared_tokens(model, used);
  }
  return stats;
}

CorpusStats compute_stats(const TokenizerModel& model,
                          std::span<const LanguagePartition> parts) {
  std::vector<LanguageTally> tallies;
  tallies.reserve(parts.size());
  for (const auto& p : parts) {
    tallies.emplace_back(model, p.tag);
    for (const auto& u : p.utterances) tallies.back().add(u);
  }
  return compute_stats(model, tallies);
}

const ModelStats& ComparisonReport::model(std::string_view name) const {
  for (const auto& m : models) {
    if (m.name == name) return m;
  }
  throw std::out_of_range("no model named '" + std::string(name) + "'");
}

double ComparisonReport::reduction(std::string_view tag, std::string_view name,
                                   std::string_view baseline) const {
  return relative_reduction(
      model(baseline).stats.language(tag).mean_tokens_per_utterance,
      model(name).stats.language(tag).mean_tokens_per_utterance);
}

ComparisonReport make_report(std::vector<ModelStats> models) {
  if (models.empty()) throw std::invalid_argument("comparison needs at least one model");
  std::ranges::sort(models, {}, &ModelStats::name);
  for (std::size_t i = 1; i < models.size(); ++i) {
    if (models[i].name == models[i - 1].name) {
      throw std::invalid_argument("duplicate model name '" + models[i].name + "'");
    }
  }
  ComparisonReport report;
  for (const auto& l : models.front().stats.per_language) report.tags.push_back(l.tag);
  for (const auto& m : models) {
    std::vector<std::string> tags;
    for (const auto& l : m.stats.per_language) tags.push_back(l.tag);
    if (tags != report.tags) {
      throw std::invalid_argument("models were measured on different partitions");
    }
  }
  report.models = std::move(models);
  return report;
}

ComparisonReport compare_models(std::span<const NamedModel> models,
                                std::span<const LanguagePartition> parts) {
  std::vector<ModelStats> all;
  for (const auto& m : models) {
    all.push_back({m.name, m.model->vocab().content_size(), compute_stats(*m.model, parts)});
  }
  return make_report(std::move(all));
}

}  // namespace bbpe
