#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bbpe/model.hpp"

namespace bbpe {

/// One language's corpus for per-language measurements.
struct LanguagePartition {
  std::string tag;
  std::vector<std::string> utterances;
};

struct UsedTokenSet {
  std::string tag;
  std::set<TokenId> ids;
};

/// Streaming accumulator for one language: feed utterances one at a time,
/// so corpora never have to be held in memory.
class LanguageTally {
 public:
  LanguageTally(const TokenizerModel& model, std::string tag);

  void add(std::string_view utterance);

  const std::string& tag() const noexcept { return used_.tag; }
  std::uint64_t utterances() const noexcept { return utterances_; }
  std::uint64_t total_tokens() const noexcept { return total_tokens_; }
  const UsedTokenSet& used() const noexcept { return used_; }

 private:
  const TokenizerModel* model_;
  UsedTokenSet used_;
  std::uint64_t utterances_ = 0;
  std::uint64_t total_tokens_ = 0;
  std::vector<TokenId> scratch_;
};

struct LanguageStats {
  std::string tag;
  std::uint64_t utterances = 0;
  std::uint64_t total_tokens = 0;
  double mean_tokens_per_utterance = 0.0;
  double coverage_percent = 0.0;
  UsedTokenSet used;
};

/// Sorted tag pair, first < second.
using TagPair = std::pair<std::string, std::string>;

struct SharedTokenStats {
  /// Merged-token counts (ids >= first merged id): the headline figures.
  std::map<TagPair, std::size_t> pairwise_merged;
  std::size_t all_merged = 0;
  /// Counts over every emitted id, byte tokens included.
  std::map<TagPair, std::size_t> pairwise_all;
  std::size_t all_all = 0;

  /// Symmetric lookup; throws std::out_of_range for unknown tags.
  std::size_t merged(std::string_view a, std::string_view b) const;
  std::size_t all(std::string_view a, std::string_view b) const;
};

struct CorpusStats {
  std::vector<LanguageStats> per_language;  // sorted by tag
  /// Present only when at least two languages were measured.
  std::optional<SharedTokenStats> shared;

  const LanguageStats& language(std::string_view tag) const;
};

UsedTokenSet used_tokens(const TokenizerModel& model, const LanguagePartition& part);

/// Throws std::invalid_argument for fewer than two partitions or duplicate
/// tags.
SharedTokenStats shared_tokens(const TokenizerModel& model,
                               std::span<const LanguagePartition> parts);
SharedTokenStats shared_tokens(const TokenizerModel& model,
                               std::span<const UsedTokenSet> used);

/// Throws std::invalid_argument for an empty partition.
double tokens_per_utterance(const TokenizerModel& model, const LanguagePartition& part);

/// 100 * (b - a) / a; negative when b is smaller. Throws
/// std::invalid_argument if a <= 0.
double relative_reduction(double a, double b);

/// Percentage of the non-special vocabulary emitted for the partition.
double coverage(const TokenizerModel& model, const LanguagePartition& part);
double coverage(const TokenizerModel& model, const UsedTokenSet& used);

LanguageStats finish(const TokenizerModel& model, const LanguageTally& tally);

/// Per-language stats plus sharing when there are two or more partitions.
/// Throws std::invalid_argument on duplicate or empty tags.
CorpusStats compute_stats(const TokenizerModel& model,
                          std::span<const LanguagePartition> parts);
CorpusStats compute_stats(const TokenizerModel& model,
                          std::span<const LanguageTally> tallies);

struct NamedModel {
  std::string name;
  const TokenizerModel* model;
};

struct ModelStats {
  std::string name;
  std::size_t vocab_size = 0;  // excluding specials
  CorpusStats stats;
};

/// Stats for every model over the same partitions, ordered by model name.
/// `reduction(tag, model, baseline)` gives the mean-token change of `model`
/// relative to `baseline` for a language.
struct ComparisonReport {
  std::vector<ModelStats> models;
  std::vector<std::string> tags;  // sorted

  const ModelStats& model(std::string_view name) const;
  double reduction(std::string_view tag, std::string_view model,
                   std::string_view baseline) const;
};

/// Throws std::invalid_argument on an empty model list or duplicate names.
ComparisonReport compare_models(std::span<const NamedModel> models,
                                std::span<const LanguagePartition> parts);
ComparisonReport make_report(std::vector<ModelStats> models);

}  // namespace bbpe
