#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bbpe/codec.hpp"
#include "bbpe/model.hpp"

namespace bbpe {

/// Vocabulary sizes used for the reference setups: monolingual English,
/// monolingual Korean, bilingual, trilingual.
inline constexpr std::size_t kEnglishVocabSize = 1000;
inline constexpr std::size_t kKoreanVocabSize = 3000;
inline constexpr std::size_t kBilingualVocabSize = 5000;
inline constexpr std::size_t kTrilingualVocabSize = 7000;

struct TrainOptions {
  std::size_t target_vocab_size = kTrilingualVocabSize;
  ByteDomain domain = ByteDomain::Utf16Le;
  std::vector<std::string> specials;
  /// Training stops once the best pair occurs fewer times than this.
  std::uint64_t min_pair_frequency = 2;
  /// Worker count for pre-token counting. Has no effect on the result.
  std::size_t shards = 1;
};

/// Throws std::invalid_argument for an unusable configuration.
void validate(const TrainOptions& options);

/// Frequency table of pre-token pieces. Counting is additive, so tables built
/// over disjoint shards can be merged in any order with the same result.
class PreTokenCounts {
 public:
  /// Throws InvalidText on ill-formed UTF-8.
  void add(std::string_view utterance);

  /// Counts a batch, splitting it across `shards` threads.
  void add_batch(std::span<const std::string> utterances, std::size_t shards);

  void merge(PreTokenCounts&& other);

  std::size_t unique_pieces() const noexcept { return counts_.size(); }
  std::uint64_t total_pieces() const noexcept { return total_; }
  const std::unordered_map<std::string, std::uint64_t>& table() const noexcept {
    return counts_;
  }

 private:
  std::unordered_map<std::string, std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

/// Greedy byte-level BPE. Each step merges the adjacent pair with the highest
/// total frequency; ties go to the pair whose (left bytes, right bytes) is
/// lexicographically smallest. Pairs whose concatenation is already a token
/// are never selected. Stops at the target size or when the best frequency
/// drops below options.min_pair_frequency.
TokenizerModel train(const PreTokenCounts& counts, const TrainOptions& options);

/// Convenience overload: counts `corpus` with options.shards workers, then
/// trains.
TokenizerModel train(std::span<const std::string> corpus, const TrainOptions& options);

}  // namespace bbpe
