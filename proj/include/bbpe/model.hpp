#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bbpe/codec.hpp"

namespace bbpe {

using TokenId = std::uint32_t;

/// Ids [0, 256) are the raw byte tokens.
inline constexpr TokenId kByteTokenCount = 256;

struct MergeRule {
  TokenId left = 0;
  TokenId right = 0;
  TokenId result = 0;
  std::uint32_t rank = 0;

  friend bool operator==(const MergeRule&, const MergeRule&) = default;
};

/// Bijection between token ids and byte strings. Layout: 256 byte tokens,
/// then the special tokens, then merged tokens in rank order. Specials carry
/// a name instead of bytes and render as nothing.
class Vocabulary {
 public:
  /// Throws std::invalid_argument for empty, duplicate, or whitespace-bearing
  /// special names.
  explicit Vocabulary(std::vector<std::string> specials = {});

  std::size_t size() const noexcept { return entries_.size(); }
  std::size_t special_count() const noexcept { return specials_.size(); }
  /// Entries that carry bytes, i.e. size() minus the specials.
  std::size_t content_size() const noexcept { return size() - special_count(); }
  TokenId first_merged_id() const noexcept {
    return kByteTokenCount + static_cast<TokenId>(specials_.size());
  }

  bool contains(TokenId id) const noexcept { return id < entries_.size(); }
  bool is_special(TokenId id) const noexcept {
    return id >= kByteTokenCount && id < first_merged_id();
  }

  /// Throws std::out_of_range for an unknown id. Specials yield empty bytes.
  std::span<const std::uint8_t> bytes(TokenId id) const;

  std::optional<TokenId> find(std::span<const std::uint8_t> bytes) const;

  const std::vector<std::string>& specials() const noexcept { return specials_; }
  std::optional<TokenId> special_id(std::string_view name) const;

  /// Appends the concatenation of two existing tokens. Throws
  /// std::invalid_argument if either id is unknown or special, or if the
  /// concatenation is already in the vocabulary.
  TokenId add_merged(TokenId left, TokenId right);

 private:
  std::vector<ByteSeq> entries_;
  std::vector<std::string> specials_;
  std::unordered_map<std::string, TokenId> index_;
};

/// A trained byte-level BPE tokenizer: byte domain, vocabulary, and merge
/// rules ordered by rank. Treat as immutable once built; all const members
/// are safe to call concurrently.
class TokenizerModel {
 public:
  /// Base-only model (256 byte tokens plus specials). Throws
  /// std::invalid_argument if target_vocab_size < 256 + specials.size().
  TokenizerModel(ByteDomain domain, std::size_t target_vocab_size,
                 std::vector<std::string> specials = {});

  ByteDomain domain() const noexcept { return domain_; }
  std::size_t target_vocab_size() const noexcept { return target_vocab_size_; }
  const Vocabulary& vocab() const noexcept { return vocab_; }
  std::span<const MergeRule> merges() const noexcept { return merges_; }

  /// Rank of the rule merging (left, right), if one exists.
  std::optional<std::uint32_t> merge_rank(TokenId left, TokenId right) const;

  /// Appends the next-ranked merge. Used while building a model; throws
  /// std::length_error when the vocabulary is already at its target size.
  const MergeRule& add_merge(TokenId left, TokenId right);

  std::vector<TokenId> encode(std::string_view text) const;

  /// Appends the encoding of a single pre-token piece.
  void encode_piece(std::string_view piece, std::vector<TokenId>& out) const;

  /// Throws std::out_of_range for ids outside the vocabulary.
  DecodedText decode(std::span<const TokenId> ids) const;

  /// The token's bytes as display symbols, e.g. "ĠĀW". Specials have no
  /// bytes and render empty. Throws std::out_of_range for unknown ids.
  std::string token_display(TokenId id) const;

 private:
  static std::uint64_t pair_key(TokenId left, TokenId right) noexcept {
    return (static_cast<std::uint64_t>(left) << 32) | right;
  }

  ByteDomain domain_;
  std::size_t target_vocab_size_;
  Vocabulary vocab_;
  std::vector<MergeRule> merges_;
  std::unordered_map<std::uint64_t, std::uint32_t> rank_of_pair_;
};

// Free-function spellings of the pipeline steps.
inline std::vector<TokenId> encode(const TokenizerModel& model, std::string_view text) {
  return model.encode(text);
}
inline DecodedText decode(const TokenizerModel& model, std::span<const TokenId> ids) {
  return model.decode(ids);
}
inline std::string token_display(const TokenizerModel& model, TokenId id) {
  return model.token_display(id);
}

}  // namespace bbpe
