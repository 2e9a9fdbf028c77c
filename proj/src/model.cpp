#include "bbpe/model.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <unordered_set>

#include "bbpe/pre_tokenizer.hpp"

namespace bbpe {

namespace {

std::string as_key(std::span<const std::uint8_t> bytes) {
  return {reinterpret_cast<const char*>(bytes.data()), bytes.size()};
}

void check_special_name(const std::string& name) {
  if (name.empty()) throw std::invalid_argument("special token name is empty");
  for (const char c : name) {
    const auto u = static_cast<unsigned char>(c);
    if (u <= 0x20 || u == 0x7F) {
      throw std::invalid_argument("special token name '" + name +
                                  "' contains whitespace or control bytes");
    }
  }
}

}  // namespace

Vocabulary::Vocabulary(std::vector<std::string> specials)
    : specials_(std::move(specials)) {
  std::unordered_set<std::string> seen;
  for (const auto& name : specials_) {
    check_special_name(name);
    if (!seen.insert(name).second) {
      throw std::invalid_argument("duplicate special token '" + name + "'");
    }
  }
  entries_.reserve(kByteTokenCount + specials_.size());
  for (unsigned b = 0; b < kByteTokenCount; ++b) {
    entries_.push_back(ByteSeq{static_cast<std::uint8_t>(b)});
    index_.emplace(as_key(entries_.back()), static_cast<TokenId>(b));
  }
  entries_.resize(kByteTokenCount + specials_.size());
}

std::span<const std::uint8_t> Vocabulary::bytes(TokenId id) const {
  if (!contains(id)) {
    throw std::out_of_range("token id " + std::to_string(id) +
                            " is outside the vocabulary");
  }
  return entries_[id];
}

std::optional<TokenId> Vocabulary::find(std::span<const std::uint8_t> bytes) const {
  const auto it = index_.find(as_key(bytes));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<TokenId> Vocabulary::special_id(std::string_view name) const {
  const auto it = std::find(specials_.begin(), specials_.end(), name);
  if (it == specials_.end()) return std::nullopt;
  return kByteTokenCount + static_cast<TokenId>(it - specials_.begin());
}

TokenId Vocabulary::add_merged(TokenId left, TokenId right) {
  if (!contains(left) || !contains(right) || is_special(left) || is_special(right)) {
    throw std::invalid_argument("merge operands must be existing non-special tokens");
  }
  ByteSeq joined;
  joined.reserve(entries_[left].size() + entries_[right].size());
  joined.insert(joined.end(), entries_[left].begin(), entries_[left].end());
  joined.insert(joined.end(), entries_[right].begin(), entries_[right].end());
  auto key = as_key(joined);
  if (index_.contains(key)) {
    throw std::invalid_argument("merge result '" + bytes_to_display(joined) +
                                "' is already in the vocabulary");
  }
  const auto id = static_cast<TokenId>(entries_.size());
  index_.emplace(std::move(key), id);
  entries_.push_back(std::move(joined));
  return id;
}

TokenizerModel::TokenizerModel(ByteDomain domain, std::size_t target_vocab_size,
                               std::vector<std::string> specials)
    : domain_(domain),
      target_vocab_size_(target_vocab_size),
      vocab_(std::move(specials)) {
  if (target_vocab_size_ < vocab_.size()) {
    throw std::invalid_argument(
        "target vocabulary size " + std::to_string(target_vocab_size_) +
        " is smaller than 256 byte tokens plus " +
        std::to_string(vocab_.special_count()) + " special tokens");
  }
}

std::optional<std::uint32_t> TokenizerModel::merge_rank(TokenId left,
                                                        TokenId right) const {
  const auto it = rank_of_pair_.find(pair_key(left, right));
  if (it == rank_of_pair_.end()) return std::nullopt;
  return it->second;
}

const MergeRule& TokenizerModel::add_merge(TokenId left, TokenId right) {
  if (vocab_.size() >= target_vocab_size_) {
    throw std::length_error("vocabulary already holds " +
                            std::to_string(target_vocab_size_) + " entries");
  }
  const TokenId result = vocab_.add_merged(left, right);
  const auto rank = static_cast<std::uint32_t>(merges_.size());
  merges_.push_back({left, right, result, rank});
  rank_of_pair_.emplace(pair_key(left, right), rank);
  return merges_.back();
}

std::vector<TokenId> TokenizerModel::encode(std::string_view text) const {
  std::vector<TokenId> out;
  for (const std::string_view piece : pre_tokenize(text)) encode_piece(piece, out);
  return out;
}

void TokenizerModel::encode_piece(std::string_view piece,
                                  std::vector<TokenId>& out) const {
  const ByteSeq bytes = text_to_bytes(piece, domain_);
  if (bytes.empty()) return;
  if (merges_.empty()) {
    out.insert(out.end(), bytes.begin(), bytes.end());
    return;
  }

  // Symbols form a doubly linked list; candidate pairs wait in a min-heap
  // keyed by (rank, position) and are validated lazily when popped.
  struct Symbol {
    TokenId id;
    int prev;
    int next;
  };
  std::vector<Symbol> symbols(bytes.size());
  const int n = static_cast<int>(bytes.size());
  for (int i = 0; i < n; ++i) symbols[i] = {bytes[i], i - 1, i + 1 < n ? i + 1 : -1};

  struct Candidate {
    std::uint32_t rank;
    int left;
    TokenId left_id;
    TokenId right_id;
    bool operator>(const Candidate& o) const {
      return rank != o.rank ? rank > o.rank : left > o.left;
    }
  };
  std::priority_queue<Candidate, std::vector<Candidate>, std::greater<>> heap;
  auto offer = [&](int left) {
    if (left < 0) return;
    const int right = symbols[left].next;
    if (right < 0) return;
    if (const auto rank = merge_rank(symbols[left].id, symbols[right].id)) {
      heap.push({*rank, left, symbols[left].id, symbols[right].id});
    }
  };
  for (int i = 0; i + 1 < n; ++i) offer(i);

  std::vector<bool> alive(bytes.size(), true);
  while (!heap.empty()) {
    const Candidate c = heap.top();
    heap.pop();
    if (!alive[c.left] || symbols[c.left].id != c.left_id) continue;
    const int right = symbols[c.left].next;
    if (right < 0 || symbols[right].id != c.right_id) continue;

    symbols[c.left].id = merges_[c.rank].result;
    symbols[c.left].next = symbols[right].next;
    if (symbols[right].next >= 0) symbols[symbols[right].next].prev = c.left;
    alive[right] = false;
    offer(symbols[c.left].prev);
    offer(c.left);
  }

  for (int i = 0; i >= 0; i = symbols[i].next) out.push_back(symbols[i].id);
}

DecodedText TokenizerModel::decode(std::span<const TokenId> ids) const {
  ByteSeq bytes;
  for (const TokenId id : ids) {
    const auto b = vocab_.bytes(id);
    bytes.insert(bytes.end(), b.begin(), b.end());
  }
  return bytes_to_text(bytes, domain_);
}

std::string TokenizerModel::token_display(TokenId id) const {
  return bytes_to_display(vocab_.bytes(id));
}

}  // namespace bbpe
