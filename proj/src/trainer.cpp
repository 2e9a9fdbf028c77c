#include "bbpe/trainer.hpp"

#include <algorithm>
#include <exception>
#include <queue>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "bbpe/pre_tokenizer.hpp"

namespace bbpe {

void validate(const TrainOptions& options) {
  const std::size_t floor = kByteTokenCount + options.specials.size();
  if (options.target_vocab_size < floor) {
    throw std::invalid_argument("target vocabulary size " +
                                std::to_string(options.target_vocab_size) +
                                " is below the minimum of " + std::to_string(floor));
  }
  if (options.min_pair_frequency < 1) {
    throw std::invalid_argument("minimum pair frequency must be at least 1");
  }
  if (options.shards < 1) throw std::invalid_argument("shard count must be at least 1");
}

void PreTokenCounts::add(std::string_view utterance) {
  for (const std::string_view piece : pre_tokenize(utterance)) {
    auto it = counts_.find(std::string(piece));
    if (it == counts_.end()) {
      counts_.emplace(std::string(piece), 1);
    } else {
      ++it->second;
    }
    ++total_;
  }
}

void PreTokenCounts::add_batch(std::span<const std::string> utterances,
                               std::size_t shards) {
  shards = std::clamp<std::size_t>(shards, 1, std::max<std::size_t>(utterances.size(), 1));
  if (shards == 1) {
    for (const auto& u : utterances) add(u);
    return;
  }

  std::vector<PreTokenCounts> partial(shards);
  std::vector<std::exception_ptr> errors(shards);
  std::vector<std::thread> workers;
  workers.reserve(shards);
  const std::size_t chunk = (utterances.size() + shards - 1) / shards;
  for (std::size_t s = 0; s < shards; ++s) {
    const std::size_t begin = std::min(s * chunk, utterances.size());
    const std::size_t end = std::min(begin + chunk, utterances.size());
    workers.emplace_back([&, s, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) partial[s].add(utterances[i]);
      } catch (...) {
        errors[s] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (auto& p : partial) merge(std::move(p));
}

void PreTokenCounts::merge(PreTokenCounts&& other) {
  if (counts_.empty()) {
    counts_ = std::move(other.counts_);
  } else {
    for (auto& [piece, n] : other.counts_) counts_[piece] += n;
  }
  total_ += other.total_;
  other.counts_.clear();
  other.total_ = 0;
}

namespace {

std::uint64_t pair_key(TokenId left, TokenId right) {
  return (static_cast<std::uint64_t>(left) << 32) | right;
}
TokenId key_left(std::uint64_t key) { return static_cast<TokenId>(key >> 32); }
TokenId key_right(std::uint64_t key) { return static_cast<TokenId>(key & 0xFFFFFFFFu); }

struct Word {
  std::vector<TokenId> symbols;
  std::uint64_t freq = 0;
};

struct HeapEntry {
  std::uint64_t count;
  std::uint64_t key;
};

class MergeLoop {
 public:
  MergeLoop(const PreTokenCounts& counts, const TrainOptions& options)
      : options_(options),
        model_(options.domain, options.target_vocab_size, options.specials),
        heap_(HeapOrder{&model_}) {
    load_words(counts);
  }

  TokenizerModel run() && {
    while (model_.vocab().size() < options_.target_vocab_size) {
      const auto best = pop_best();
      if (!best || best->count < options_.min_pair_frequency) break;
      apply(best->key);
    }
    return std::move(model_);
  }

 private:
  // Max-heap order: higher count first, then lexicographically smaller
  // (left bytes, right bytes).
  struct HeapOrder {
    const TokenizerModel* model;
    bool operator()(const HeapEntry& a, const HeapEntry& b) const {
      if (a.count != b.count) return a.count < b.count;
      const auto& v = model->vocab();
      const auto al = v.bytes(key_left(a.key));
      const auto bl = v.bytes(key_left(b.key));
      if (!std::ranges::equal(al, bl)) {
        return std::ranges::lexicographical_compare(bl, al);
      }
      return std::ranges::lexicographical_compare(v.bytes(key_right(b.key)),
                                                  v.bytes(key_right(a.key)));
    }
  };

  void load_words(const PreTokenCounts& counts) {
    std::vector<std::pair<ByteSeq, std::uint64_t>> pieces;
    pieces.reserve(counts.unique_pieces());
    for (const auto& [piece, freq] : counts.table()) {
      ByteSeq bytes = text_to_bytes(piece, options_.domain);
      if (bytes.size() >= 2) pieces.emplace_back(std::move(bytes), freq);
    }
    // Distinct pieces can share bytes only if they were the same text, so the
    // byte order is total and independent of hash-table iteration order.
    std::ranges::sort(pieces, {}, &std::pair<ByteSeq, std::uint64_t>::first);

    words_.reserve(pieces.size());
    for (auto& [bytes, freq] : pieces) {
      const auto index = static_cast<std::uint32_t>(words_.size());
      Word w{{bytes.begin(), bytes.end()}, freq};
      for (std::size_t i = 0; i + 1 < w.symbols.size(); ++i) {
        const auto key = pair_key(w.symbols[i], w.symbols[i + 1]);
        pair_counts_[key] += freq;
        where_[key].push_back(index);
      }
      words_.push_back(std::move(w));
    }
    for (const auto& [key, count] : pair_counts_) heap_.push({count, key});
  }

  bool already_in_vocab(std::uint64_t key) const {
    const auto& v = model_.vocab();
    const auto l = v.bytes(key_left(key));
    const auto r = v.bytes(key_right(key));
    ByteSeq joined(l.begin(), l.end());
    joined.insert(joined.end(), r.begin(), r.end());
    return v.find(joined).has_value();
  }

  std::optional<HeapEntry> pop_best() {
    while (!heap_.empty()) {
      const HeapEntry top = heap_.top();
      heap_.pop();
      const auto it = pair_counts_.find(top.key);
      if (it == pair_counts_.end() || it->second != top.count) continue;  // stale
      if (dead_.contains(top.key)) continue;
      if (already_in_vocab(top.key)) {
        dead_.insert(top.key);
        continue;
      }
      return top;
    }
    return std::nullopt;
  }

  void apply(std::uint64_t key) {
    const TokenId left = key_left(key);
    const TokenId right = key_right(key);
    const TokenId merged = model_.add_merge(left, right).result;

    auto node = where_.extract(key);
    std::vector<std::uint32_t>& affected = node.mapped();
    std::ranges::sort(affected);
    affected.erase(std::unique(affected.begin(), affected.end()), affected.end());

    std::unordered_map<std::uint64_t, std::int64_t> delta;
    std::vector<TokenId> next;
    for (const std::uint32_t index : affected) {
      Word& w = words_[index];
      const auto& s = w.symbols;
      next.clear();
      bool changed = false;
      for (std::size_t i = 0; i < s.size();) {
        if (i + 1 < s.size() && s[i] == left && s[i + 1] == right) {
          next.push_back(merged);
          i += 2;
          changed = true;
        } else {
          next.push_back(s[i]);
          ++i;
        }
      }
      if (!changed) continue;

      const auto freq = static_cast<std::int64_t>(w.freq);
      for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        delta[pair_key(s[i], s[i + 1])] -= freq;
      }
      for (std::size_t i = 0; i + 1 < next.size(); ++i) {
        const auto k = pair_key(next[i], next[i + 1]);
        delta[k] += freq;
        if (next[i] == merged || next[i + 1] == merged) where_[k].push_back(index);
      }
      w.symbols.swap(next);
    }

    for (const auto& [k, d] : delta) {
      if (d == 0) continue;
      auto& count = pair_counts_[k];
      count = static_cast<std::uint64_t>(static_cast<std::int64_t>(count) + d);
      if (count == 0) {
        pair_counts_.erase(k);
      } else if (!dead_.contains(k)) {
        heap_.push({count, k});
      }
    }
  }

  const TrainOptions& options_;
  TokenizerModel model_;
  std::vector<Word> words_;
  std::unordered_map<std::uint64_t, std::uint64_t> pair_counts_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> where_;
  std::unordered_set<std::uint64_t> dead_;
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapOrder> heap_;
};

}  // namespace

TokenizerModel train(const PreTokenCounts& counts, const TrainOptions& options) {
  validate(options);
  return MergeLoop(counts, options).run();
}

TokenizerModel train(std::span<const std::string> corpus, const TrainOptions& options) {
  validate(options);
  PreTokenCounts counts;
  counts.add_batch(corpus, options.shards);
  return train(counts, options);
}

}  // namespace bbpe
