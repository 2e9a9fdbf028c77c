#include <doctest.h>

#include <functional>
#include <random>
#include <set>

#include "bbpe/trainer.hpp"
#include "test_support.hpp"

using bbpe::ByteDomain;
using bbpe::ByteSeq;
using bbpe::TrainOptions;
using bbpe::testing::BytePairList;

namespace {

TrainOptions options(std::size_t target, ByteDomain domain) {
  TrainOptions o;
  o.target_vocab_size = target;
  o.domain = domain;
  return o;
}

}  // namespace

TEST_CASE("most frequent pair wins") {
  const std::vector<std::string> corpus{"aaab", "aab"};
  // Hand count: (a,a) occurs 2 + 1 = 3 times, (a,b) 1 + 1 = 2 times.
  const auto model = bbpe::train(corpus, options(257, ByteDomain::Utf8));
  REQUIRE(model.merges().size() == 1);
  CHECK(model.merges()[0] == bbpe::MergeRule{0x61, 0x61, 256, 0});
  CHECK(model.vocab().size() == 257);
}

TEST_CASE("empty corpus yields the base vocabulary") {
  const auto model = bbpe::train(std::vector<std::string>{}, options(256, ByteDomain::Utf8));
  CHECK(model.merges().empty());
  CHECK(model.vocab().size() == 256);
}

TEST_CASE("UTF-16LE training merges the two bytes of a hangul syllable first") {
  // Pieces "한" = [5C D5] and " 한" = [20 00 5C D5]: (5C,D5) twice, the rest once.
  const auto model = bbpe::train(std::vector<std::string>{"한 한"}, options(260, ByteDomain::Utf16Le));
  REQUIRE_FALSE(model.merges().empty());
  CHECK(model.merges()[0].left == 0x5C);
  CHECK(model.merges()[0].right == 0xD5);
  // Every remaining pair is a singleton, below the frequency floor.
  CHECK(model.merges().size() == 1);
}

TEST_CASE("frequency ties break on byte order of the pair") {
  // (b,a) and (a,b) both occur twice; (a,b) sorts first.
  const auto model = bbpe::train(std::vector<std::string>{"ba", "ab", "ba", "ab"},
                                 options(257, ByteDomain::Utf8));
  REQUIRE(model.merges().size() == 1);
  CHECK(model.merges()[0].left == 'a');
  CHECK(model.merges()[0].right == 'b');
}

TEST_CASE("configuration errors") {
  auto o = options(255, ByteDomain::Utf8);
  CHECK_THROWS_AS(bbpe::train(std::vector<std::string>{}, o), std::invalid_argument);
  o.target_vocab_size = 257;
  o.specials = {"<unk>", "<pad>"};
  CHECK_THROWS_AS(bbpe::validate(o), std::invalid_argument);
  o.target_vocab_size = 258;
  CHECK_NOTHROW(bbpe::validate(o));
  o.min_pair_frequency = 0;
  CHECK_THROWS_AS(bbpe::validate(o), std::invalid_argument);
}

TEST_CASE("ill-formed corpus text is rejected") {
  CHECK_THROWS_AS(bbpe::train(std::vector<std::string>{"ok", "bad\xFF"}, options(300, ByteDomain::Utf8)),
                  bbpe::InvalidText);
}

TEST_CASE("specials sit between byte tokens and merges") {
  auto o = options(300, ByteDomain::Utf8);
  o.specials = {"<unk>", "<pad>"};
  const auto model = bbpe::train(std::vector<std::string>{"abab abab"}, o);
  CHECK(model.vocab().special_id("<unk>") == 256u);
  CHECK(model.vocab().special_id("<pad>") == 257u);
  REQUIRE_FALSE(model.merges().empty());
  for (const auto& m : model.merges()) {
    CHECK(m.result == 256 + 2 + m.rank);
    CHECK(m.left < m.result);
    CHECK(m.right < m.result);
  }
  CHECK(model.vocab().size() == 256 + 2 + model.merges().size());
  CHECK(model.vocab().size() <= 300);
}

TEST_CASE("minimum pair frequency is configurable") {
  auto o = options(300, ByteDomain::Utf8);
  o.min_pair_frequency = 1;
  const auto hapax = bbpe::train(std::vector<std::string>{"xyz"}, o);
  CHECK(hapax.merges().size() == 2);  // xy, then xyz
  o.min_pair_frequency = 2;
  CHECK(bbpe::train(std::vector<std::string>{"xyz"}, o).merges().empty());
}

TEST_CASE("pairs that would duplicate an existing token are never chosen") {
  // "aaaa" pieces: merge aa, then aa+aa = aaaa. Pieces "aaa" leave (aa,a),
  // and "aaaaa" later offers (aaaa,a) and (aa,aaa)-shaped duplicates.
  const std::vector<std::string> corpus{"aaa aaa aaaa aaaa aaaaa aaaaa aaaaaaa aaaaaaa"};
  auto o = options(400, ByteDomain::Utf8);
  o.min_pair_frequency = 1;
  const auto model = bbpe::train(corpus, o);
  std::set<ByteSeq> seen;
  for (bbpe::TokenId id = 0; id < model.vocab().size(); ++id) {
    const auto b = model.vocab().bytes(id);
    CHECK(seen.insert(ByteSeq(b.begin(), b.end())).second);
  }
  CHECK(bbpe::testing::merges_as_bytes(model) ==
        bbpe::testing::reference_train(corpus, 400, ByteDomain::Utf8, 0, 1));
}

TEST_CASE("trainer agrees with the reference trainer") {
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 30; ++trial) {
    const auto corpus = bbpe::testing::random_mini_corpus(rng, 20, 30);
    for (const auto domain : {ByteDomain::Utf8, ByteDomain::Utf16Le}) {
      CAPTURE(trial);
      const std::size_t target = 256 + 60;
      const auto expected = bbpe::testing::reference_train(corpus, target, domain);
      const auto model = bbpe::train(corpus, options(target, domain));
      CHECK(bbpe::testing::merges_as_bytes(model) == expected);
    }
  }
}

TEST_CASE("merged tokens are concatenations of their operands") {
  std::mt19937 rng(99);
  const auto corpus = bbpe::testing::random_mini_corpus(rng, 40, 40);
  const auto model = bbpe::train(corpus, options(400, ByteDomain::Utf16Le));
  const auto& v = model.vocab();
  // Expand every merged token down to byte tokens and compare.
  std::function<ByteSeq(bbpe::TokenId)> expand = [&](bbpe::TokenId id) -> ByteSeq {
    if (id < bbpe::kByteTokenCount) return ByteSeq{static_cast<std::uint8_t>(id)};
    const auto& m = model.merges()[id - v.first_merged_id()];
    ByteSeq out = expand(m.left);
    const ByteSeq r = expand(m.right);
    out.insert(out.end(), r.begin(), r.end());
    return out;
  };
  for (const auto& m : model.merges()) {
    const auto b = v.bytes(m.result);
    CHECK(ByteSeq(b.begin(), b.end()) == expand(m.result));
  }
}

TEST_CASE("shard count does not change the result") {
  std::mt19937 rng(5);
  std::vector<std::string> corpus;
  for (int i = 0; i < 300; ++i) {
    corpus.push_back(bbpe::testing::to_utf8(bbpe::testing::random_code_points(rng, 0, 30)));
  }
  auto o = options(600, ByteDomain::Utf16Le);
  const auto baseline = bbpe::testing::merges_as_bytes(bbpe::train(corpus, o));
  for (const std::size_t shards : {2u, 3u, 8u, 64u}) {
    o.shards = shards;
    CHECK(bbpe::testing::merges_as_bytes(bbpe::train(corpus, o)) == baseline);
  }
}

TEST_CASE("a larger target extends the merge list without changing its prefix") {
  std::mt19937 rng(11);
  const auto corpus = bbpe::testing::random_mini_corpus(rng, 50, 40);
  const auto small = bbpe::testing::merges_as_bytes(bbpe::train(corpus, options(280, ByteDomain::Utf8)));
  const auto large = bbpe::testing::merges_as_bytes(bbpe::train(corpus, options(340, ByteDomain::Utf8)));
  REQUIRE(small.size() <= large.size());
  CHECK(std::equal(small.begin(), small.end(), large.begin()));
}

TEST_CASE("pre-token counts merge additively") {
  bbpe::PreTokenCounts a;
  a.add("the cat the");
  bbpe::PreTokenCounts b;
  b.add("the dog");
  a.merge(std::move(b));
  CHECK(a.total_pieces() == 5);
  CHECK(a.table().at("the") == 2);
  CHECK(a.table().at(" the") == 1);
  CHECK(a.table().at(" cat") == 1);
  CHECK(a.table().at(" dog") == 1);
  CHECK(b.total_pieces() == 0);
}
