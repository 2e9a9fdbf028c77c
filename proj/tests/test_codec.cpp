#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "bbpe/codec.hpp"
#include "test_support.hpp"

using bbpe::ByteDomain;
using bbpe::ByteSeq;
using bbpe::bytes_to_text;
using bbpe::text_to_bytes;

namespace {

// Independent UTF-16LE encoder working from code points, used as an oracle
// for the UTF-8 driven implementation.
ByteSeq utf16le_from_code_points(const std::u32string& cps) {
  ByteSeq out;
  auto unit = [&](unsigned u) {
    out.push_back(static_cast<std::uint8_t>(u & 0xFF));
    out.push_back(static_cast<std::uint8_t>(u >> 8));
  };
  for (const char32_t cp : cps) {
    if (cp < 0x10000) {
      unit(cp);
    } else {
      unit(0xD800 + ((cp - 0x10000) >> 10));
      unit(0xDC00 + ((cp - 0x10000) & 0x3FF));
    }
  }
  return out;
}

std::string hex_to_string(std::string_view hex) {
  std::string out;
  for (std::size_t i = 0; i + 1 < hex.size(); i += 2) {
    out.push_back(static_cast<char>(std::stoi(std::string(hex.substr(i, 2)), nullptr, 16)));
  }
  return out;
}

ByteSeq hex_to_bytes(std::string_view hex) {
  const std::string s = hex_to_string(hex);
  return {s.begin(), s.end()};
}

}  // namespace

TEST_CASE("hangul syllable encodes as in the UTF-8 / UTF-16LE comparison") {
  CHECK(text_to_bytes("한", ByteDomain::Utf16Le) == ByteSeq{0x5C, 0xD5});
  CHECK(text_to_bytes("한", ByteDomain::Utf8) == ByteSeq{0xED, 0x95, 0x9C});
}

TEST_CASE("ASCII is one little-endian code unit") {
  CHECK(text_to_bytes("A", ByteDomain::Utf16Le) == ByteSeq{0x41, 0x00});
  CHECK(text_to_bytes("A", ByteDomain::Utf8) == ByteSeq{0x41});
  CHECK(text_to_bytes("", ByteDomain::Utf16Le).empty());
}

TEST_CASE("supplementary scalars become surrogate pairs") {
  // U+1D11E: 0x1D11E - 0x10000 = 0xD11E; high = 0xD800 + 0x34, low = 0xDC00 + 0x11E.
  CHECK(text_to_bytes("𝄞", ByteDomain::Utf16Le) == ByteSeq{0x34, 0xD8, 0x1E, 0xDD});
  CHECK(utf16le_from_code_points(U"𝄞") == ByteSeq{0x34, 0xD8, 0x1E, 0xDD});
}

TEST_CASE("no byte-order mark is emitted") {
  const ByteSeq b = text_to_bytes("hello", ByteDomain::Utf16Le);
  REQUIRE(b.size() == 10);
  CHECK_FALSE((b[0] == 0xFF && b[1] == 0xFE));
  // An explicit U+FEFF in the text is content and is kept.
  CHECK(text_to_bytes("\xEF\xBB\xBFx", ByteDomain::Utf16Le) == ByteSeq{0xFF, 0xFE, 0x78, 0x00});
}

TEST_CASE("ill-formed UTF-8 input is rejected in both domains") {
  for (const auto domain : {ByteDomain::Utf8, ByteDomain::Utf16Le}) {
    CHECK_THROWS_AS(text_to_bytes("ab\xFF", domain), bbpe::InvalidText);
    CHECK_THROWS_AS(text_to_bytes("\xED\xA0\x80", domain), bbpe::InvalidText);  // encoded surrogate
    CHECK_THROWS_AS(text_to_bytes("\xE0\x80\x80", domain), bbpe::InvalidText);  // overlong
  }
  try {
    text_to_bytes("ab\xFF", ByteDomain::Utf8);
  } catch (const bbpe::InvalidText& e) {
    CHECK(e.offset() == 2);
  }
}

TEST_CASE("decoding well-formed bytes") {
  CHECK(bytes_to_text(ByteSeq{0x5C, 0xD5}, ByteDomain::Utf16Le).text == "한");
  const auto empty = bytes_to_text(ByteSeq{}, ByteDomain::Utf16Le);
  CHECK(empty.text.empty());
  CHECK(empty.replacements == 0);
  CHECK(bytes_to_text(ByteSeq{0x34, 0xD8, 0x1E, 0xDD}, ByteDomain::Utf16Le).text == "𝄞");
}

TEST_CASE("lone surrogate and odd trailing byte are replaced") {
  const auto lone = bytes_to_text(ByteSeq{0x34, 0xD8}, ByteDomain::Utf16Le);
  CHECK(lone.text == "\xEF\xBF\xBD");
  CHECK(lone.replacements == 1);

  const auto odd = bytes_to_text(ByteSeq{0x41}, ByteDomain::Utf16Le);
  CHECK(odd.text == "\xEF\xBF\xBD");
  CHECK(odd.replacements == 1);

  // An unpaired high surrogate and the odd byte after it are two units.
  const auto both = bytes_to_text(ByteSeq{0x34, 0xD8, 0x1E}, ByteDomain::Utf16Le);
  CHECK(both.text == "\xEF\xBF\xBD\xEF\xBF\xBD");
  CHECK(both.replacements == 2);
}

TEST_CASE("replacement decoding matches a reference decoder") {
  // Expected outputs were produced with CPython's 'replace' error handler,
  // which substitutes one U+FFFD per maximal ill-formed subpart.
  struct Case {
    ByteDomain domain;
    const char* input;
    const char* expected;
    std::size_t replacements;
  };
  const Case cases[] = {
      {ByteDomain::Utf8, "e080", "efbfbdefbfbd", 2},
      {ByteDomain::Utf8, "ed95", "efbfbd", 1},
      {ByteDomain::Utf8, "eda080", "efbfbdefbfbdefbfbd", 3},
      {ByteDomain::Utf8, "41ff42", "41efbfbd42", 1},
      {ByteDomain::Utf8, "f09f98", "efbfbd", 1},
      {ByteDomain::Utf8, "c3a980", "c3a9efbfbd", 1},
      {ByteDomain::Utf8, "f4908080", "efbfbdefbfbdefbfbdefbfbd", 4},
      {ByteDomain::Utf8, "c0af", "efbfbdefbfbd", 2},
      {ByteDomain::Utf16Le, "1edd4100", "efbfbd41", 1},
      {ByteDomain::Utf16Le, "34d84100", "efbfbd41", 1},
      {ByteDomain::Utf16Le, "34d834d81edd", "efbfbdf09d849e", 1},
      {ByteDomain::Utf16Le, "5cd541", "ed959cefbfbd", 1},
  };
  for (const auto& c : cases) {
    CAPTURE(c.input);
    const auto decoded = bytes_to_text(hex_to_bytes(c.input), c.domain);
    CHECK(decoded.text == hex_to_string(c.expected));
    CHECK(decoded.replacements == c.replacements);
  }
}

TEST_CASE("round trip, BMP uniformity and totality on random input") {
  std::mt19937 rng(20240917);
  for (int i = 0; i < 2000; ++i) {
    const std::u32string cps = bbpe::testing::random_code_points(rng, 0, 24);
    const std::string text = bbpe::testing::to_utf8(cps);
    for (const auto domain : {ByteDomain::Utf8, ByteDomain::Utf16Le}) {
      const auto decoded = bytes_to_text(text_to_bytes(text, domain), domain);
      CHECK(decoded.text == text);
      CHECK(decoded.replacements == 0);
    }
    CHECK(text_to_bytes(text, ByteDomain::Utf16Le) == utf16le_from_code_points(cps));

    std::u32string bmp;
    for (const char32_t cp : cps) {
      if (cp < 0x10000) bmp.push_back(cp);
    }
    CHECK(text_to_bytes(bbpe::testing::to_utf8(bmp), ByteDomain::Utf16Le).size() ==
          2 * bmp.size());
  }

  std::uniform_int_distribution<int> byte(0, 255);
  std::uniform_int_distribution<int> len(0, 16);
  for (int i = 0; i < 2000; ++i) {
    ByteSeq noise(len(rng));
    for (auto& b : noise) b = static_cast<std::uint8_t>(byte(rng));
    for (const auto domain : {ByteDomain::Utf8, ByteDomain::Utf16Le}) {
      const auto decoded = bytes_to_text(noise, domain);
      // Decoder output is always well-formed and re-encodable.
      CHECK_NOTHROW(text_to_bytes(decoded.text, domain));
    }
  }
}

TEST_CASE("display symbols") {
  CHECK(bbpe::byte_to_display(0x20) == U'Ġ');
  CHECK(bbpe::byte_to_display(0x00) == U'Ā');
  CHECK(bbpe::byte_to_display(0x41) == U'A');
  CHECK(bbpe::byte_to_display(0x21) == U'!');
  CHECK(bbpe::byte_to_display(0x7E) == U'~');
  CHECK(bbpe::bytes_to_display(ByteSeq{0x20, 0x00, 0x57}) == "ĠĀW");

  std::vector<bool> seen(0x200, false);
  for (unsigned b = 0; b < 256; ++b) {
    const char32_t s = bbpe::byte_to_display(static_cast<std::uint8_t>(b));
    CHECK(s != U' ');
    REQUIRE(s < seen.size());
    CHECK_FALSE(seen[s]);
    seen[s] = true;
    CHECK(bbpe::display_to_byte(s) == b);
    if (b < 0x21 || b > 0x7E) CHECK(s >= 0x100);
  }

  CHECK_THROWS_AS(bbpe::display_to_byte(U' '), std::out_of_range);
  CHECK_THROWS_AS(bbpe::display_to_byte(U'é'), std::out_of_range);
  CHECK_THROWS_AS(bbpe::display_to_byte(0x1A2), std::out_of_range);
  CHECK_THROWS_AS(bbpe::display_to_bytes("a b"), std::invalid_argument);
  CHECK(bbpe::display_to_bytes("ĠĀW") == ByteSeq{0x20, 0x00, 0x57});
}

TEST_CASE("byte domain names") {
  CHECK(bbpe::parse_byte_domain("utf8") == ByteDomain::Utf8);
  CHECK(bbpe::parse_byte_domain("utf16le") == ByteDomain::Utf16Le);
  CHECK_FALSE(bbpe::parse_byte_domain("utf16be").has_value());
  CHECK(bbpe::to_string(ByteDomain::Utf16Le) == "utf16le");
}
