#include "bbpe/codec.hpp"

#include <array>

namespace bbpe {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

struct Utf8Step {
  char32_t cp = 0;
  std::size_t length = 0;  // bytes consumed; on failure, the maximal subpart
  bool ok = false;
};

// Well-formed UTF-8 per the Unicode byte-range table. On failure `length` is
// the length of the maximal subpart of an ill-formed sequence (at least 1).
Utf8Step step_utf8(const std::uint8_t* p, std::size_t avail) noexcept {
  const std::uint8_t b0 = p[0];
  if (b0 < 0x80) return {b0, 1, true};

  std::size_t need = 0;
  std::uint8_t lo = 0x80;
  std::uint8_t hi = 0xBF;
  char32_t cp = 0;
  if (b0 >= 0xC2 && b0 <= 0xDF) {
    need = 1;
    cp = b0 & 0x1F;
  } else if (b0 >= 0xE0 && b0 <= 0xEF) {
    need = 2;
    cp = b0 & 0x0F;
    if (b0 == 0xE0) lo = 0xA0;
    if (b0 == 0xED) hi = 0x9F;
  } else if (b0 >= 0xF0 && b0 <= 0xF4) {
    need = 3;
    cp = b0 & 0x07;
    if (b0 == 0xF0) lo = 0x90;
    if (b0 == 0xF4) hi = 0x8F;
  } else {
    return {0, 1, false};
  }

  std::size_t i = 1;
  for (; i <= need; ++i) {
    if (i >= avail) return {0, i, false};
    const std::uint8_t b = p[i];
    const std::uint8_t min = (i == 1) ? lo : 0x80;
    const std::uint8_t max = (i == 1) ? hi : 0xBF;
    if (b < min || b > max) return {0, i, false};
    cp = (cp << 6) | (b & 0x3F);
  }
  return {cp, i, true};
}

void push_utf16le(ByteSeq& out, char16_t unit) {
  out.push_back(static_cast<std::uint8_t>(unit & 0xFF));
  out.push_back(static_cast<std::uint8_t>(unit >> 8));
}

bool is_high_surrogate(char16_t u) { return u >= 0xD800 && u <= 0xDBFF; }
bool is_low_surrogate(char16_t u) { return u >= 0xDC00 && u <= 0xDFFF; }

struct DisplayTables {
  std::array<char32_t, 256> to_symbol{};
  // Symbols occupy [0x21, 0x7E] and [0x100, 0x100 + 162).
  std::array<std::int16_t, 0x200> to_byte{};
};

constexpr bool is_self_displayed(unsigned b) { return b >= 0x21 && b <= 0x7E; }

constexpr DisplayTables make_display_tables() {
  DisplayTables t{};
  for (auto& v : t.to_byte) v = -1;
  char32_t next = 0x100;
  for (unsigned b = 0; b < 256; ++b) {
    const char32_t s = is_self_displayed(b) ? static_cast<char32_t>(b) : next++;
    t.to_symbol[b] = s;
    t.to_byte[s] = static_cast<std::int16_t>(b);
  }
  return t;
}

constexpr DisplayTables kDisplay = make_display_tables();

}  // namespace

std::string_view to_string(ByteDomain domain) {
  switch (domain) {
    case ByteDomain::Utf8:
      return "utf8";
    case ByteDomain::Utf16Le:
      return "utf16le";
  }
  return "unknown";
}

std::optional<ByteDomain> parse_byte_domain(std::string_view name) {
  if (name == "utf8") return ByteDomain::Utf8;
  if (name == "utf16le") return ByteDomain::Utf16Le;
  return std::nullopt;
}

void append_text_bytes(std::string_view text, ByteDomain domain, ByteSeq& out) {
  const auto* p = reinterpret_cast<const std::uint8_t*>(text.data());
  std::size_t pos = 0;
  if (domain == ByteDomain::Utf8) {
    // Validate, then copy verbatim.
    while (pos < text.size()) {
      const Utf8Step s = step_utf8(p + pos, text.size() - pos);
      if (!s.ok) throw InvalidText("ill-formed UTF-8 in input text", pos);
      pos += s.length;
    }
    out.insert(out.end(), p, p + text.size());
    return;
  }

  out.reserve(out.size() + text.size() * 2);
  while (pos < text.size()) {
    const Utf8Step s = step_utf8(p + pos, text.size() - pos);
    if (!s.ok) throw InvalidText("ill-formed UTF-8 in input text", pos);
    pos += s.length;
    if (s.cp < 0x10000) {
      push_utf16le(out, static_cast<char16_t>(s.cp));
    } else {
      const char32_t v = s.cp - 0x10000;
      push_utf16le(out, static_cast<char16_t>(0xD800 + (v >> 10)));
      push_utf16le(out, static_cast<char16_t>(0xDC00 + (v & 0x3FF)));
    }
  }
}

ByteSeq text_to_bytes(std::string_view text, ByteDomain domain) {
  ByteSeq out;
  append_text_bytes(text, domain, out);
  return out;
}

DecodedText bytes_to_text(std::span<const std::uint8_t> bytes,
                          ByteDomain domain) {
  DecodedText result;
  std::string& out = result.text;
  const std::size_t n = bytes.size();

  if (domain == ByteDomain::Utf8) {
    out.reserve(n);
    std::size_t pos = 0;
    while (pos < n) {
      const Utf8Step s = step_utf8(bytes.data() + pos, n - pos);
      if (s.ok) {
        out.append(reinterpret_cast<const char*>(bytes.data() + pos), s.length);
      } else {
        utf8::append(out, kReplacement);
        ++result.replacements;
      }
      pos += s.length;
    }
    return result;
  }

  out.reserve(n + n / 2);
  std::size_t pos = 0;
  while (pos + 1 < n) {
    const auto unit =
        static_cast<char16_t>(bytes[pos] | (bytes[pos + 1] << 8));
    pos += 2;
    if (is_high_surrogate(unit)) {
      if (pos + 1 < n) {
        const auto low =
            static_cast<char16_t>(bytes[pos] | (bytes[pos + 1] << 8));
        if (is_low_surrogate(low)) {
          pos += 2;
          utf8::append(out, 0x10000 + ((static_cast<char32_t>(unit) - 0xD800) << 10) +
                                (static_cast<char32_t>(low) - 0xDC00));
          continue;
        }
      }
      utf8::append(out, kReplacement);
      ++result.replacements;
    } else if (is_low_surrogate(unit)) {
      utf8::append(out, kReplacement);
      ++result.replacements;
    } else {
      utf8::append(out, unit);
    }
  }
  if (pos < n) {
    // trailing odd byte
    utf8::append(out, kReplacement);
    ++result.replacements;
  }
  return result;
}

char32_t byte_to_display(std::uint8_t b) noexcept { return kDisplay.to_symbol[b]; }

std::uint8_t display_to_byte(char32_t symbol) {
  if (symbol >= kDisplay.to_byte.size() || kDisplay.to_byte[symbol] < 0) {
    throw std::out_of_range("not a byte display symbol");
  }
  return static_cast<std::uint8_t>(kDisplay.to_byte[symbol]);
}

std::string bytes_to_display(std::span<const std::uint8_t> bytes) {
  std::string out;
  out.reserve(bytes.size() * 2);
  for (const std::uint8_t b : bytes) utf8::append(out, byte_to_display(b));
  return out;
}

ByteSeq display_to_bytes(std::string_view symbols) {
  ByteSeq out;
  std::size_t pos = 0;
  while (pos < symbols.size()) {
    const auto cp = utf8::next(symbols, pos);
    if (!cp) throw std::invalid_argument("ill-formed UTF-8 in display string");
    try {
      out.push_back(display_to_byte(*cp));
    } catch (const std::out_of_range&) {
      throw std::invalid_argument("unknown display symbol in '" +
                                  std::string(symbols) + "'");
    }
  }
  return out;
}

namespace utf8 {

std::optional<char32_t> next(std::string_view text, std::size_t& pos) noexcept {
  if (pos >= text.size()) return std::nullopt;
  const Utf8Step s = step_utf8(
      reinterpret_cast<const std::uint8_t*>(text.data()) + pos, text.size() - pos);
  if (!s.ok) return std::nullopt;
  pos += s.length;
  return s.cp;
}

void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::size_t length(std::string_view text) {
  std::size_t pos = 0;
  std::size_t count = 0;
  while (pos < text.size()) {
    const std::size_t at = pos;
    if (!next(text, pos)) throw InvalidText("ill-formed UTF-8 in input text", at);
    ++count;
  }
  return count;
}

}  // namespace utf8

}  // namespace bbpe
