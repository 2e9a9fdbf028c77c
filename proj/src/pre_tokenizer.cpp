#include "bbpe/pre_tokenizer.hpp"

#include "bbpe/codec.hpp"

namespace bbpe {

bool is_whitespace(char32_t cp) noexcept {
  switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0x85: case 0xA0: case 0x1680:
    case 0x2028: case 0x2029: case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

std::vector<std::string_view> pre_tokenize(std::string_view text) {
  std::vector<std::string_view> pieces;
  std::size_t pos = 0;
  // Start of a pending lone space that may attach to the next word.
  std::size_t pending_space = std::string_view::npos;

  while (pos < text.size()) {
    const std::size_t start = pos;
    const auto cp = utf8::next(text, pos);
    if (!cp) throw InvalidText("ill-formed UTF-8 in input text", start);

    if (is_whitespace(*cp)) {
      if (pending_space != std::string_view::npos) {
        pieces.push_back(text.substr(pending_space, 1));
        pending_space = std::string_view::npos;
      }
      if (*cp == U' ') {
        pending_space = start;
      } else {
        pieces.push_back(text.substr(start, pos - start));
      }
      continue;
    }

    const std::size_t word_start =
        pending_space != std::string_view::npos ? pending_space : start;
    pending_space = std::string_view::npos;
    while (pos < text.size()) {
      std::size_t probe = pos;
      const auto next_cp = utf8::next(text, probe);
      if (!next_cp) throw InvalidText("ill-formed UTF-8 in input text", pos);
      if (is_whitespace(*next_cp)) break;
      pos = probe;
    }
    pieces.push_back(text.substr(word_start, pos - word_start));
  }
  if (pending_space != std::string_view::npos) {
    pieces.push_back(text.substr(pending_space, 1));
  }
  return pieces;
}

}  // namespace bbpe
