#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bbpe {

/// The byte substrate a tokenizer operates on.
enum class ByteDomain {
  Utf8,
  Utf16Le,
};

/// Raw bytes of an encoded text or token. No alignment requirement: a
/// Utf16Le token may end in the middle of a code unit.
using ByteSeq = std::vector<std::uint8_t>;

std::string_view to_string(ByteDomain domain);
std::optional<ByteDomain> parse_byte_domain(std::string_view name);

/// Raised when input text is not well-formed UTF-8.
class InvalidText : public std::invalid_argument {
 public:
  InvalidText(const std::string& what, std::size_t offset)
      : std::invalid_argument(what), offset_(offset) {}

  /// Byte offset of the first ill-formed sequence.
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Encodes UTF-8 text into the given domain. Utf16Le output carries no
/// byte-order mark; scalars above U+FFFF become surrogate pairs.
ByteSeq text_to_bytes(std::string_view text, ByteDomain domain);

/// Same as text_to_bytes but appends to `out`.
void append_text_bytes(std::string_view text, ByteDomain domain, ByteSeq& out);

struct DecodedText {
  std::string text;
  std::size_t replacements = 0;
};

/// Decodes arbitrary bytes back to UTF-8 text. Never fails: every malformed
/// unit is replaced with U+FFFD and counted.
DecodedText bytes_to_text(std::span<const std::uint8_t> bytes,
                          ByteDomain domain);

// Display symbols: printable ASCII other than space maps to itself, every
// other byte maps to U+0100 + k where k is the byte's rank among the
// non-printable bytes. 0x00 -> U+0100 'Ā', 0x20 -> U+0120 'Ġ'.
char32_t byte_to_display(std::uint8_t b) noexcept;

/// Inverse of byte_to_display. Throws std::out_of_range for any scalar
/// outside the mapping's image.
std::uint8_t display_to_byte(char32_t symbol);

/// Renders bytes as a UTF-8 string of display symbols.
std::string bytes_to_display(std::span<const std::uint8_t> bytes);

/// Parses a UTF-8 string of display symbols. Throws std::invalid_argument on
/// malformed UTF-8 or a symbol outside the mapping.
ByteSeq display_to_bytes(std::string_view symbols);

namespace utf8 {

/// Decodes one scalar starting at `pos` and advances it. Returns nullopt for
/// an ill-formed sequence and leaves `pos` unchanged.
std::optional<char32_t> next(std::string_view text, std::size_t& pos) noexcept;

void append(std::string& out, char32_t cp);

/// Number of scalars in well-formed UTF-8; throws InvalidText otherwise.
std::size_t length(std::string_view text);

}  // namespace utf8

}  // namespace bbpe
