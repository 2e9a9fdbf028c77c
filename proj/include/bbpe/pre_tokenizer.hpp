#pragma once

#include <string_view>
#include <vector>

namespace bbpe {

/// True for the Unicode White_Space characters.
bool is_whitespace(char32_t cp) noexcept;

/// Splits text into merge-isolated pieces. Each maximal run of non-whitespace
/// scalars is one piece, carrying a single U+0020 that immediately precedes
/// it; every other whitespace scalar is a piece of its own. The pieces are
/// views into `text` and concatenate back to it exactly.
///
/// Throws InvalidText on ill-formed UTF-8.
std::vector<std::string_view> pre_tokenize(std::string_view text);

}  // namespace bbpe
