#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "bbpe/model.hpp"

namespace bbpe {

inline constexpr int kModelFormatVersion = 1;

/// Malformed model document. `line()` is 1-based, 0 when not line-specific.
class ModelFormatError : public std::runtime_error {
 public:
  ModelFormatError(const std::string& what, std::size_t line)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Model document layout, one field per line, '\n' terminated:
//
//   bbpe-model <format_version>
//   byte_domain <utf8|utf16le>
//   target_vocab_size <N>
//   specials <K>
//   <special name>            (K lines)
//   merges <M>
//   <left> <right>            (M lines, display symbols, rank order)
//
// The writer is canonical and the reader accepts nothing else, so loading a
// saved model and saving it again reproduces the file byte for byte.
void save_model(const TokenizerModel& model, std::ostream& out);
TokenizerModel load_model(std::istream& in);

/// File variants. Throw std::runtime_error when the file cannot be opened or
/// written.
void save_model(const TokenizerModel& model, const std::filesystem::path& path);
TokenizerModel load_model(const std::filesystem::path& path);

}  // namespace bbpe
