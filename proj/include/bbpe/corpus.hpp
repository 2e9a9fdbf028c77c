#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace bbpe {

inline constexpr std::size_t kDefaultMaxLineLength = 8192;

/// A corpus line that cannot be used: too long or not UTF-8.
class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads one utterance per line from a stream without buffering the whole
/// input. Lines longer than `max_length` scalars, or not valid UTF-8, raise
/// CorpusError naming the source and line number.
class LineReader {
 public:
  LineReader(std::istream& in, std::string source,
             std::size_t max_length = kDefaultMaxLineLength);

  /// Next line without its '\n'. Returns false at end of input and throws
  /// CorpusError if the stream fails for any reason other than EOF.
  bool next(std::string& line);

  std::size_t line_number() const noexcept { return line_; }
  const std::string& source() const noexcept { return source_; }

 private:
  std::istream& in_;
  std::string source_;
  std::size_t max_length_;
  std::size_t line_ = 0;
};

/// Owns the stream for a corpus file on disk.
class CorpusFile {
 public:
  explicit CorpusFile(std::filesystem::path path,
                      std::size_t max_length = kDefaultMaxLineLength);

  LineReader& reader() noexcept { return reader_; }
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
  std::ifstream stream_;
  LineReader reader_;
};

/// Splits "TAG=PATH". Throws std::invalid_argument when either side is empty.
std::pair<std::string, std::string> parse_tagged_path(std::string_view spec);

}  // namespace bbpe
