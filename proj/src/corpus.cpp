#include "bbpe/corpus.hpp"

#include "bbpe/codec.hpp"

namespace bbpe {

LineReader::LineReader(std::istream& in, std::string source, std::size_t max_length)
    : in_(in), source_(std::move(source)), max_length_(max_length) {}

bool LineReader::next(std::string& line) {
  if (!std::getline(in_, line)) {
    if (in_.bad() || !in_.eof()) {
      throw CorpusError(source_ + ": read error after line " + std::to_string(line_));
    }
    return false;
  }
  ++line_;
  std::size_t length = 0;
  try {
    length = utf8::length(line);
  } catch (const InvalidText& e) {
    throw CorpusError(source_ + ":" + std::to_string(line_) +
                      ": ill-formed UTF-8 at byte " + std::to_string(e.offset()));
  }
  if (length > max_length_) {
    throw CorpusError(source_ + ":" + std::to_string(line_) + ": line has " +
                      std::to_string(length) + " characters, limit is " +
                      std::to_string(max_length_));
  }
  return true;
}

CorpusFile::CorpusFile(std::filesystem::path path, std::size_t max_length)
    : path_(std::move(path)),
      stream_(path_, std::ios::binary),
      reader_(stream_, path_.string(), max_length) {
  if (!stream_) throw CorpusError("cannot open corpus '" + path_.string() + "'");
}

std::pair<std::string, std::string> parse_tagged_path(std::string_view spec) {
  const auto eq = spec.find('=');
  if (eq == std::string_view::npos || eq == 0 || eq + 1 == spec.size()) {
    throw std::invalid_argument("expected TAG=PATH, got '" + std::string(spec) + "'");
  }
  return {std::string(spec.substr(0, eq)), std::string(spec.substr(eq + 1))};
}

}  // namespace bbpe
