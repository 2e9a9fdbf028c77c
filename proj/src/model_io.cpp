#include "bbpe/model_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

namespace bbpe {

namespace {

constexpr std::string_view kMagic = "bbpe-model";

class ModelLines {
 public:
  explicit ModelLines(std::istream& in) : in_(in) {}

  std::string next(std::string_view expecting) {
    std::string line;
    if (!std::getline(in_, line)) {
      throw ModelFormatError("unexpected end of model, expected " + std::string(expecting),
                             line_ + 1);
    }
    ++line_;
    if (in_.eof()) throw ModelFormatError("missing final newline", line_);
    return line;
  }

  std::size_t line() const noexcept { return line_; }

  void expect_end() {
    if (in_.peek() != std::char_traits<char>::eof()) {
      throw ModelFormatError("trailing content after merges", line_ + 1);
    }
  }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

std::size_t parse_count(std::string_view text, std::size_t line) {
  std::size_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  // Canonical decimal only: no sign, no leading zeros.
  if (ec != std::errc{} || ptr != end || text.empty() ||
      (text.size() > 1 && text.front() == '0')) {
    throw ModelFormatError("invalid number '" + std::string(text) + "'", line);
  }
  return value;
}

std::string_view field(std::string_view line, std::string_view name, std::size_t lineno) {
  if (line.size() <= name.size() || line.substr(0, name.size()) != name ||
      line[name.size()] != ' ') {
    throw ModelFormatError("expected '" + std::string(name) + " <value>'", lineno);
  }
  return line.substr(name.size() + 1);
}

TokenId resolve(const Vocabulary& vocab, std::string_view symbols, std::size_t line) {
  ByteSeq bytes;
  try {
    bytes = display_to_bytes(symbols);
  } catch (const std::invalid_argument& e) {
    throw ModelFormatError(e.what(), line);
  }
  if (bytes.empty()) throw ModelFormatError("empty merge operand", line);
  const auto id = vocab.find(bytes);
  if (!id) {
    throw ModelFormatError("merge operand '" + std::string(symbols) +
                               "' is not defined by an earlier merge",
                           line);
  }
  return *id;
}

}  // namespace

void save_model(const TokenizerModel& model, std::ostream& out) {
  const Vocabulary& vocab = model.vocab();
  out << kMagic << ' ' << kModelFormatVersion << '\n';
  out << "byte_domain " << to_string(model.domain()) << '\n';
  out << "target_vocab_size " << model.target_vocab_size() << '\n';
  out << "specials " << vocab.special_count() << '\n';
  for (const auto& name : vocab.specials()) out << name << '\n';
  out << "merges " << model.merges().size() << '\n';
  for (const MergeRule& m : model.merges()) {
    out << bytes_to_display(vocab.bytes(m.left)) << ' '
        << bytes_to_display(vocab.bytes(m.right)) << '\n';
  }
}

TokenizerModel load_model(std::istream& in) {
  ModelLines reader(in);

  const std::string header = reader.next("header");
  const auto version = parse_count(field(header, kMagic, 1), 1);
  if (version != static_cast<std::size_t>(kModelFormatVersion)) {
    throw ModelFormatError("unsupported format version " + std::to_string(version), 1);
  }

  const std::string domain_line = reader.next("byte_domain");
  const auto domain = parse_byte_domain(field(domain_line, "byte_domain", reader.line()));
  if (!domain) throw ModelFormatError("unknown byte domain", reader.line());

  const std::string target_line = reader.next("target_vocab_size");
  const auto target =
      parse_count(field(target_line, "target_vocab_size", reader.line()), reader.line());

  const std::string specials_line = reader.next("specials");
  const auto special_count =
      parse_count(field(specials_line, "specials", reader.line()), reader.line());
  if (special_count > target) {
    throw ModelFormatError("more specials than vocabulary entries", reader.line());
  }
  std::vector<std::string> specials;
  specials.reserve(special_count);
  for (std::size_t i = 0; i < special_count; ++i) specials.push_back(reader.next("special name"));

  std::optional<TokenizerModel> model;
  try {
    model.emplace(*domain, target, std::move(specials));
  } catch (const std::invalid_argument& e) {
    throw ModelFormatError(e.what(), reader.line());
  }

  const std::string merges_line = reader.next("merges");
  const auto merge_count =
      parse_count(field(merges_line, "merges", reader.line()), reader.line());
  if (merge_count > target - model->vocab().size()) {
    throw ModelFormatError("merge count exceeds target vocabulary size", reader.line());
  }

  for (std::size_t i = 0; i < merge_count; ++i) {
    const std::string line = reader.next("merge rule");
    const auto space = line.find(' ');
    if (space == std::string::npos || line.find(' ', space + 1) != std::string::npos) {
      throw ModelFormatError("merge rule must be '<left> <right>'", reader.line());
    }
    const std::string_view view(line);
    const TokenId left = resolve(model->vocab(), view.substr(0, space), reader.line());
    const TokenId right = resolve(model->vocab(), view.substr(space + 1), reader.line());
    try {
      model->add_merge(left, right);
    } catch (const std::exception& e) {
      throw ModelFormatError(e.what(), reader.line());
    }
  }
  reader.expect_end();
  return std::move(*model);
}

void save_model(const TokenizerModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  save_model(model, out);
  out.close();
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

TokenizerModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model '" + path.string() + "'");
  try {
    return load_model(in);
  } catch (const ModelFormatError& e) {
    throw ModelFormatError(path.string() + ": " + e.what(), 0);
  }
}

}  // namespace bbpe
