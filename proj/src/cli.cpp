#include "bbpe/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <set>

#include "bbpe/analytics.hpp"
#include "bbpe/corpus.hpp"
#include "bbpe/model_io.hpp"
#include "bbpe/report.hpp"
#include "bbpe/trainer.hpp"

namespace bbpe {

namespace {

constexpr std::size_t kBatchLines = 8192;

struct TrainArgs {
  std::vector<std::string> corpora;
  std::string domain = "utf16le";
  std::size_t vocab_size = kTrilingualVocabSize;
  std::vector<std::string> specials;
  std::uint64_t min_pair_freq = 2;
  std::size_t shards = 1;
  std::string output;
};

struct CodecArgs {
  std::string model;
  std::string input = "-";
  std::string output = "-";
  bool display = false;
};

struct ReportArgs {
  std::vector<std::string> models;
  std::vector<std::string> corpora;
  std::string output;
  bool csv = false;
};

struct TaggedPath {
  std::string tag;
  std::filesystem::path path;
};

std::vector<TaggedPath> tagged_paths(const std::vector<std::string>& specs,
                                     bool allow_bare, std::string_view what) {
  std::vector<TaggedPath> out;
  std::set<std::string> seen;
  for (const auto& spec : specs) {
    TaggedPath tp;
    if (allow_bare && spec.find('=') == std::string::npos) {
      tp.path = spec;
      tp.tag = tp.path.stem().string();
      // Bare paths never collide; suffix repeated stems.
      for (int n = 2; seen.contains(tp.tag); ++n) {
        tp.tag = tp.path.stem().string() + "_" + std::to_string(n);
      }
    } else {
      auto [tag, path] = parse_tagged_path(spec);
      tp.tag = std::move(tag);
      tp.path = std::move(path);
    }
    if (!seen.insert(tp.tag).second) {
      throw std::invalid_argument("duplicate " + std::string(what) + " tag '" + tp.tag + "'");
    }
    out.push_back(std::move(tp));
  }
  return out;
}

// Input is "-" for the caller's stream, else a file.
class Input {
 public:
  Input(const std::string& path, std::istream& fallback) {
    if (path == "-") {
      stream_ = &fallback;
      name_ = "<stdin>";
    } else {
      file_ = std::make_unique<std::ifstream>(path, std::ios::binary);
      if (!*file_) throw CorpusError("cannot open input '" + path + "'");
      stream_ = file_.get();
      name_ = path;
    }
  }
  std::istream& stream() { return *stream_; }
  const std::string& name() const { return name_; }

 private:
  std::unique_ptr<std::ifstream> file_;
  std::istream* stream_ = nullptr;
  std::string name_;
};

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : path_(path) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
      if (!*file_) throw std::runtime_error("cannot open '" + path + "' for writing");
      stream_ = file_.get();
    }
  }
  std::ostream& stream() { return *stream_; }

  void finish() {
    if (file_) file_->close();
    else stream_->flush();
    if (!*stream_) throw std::runtime_error("failed writing '" + (path_.empty() ? "-" : path_) + "'");
  }

 private:
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

ByteDomain domain_from(const std::string& name) {
  const auto d = parse_byte_domain(name);
  if (!d) throw std::invalid_argument("unknown byte domain '" + name + "'");
  return *d;
}

int cmd_train(const TrainArgs& args, std::size_t max_line, std::ostream& out) {
  TrainOptions options;
  options.domain = domain_from(args.domain);
  options.target_vocab_size = args.vocab_size;
  options.specials = args.specials;
  options.min_pair_frequency = args.min_pair_freq;
  options.shards = args.shards;
  validate(options);

  const auto start = std::chrono::steady_clock::now();
  PreTokenCounts counts;
  std::uint64_t lines = 0;
  for (const auto& corpus : tagged_paths(args.corpora, true, "corpus")) {
    CorpusFile file(corpus.path, max_line);
    std::vector<std::string> batch;
    batch.reserve(kBatchLines);
    std::string line;
    while (file.reader().next(line)) {
      batch.push_back(std::move(line));
      if (batch.size() == kBatchLines) {
        counts.add_batch(batch, options.shards);
        lines += batch.size();
        batch.clear();
      }
    }
    counts.add_batch(batch, options.shards);
    lines += batch.size();
  }

  const TokenizerModel model = train(counts, options);
  save_model(model, std::filesystem::path(args.output));
  const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);

  out << "byte_domain " << to_string(model.domain()) << '\n'
      << "utterances " << lines << '\n'
      << "vocab_size " << model.vocab().size() << '\n'
      << "merges " << model.merges().size() << '\n'
      << "training_seconds " << elapsed.count() << '\n';
  return 0;
}

int cmd_encode(const CodecArgs& args, std::size_t max_line, std::istream& in,
               std::ostream& out) {
  const TokenizerModel model = load_model(std::filesystem::path(args.model));
  Input input(args.input, in);
  Output output(args.output, out);
  LineReader reader(input.stream(), input.name(), max_line);
  std::string line;
  std::string text;
  while (reader.next(line)) {
    text.clear();
    for (const TokenId id : model.encode(line)) {
      if (!text.empty()) text += ' ';
      text += args.display ? model.token_display(id) : std::to_string(id);
    }
    text += '\n';
    output.stream() << text;
  }
  output.finish();
  return 0;
}

int cmd_decode(const CodecArgs& args, std::istream& in, std::ostream& out,
               std::ostream& err) {
  const TokenizerModel model = load_model(std::filesystem::path(args.model));
  Input input(args.input, in);
  Output output(args.output, out);
  // Token lines are not corpus text; no length limit applies.
  LineReader reader(input.stream(), input.name(), std::string::npos);
  std::string line;
  std::vector<TokenId> ids;
  while (reader.next(line)) {
    ids.clear();
    std::string_view rest(line);
    while (!rest.empty()) {
      const auto space = rest.find(' ');
      const std::string_view item = rest.substr(0, space);
      rest = space == std::string_view::npos ? std::string_view{} : rest.substr(space + 1);
      auto fail = [&](const std::string& why) -> std::runtime_error {
        return std::runtime_error(input.name() + ":" + std::to_string(reader.line_number()) +
                                  ": " + why);
      };
      if (args.display) {
        ByteSeq bytes;
        try {
          bytes = display_to_bytes(item);
        } catch (const std::invalid_argument& e) {
          throw fail(e.what());
        }
        const auto id = model.vocab().find(bytes);
        if (!id) throw fail("unknown token '" + std::string(item) + "'");
        ids.push_back(*id);
      } else {
        TokenId id = 0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), id);
        if (ec != std::errc{} || ptr != item.data() + item.size() || item.empty()) {
          throw fail("invalid token id '" + std::string(item) + "'");
        }
        if (!model.vocab().contains(id)) {
          throw fail("token id " + std::to_string(id) + " is outside the vocabulary");
        }
        ids.push_back(id);
      }
    }
    const DecodedText decoded = model.decode(ids);
    if (decoded.replacements > 0) {
      err << input.name() << ":" << reader.line_number() << ": " << decoded.replacements
          << " replacement character(s) inserted\n";
    }
    output.stream() << decoded.text << '\n';
  }
  output.finish();
  return 0;
}

int cmd_report(const ReportArgs& args, std::size_t max_line, std::size_t min_models,
               std::ostream& out) {
  const auto model_paths = tagged_paths(args.models, true, "model");
  if (model_paths.size() < min_models) {
    throw std::invalid_argument("at least " + std::to_string(min_models) + " models required");
  }
  const auto corpora = tagged_paths(args.corpora, false, "corpus");
  if (corpora.empty()) throw std::invalid_argument("at least one --corpus TAG=PATH required");

  std::vector<TokenizerModel> models;
  models.reserve(model_paths.size());
  for (const auto& m : model_paths) models.push_back(load_model(m.path));

  // tallies[model][corpus]; each corpus is streamed once for all models.
  std::vector<std::vector<LanguageTally>> tallies(models.size());
  for (const auto& corpus : corpora) {
    for (std::size_t m = 0; m < models.size(); ++m) tallies[m].emplace_back(models[m], corpus.tag);
    CorpusFile file(corpus.path, max_line);
    std::string line;
    while (file.reader().next(line)) {
      for (auto& per_model : tallies) per_model.back().add(line);
    }
  }

  std::vector<ModelStats> stats;
  for (std::size_t m = 0; m < models.size(); ++m) {
    stats.push_back({model_paths[m].tag, models[m].vocab().content_size(),
                     compute_stats(models[m], tallies[m])});
  }
  const ReportTable table = tabulate(make_report(std::move(stats)));

  if (!args.output.empty()) {
    Output csv(args.output, out);
    write_csv(table, csv.stream());
    csv.finish();
  }
  if (args.csv) {
    write_csv(table, out);
  } else {
    write_aligned(table, out);
  }
  out.flush();
  if (!out) throw std::runtime_error("failed writing report");
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Byte-level BPE over UTF-8 or UTF-16LE bytes: train, encode, decode, "
               "and corpus statistics",
               "bbpe"};
  app.require_subcommand(1);
  app.fallthrough();
  std::size_t max_line = kDefaultMaxLineLength;
  app.add_option("--max-line-length", max_line,
                 "Reject corpus lines longer than this many characters")
      ->capture_default_str();

  const std::vector<std::string> domains{"utf8", "utf16le"};

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "Learn merges over one or more corpora");
  train_cmd->add_option("--corpus", train_args.corpora, "Corpus file, TAG=PATH or PATH (repeatable)")
      ->required();
  train_cmd->add_option("--byte-domain", train_args.domain, "Byte substrate")
      ->check(CLI::IsMember(domains))
      ->capture_default_str();
  train_cmd->add_option("--vocab-size", train_args.vocab_size, "Target vocabulary size")
      ->capture_default_str();
  train_cmd->add_option("--special", train_args.specials, "Special token name (repeatable)");
  train_cmd->add_option("--min-pair-freq", train_args.min_pair_freq,
                        "Stop when the best pair is rarer than this")
      ->capture_default_str();
  train_cmd->add_option("--shards", train_args.shards, "Counting threads (result is unaffected)")
      ->capture_default_str();
  train_cmd->add_option("-o,--output", train_args.output, "Model file to write")->required();

  CodecArgs encode_args;
  auto* encode_cmd = app.add_subcommand("encode", "Text lines to token id lines");
  encode_cmd->add_option("--model", encode_args.model, "Model file")->required();
  encode_cmd->add_option("--input", encode_args.input, "Input file, - for stdin")
      ->capture_default_str();
  encode_cmd->add_option("-o,--output", encode_args.output, "Output file, - for stdout")
      ->capture_default_str();
  encode_cmd->add_flag("--display", encode_args.display, "Emit display symbols instead of ids");

  CodecArgs decode_args;
  auto* decode_cmd = app.add_subcommand("decode", "Token id lines back to text lines");
  decode_cmd->add_option("--model", decode_args.model, "Model file")->required();
  decode_cmd->add_option("--input", decode_args.input, "Input file, - for stdin")
      ->capture_default_str();
  decode_cmd->add_option("-o,--output", decode_args.output, "Output file, - for stdout")
      ->capture_default_str();
  decode_cmd->add_flag("--display", decode_args.display, "Input holds display symbols");

  ReportArgs stats_args;
  auto* stats_cmd = app.add_subcommand("stats", "Per-language token statistics for one model");
  stats_cmd->add_option("--model", stats_args.models, "Model file")->required()->expected(1);
  stats_cmd->add_option("--corpus", stats_args.corpora, "TAG=PATH (repeatable)")->required();
  stats_cmd->add_option("-o,--output", stats_args.output, "Also write the report as CSV here");
  stats_cmd->add_flag("--csv", stats_args.csv, "Print CSV instead of an aligned table");

  ReportArgs compare_args;
  auto* compare_cmd = app.add_subcommand("compare", "Side-by-side statistics for several models");
  compare_cmd->add_option("--model", compare_args.models, "NAME=PATH or PATH (repeatable)")
      ->required();
  compare_cmd->add_option("--corpus", compare_args.corpora, "TAG=PATH (repeatable)")->required();
  compare_cmd->add_option("-o,--output", compare_args.output, "Also write the report as CSV here");
  compare_cmd->add_flag("--csv", compare_args.csv, "Print CSV instead of an aligned table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*train_cmd) return cmd_train(train_args, max_line, out);
    if (*encode_cmd) return cmd_encode(encode_args, max_line, in, out);
    if (*decode_cmd) return cmd_decode(decode_args, in, out, err);
    if (*stats_cmd) return cmd_report(stats_args, max_line, 1, out);
    if (*compare_cmd) return cmd_report(compare_args, max_line, 2, out);
  } catch (const std::exception& e) {
    err << "bbpe: error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace bbpe
