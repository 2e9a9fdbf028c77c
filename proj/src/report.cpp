#include "bbpe/report.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "bbpe/codec.hpp"

namespace bbpe {

namespace {

std::string join_tags(const std::vector<std::string>& tags) {
  std::string out;
  for (const auto& t : tags) {
    if (!out.empty()) out += '+';
    out += t;
  }
  return out;
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n\r") == std::string::npos) return value;
  std::string quoted = "\"";
  for (const char c : value) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::size_t display_width(const std::string& s) {
  try {
    return utf8::length(s);
  } catch (const InvalidText&) {
    return s.size();
  }
}

bool is_numeric(const std::string& s) {
  return !s.empty() && (std::isdigit(static_cast<unsigned char>(s.front())) ||
                        (s.front() == '-' && s.size() > 1));
}

}  // namespace

std::string format_one_decimal(double value) {
  double rounded = std::round(value * 10.0) / 10.0;
  if (rounded == 0.0) rounded = 0.0;  // drop the sign of negative zero
  std::ostringstream out;
  out << std::fixed << std::setprecision(1) << rounded;
  return out.str();
}

ReportTable tabulate(const ComparisonReport& report) {
  ReportTable table;
  table.header = {"model",       "language",     "vocab_size", "utterances",
                  "total_tokens", "mean_tokens", "used_tokens", "coverage_pct",
                  "shared_merged", "shared_all"};
  for (const auto& m : report.models) table.header.push_back("mean_vs_" + m.name);
  const std::size_t fixed = 10;

  for (const auto& m : report.models) {
    auto blank_row = [&] {
      std::vector<std::string> row(table.header.size());
      row[0] = m.name;
      row[2] = std::to_string(m.vocab_size);
      return row;
    };

    for (const auto& l : m.stats.per_language) {
      auto row = blank_row();
      row[1] = l.tag;
      row[3] = std::to_string(l.utterances);
      row[4] = std::to_string(l.total_tokens);
      row[5] = format_one_decimal(l.mean_tokens_per_utterance);
      row[6] = std::to_string(l.used.ids.size());
      row[7] = format_one_decimal(l.coverage_percent);
      for (std::size_t k = 0; k < report.models.size(); ++k) {
        const auto& other = report.models[k];
        if (other.name == m.name) continue;
        const double base = other.stats.language(l.tag).mean_tokens_per_utterance;
        if (base > 0.0) {
          row[fixed + k] = format_one_decimal(relative_reduction(base, l.mean_tokens_per_utterance));
        }
      }
      table.rows.push_back(std::move(row));
    }

    if (!m.stats.shared) continue;
    const SharedTokenStats& shared = *m.stats.shared;
    for (const auto& [pair, merged] : shared.pairwise_merged) {
      auto row = blank_row();
      row[1] = pair.first + "+" + pair.second;
      row[8] = std::to_string(merged);
      row[9] = std::to_string(shared.pairwise_all.at(pair));
      table.rows.push_back(std::move(row));
    }
    if (report.tags.size() >= 3) {
      auto row = blank_row();
      row[1] = join_tags(report.tags);
      row[8] = std::to_string(shared.all_merged);
      row[9] = std::to_string(shared.all_all);
      table.rows.push_back(std::move(row));
    }
  }

  // A model's own mean_vs column is always empty in its rows, but other
  // models fill it, so every mean_vs column stays. With a single model the
  // only mean_vs column is empty everywhere and is removed.
  if (report.models.size() == 1) {
    table.header.resize(fixed);
    for (auto& row : table.rows) row.resize(fixed);
  }
  return table;
}

void write_csv(const ReportTable& table, std::ostream& out) {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << csv_field(cells[i]);
    }
    out << '\n';
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
}

void write_aligned(const ReportTable& table, std::ostream& out) {
  std::vector<std::size_t> width(table.header.size());
  for (std::size_t c = 0; c < width.size(); ++c) {
    width[c] = display_width(table.header[c]);
    for (const auto& row : table.rows) width[c] = std::max(width[c], display_width(row[c]));
  }
  auto line = [&](const std::vector<std::string>& cells, bool header) {
    std::string text;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c) text += "  ";
      const std::size_t pad = width[c] - display_width(cells[c]);
      const bool right = !header && c >= 2 && (is_numeric(cells[c]) || cells[c].empty());
      if (right) text.append(pad, ' ');
      text += cells[c];
      if (!right) text.append(pad, ' ');
    }
    while (!text.empty() && text.back() == ' ') text.pop_back();
    out << text << '\n';
  };
  line(table.header, true);
  for (const auto& row : table.rows) line(row, false);
}

}  // namespace bbpe
