#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bbpe/analytics.hpp"

namespace bbpe {

/// Flattened comparison report. Columns, in order:
///
///   model, language, vocab_size, utterances, total_tokens, mean_tokens,
///   used_tokens, coverage_pct, shared_merged, shared_all,
///   mean_vs_<model>...   (one per model, sorted by name; dropped when
///                          there is only one model)
///
/// Each model contributes one row per language, then one row per language
/// pair ("en+ko"), then a row for the intersection of all languages when
/// there are three or more. Language rows leave the shared columns empty and
/// intersection rows leave the per-language columns empty. Real values are
/// rounded to one decimal; mean_vs_X is the relative change of this model's
/// mean tokens per utterance against model X, in percent.
struct ReportTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

ReportTable tabulate(const ComparisonReport& report);

void write_csv(const ReportTable& table, std::ostream& out);
void write_aligned(const ReportTable& table, std::ostream& out);

/// Fixed one-decimal rendering; negative zero prints as "0.0".
std::string format_one_decimal(double value);

}  // namespace bbpe
