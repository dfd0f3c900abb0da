#pragma once

#include <string>
#include <vector>

#include "reclab/benchmark.hpp"

namespace reclab {

struct ComparisonRow {
  std::string strategy;
  Level performance = Level::High;  // High = fastest
  Level query_dependency = Level::Low;
};

struct DatasetInfo {
  std::string source;
  std::size_t n_users = 0;
  std::size_t n_articles = 0;
};

/// Strategy comparison in the shape of "Run-time Performance / Query
/// Dependency" rows, plus the underlying summaries.
struct ComparisonReport {
  DatasetInfo dataset;
  std::vector<ComparisonRow> rows;
  std::vector<BenchmarkSummary> summaries;

  /// Machine-readable document. Key order and formatting are fixed; with
  /// `include_timing` false the output is byte-stable for identical inputs.
  std::string to_json(bool include_timing = true) const;
  /// Aligned plain-text tables.
  std::string to_text() const;
};

/// Performance labels rank strategies by amortized time per query (setup
/// included): fastest High, slowest Low, everything between Medium.
ComparisonReport compare_report(std::vector<BenchmarkSummary> summaries, DatasetInfo dataset = {});

}  // namespace reclab
