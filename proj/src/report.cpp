#include "reclab/report.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace reclab {

namespace {

using Json = nlohmann::ordered_json;

std::string ms(std::int64_t ns) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", static_cast<double>(ns) / 1e6);
  return buf;
}

std::string ms(double ns) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", ns / 1e6);
  return buf;
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

// Left-aligned columns; widths taken from the widest cell.
std::string render_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths;
  for (const auto& row : rows) {
    if (row.size() > widths.size()) widths.resize(row.size(), 0);
    for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      line += row[i];
      if (i + 1 < row.size()) line.append(widths[i] - row[i].size() + 2, ' ');
    }
    out += line + '\n';
  }
  return out;
}

Json summary_json(const BenchmarkSummary& s, bool include_timing) {
  Json j;
  j["name"] = s.strategy;
  Json config = Json::object();
  for (const auto& [key, value] : s.config) config[key] = value;
  j["config"] = config;
  j["iterations"] = s.iterations;
  j["seed"] = s.seed;
  j["txn_length"] = s.txn_length;

  Json bins = Json::array();
  Json counts = Json::array();
  for (const auto& b : s.histogram.bins) {
    bins.push_back(b.label);
    counts.push_back(b.count);
  }
  j["histogram"] = {{"scheme", s.histogram.scheme},
                    {"bins", bins},
                    {"counts", counts},
                    {"total", s.histogram.total}};
  j["proportions"] = s.proportions;
  j["query_dependency"] = {{"empty_rate", s.qd.empty_rate},
                           {"length_cv", s.qd.length_cv},
                           {"score", s.qd.score},
                           {"label", std::string(level_name(s.qd.label))}};
  if (include_timing) {
    j["timing"] = {{"setup_ns", s.timing.setup_ns},
                   {"query_total_ns", s.timing.query_total_ns},
                   {"total_ns", s.timing.total_ns},
                   {"mean_ns", s.timing.mean_ns},
                   {"p50_ns", s.timing.p50_ns},
                   {"p95_ns", s.timing.p95_ns}};
  }
  return j;
}

}  // namespace

ComparisonReport compare_report(std::vector<BenchmarkSummary> summaries, DatasetInfo dataset) {
  ComparisonReport report;
  report.dataset = std::move(dataset);
  report.summaries = std::move(summaries);

  const std::size_t n = report.summaries.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& sa = report.summaries[a];
    const auto& sb = report.summaries[b];
    return sa.timing.amortized_ns(sa.iterations) < sb.timing.amortized_ns(sb.iterations);
  });
  std::vector<Level> performance(n, Level::Medium);
  for (std::size_t rank = 0; rank < n; ++rank) {
    if (rank == 0) {
      performance[order[rank]] = Level::High;
    } else if (rank + 1 == n) {
      performance[order[rank]] = Level::Low;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    report.rows.push_back({report.summaries[i].strategy, performance[i],
                           report.summaries[i].qd.label});
  }
  return report;
}

std::string ComparisonReport::to_json(bool include_timing) const {
  Json doc;
  doc["dataset"] = {{"source", dataset.source},
                    {"n_users", dataset.n_users},
                    {"n_articles", dataset.n_articles}};
  Json comparison = Json::array();
  for (const auto& row : rows) {
    Json r;
    r["strategy"] = row.strategy;
    if (include_timing) r["run_time_performance"] = std::string(level_name(row.performance));
    r["query_dependency"] = std::string(level_name(row.query_dependency));
    comparison.push_back(r);
  }
  doc["comparison"] = comparison;
  Json strategies = Json::array();
  for (const auto& s : summaries) strategies.push_back(summary_json(s, include_timing));
  doc["strategies"] = strategies;
  return doc.dump(2) + "\n";
}

std::string ComparisonReport::to_text() const {
  std::ostringstream out;
  out << "Comparison of the strategies\n";
  std::vector<std::vector<std::string>> table{{"Strategy", "Run-time Performance", "Query Dependency"}};
  for (const auto& row : rows) {
    table.push_back({row.strategy, std::string(level_name(row.performance)),
                     std::string(level_name(row.query_dependency))});
  }
  out << render_table(table);

  for (const auto& s : summaries) {
    out << "\nResult set length for " << s.strategy << " (" << s.iterations
        << " iterations, transaction length " << s.txn_length << ")\n";
    std::vector<std::string> header{"Output length"};
    std::vector<std::string> amount{"Amount"};
    std::vector<std::string> proportion{"Proportion"};
    for (std::size_t i = 0; i < s.histogram.bins.size(); ++i) {
      header.push_back(s.histogram.bins[i].label);
      amount.push_back(std::to_string(s.histogram.bins[i].count));
      proportion.push_back("%" + format_tenth(s.proportions[i]));
    }
    header.push_back("Sum");
    amount.push_back(std::to_string(s.histogram.total));
    proportion.push_back("%100.0");
    out << render_table({header, amount, proportion});
    out << "Timing (ms): setup " << ms(s.timing.setup_ns) << ", queries "
        << ms(s.timing.query_total_ns) << ", total " << ms(s.timing.total_ns) << ", mean "
        << ms(s.timing.mean_ns) << ", p50 " << ms(static_cast<double>(s.timing.p50_ns))
        << ", p95 " << ms(static_cast<double>(s.timing.p95_ns)) << "\n";
    out << "Query dependency: empty rate " << fixed3(s.qd.empty_rate) << ", length cv "
        << fixed3(s.qd.length_cv) << ", score " << fixed3(s.qd.score) << " -> "
        << level_name(s.qd.label) << "\n";
  }
  return out.str();
}

}  // namespace reclab
