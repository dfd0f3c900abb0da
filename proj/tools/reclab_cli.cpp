// reclab: generate synthetic rating matrices, benchmark the recommendation
// strategies and run one-off recommendation queries.
//
// Exit codes: 0 success, 1 runtime or I/O failure, 2 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "reclab/benchmark.hpp"
#include "reclab/report.hpp"
#include "reclab/strategies.hpp"
#include "reclab/synth_data.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StrategyParams {
  double theta = 9.3;
  std::size_t k = 100;
  std::size_t top_n = 8;
  std::size_t max_iter = 50;
  std::string kmeans_init = "random";
  std::optional<std::uint64_t> kmeans_seed;
  std::optional<double> x;
  double pseudo_rating = 10.0;
};

void add_strategy_options(CLI::App* cmd, StrategyParams& p) {
  cmd->add_option("--theta", p.theta, "Threshold strategy: ratings strictly above count")
      ->capture_default_str();
  cmd->add_option("--k", p.k, "K-means strategy: number of clusters")->capture_default_str();
  cmd->add_option("--top-n", p.top_n, "K-means strategy: result length")->capture_default_str();
  cmd->add_option("--max-iter", p.max_iter, "K-means strategy: iteration cap")
      ->capture_default_str();
  cmd->add_option("--kmeans-init", p.kmeans_init, "K-means initializer")
      ->check(CLI::IsMember({"random", "kmeans++"}))
      ->capture_default_str();
  cmd->add_option("--kmeans-seed", p.kmeans_seed, "K-means seed (defaults to --seed)");
  cmd->add_option("--x", p.x, "Content strategy: half bin width (default stddev(means)/4)");
  cmd->add_option("--pseudo-rating", p.pseudo_rating,
                  "K-means strategy: rating assumed for liked articles")
      ->capture_default_str();
}

reclab::Rating rating_arg(double value, const std::string& flag) {
  const auto r = reclab::Rating::from_value(value);
  if (!r.in_range()) throw UsageError(flag + " must lie in [-10.0, 10.0]");
  return r;
}

std::unique_ptr<reclab::Strategy> make_strategy(const std::string& name, const StrategyParams& p,
                                                std::uint64_t seed) {
  if (name == "threshold") {
    return std::make_unique<reclab::ThresholdStrategy>(
        reclab::ThresholdConfig{rating_arg(p.theta, "--theta")});
  }
  if (name == "kmeans") {
    reclab::KMeansOptions options;
    options.k = p.k;
    options.seed = p.kmeans_seed.value_or(seed);
    options.max_iter = p.max_iter;
    options.init = p.kmeans_init == "kmeans++" ? reclab::InitMethod::KMeansPlusPlus
                                               : reclab::InitMethod::RandomRows;
    reclab::KmeansRecConfig rec;
    rec.top_n = p.top_n;
    rec.pseudo_rating = rating_arg(p.pseudo_rating, "--pseudo-rating");
    return std::make_unique<reclab::KmeansStrategy>(options, rec);
  }
  return std::make_unique<reclab::ContentStrategy>(p.x);
}

// Range checks that need no dataset; run before anything heavy.
void check_strategy_params(const StrategyParams& p) {
  rating_arg(p.theta, "--theta");
  rating_arg(p.pseudo_rating, "--pseudo-rating");
  if (p.k < 1) throw UsageError("--k must be at least 1");
  if (p.top_n < 1) throw UsageError("--top-n must be at least 1");
  if (p.max_iter < 1) throw UsageError("--max-iter must be at least 1");
  if (p.x && !(*p.x > 0.0)) throw UsageError("--x must be positive");
}

void check_against_matrix(const std::string& strategy, const StrategyParams& p,
                          const reclab::RatingsMatrix& m, std::size_t txn_len) {
  if (strategy == "kmeans" && p.k > m.n_users()) {
    throw UsageError("--k " + std::to_string(p.k) + " exceeds the " +
                     std::to_string(m.n_users()) + " users in the dataset");
  }
  if (txn_len > m.n_articles()) {
    throw UsageError("--txn-len " + std::to_string(txn_len) + " exceeds the " +
                     std::to_string(m.n_articles()) + " articles in the dataset");
  }
}

std::vector<std::size_t> parse_index_list(const std::string& text, const std::string& flag) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos) {
      throw UsageError(flag + ": '" + item + "' is not a non-negative integer");
    }
    out.push_back(std::stoull(item));
  }
  if (out.empty()) throw UsageError(flag + " is empty");
  return out;
}

reclab::RatingsMatrix load_dataset(const std::string& path) {
  return reclab::load_csv(path);
}

int cmd_gen(const reclab::GeneratorConfig& cfg, const std::string& out_path) {
  try {
    cfg.validate();
  } catch (const reclab::Error& e) {
    throw UsageError(e.what());
  }
  const auto m = reclab::generate(cfg);
  reclab::save_csv(m, out_path);

  double lo = 1.0, hi = 0.0, sum = 0.0;
  for (std::size_t a = 0; a < m.n_articles(); ++a) {
    const double r = reclab::missing_ratio(m, a);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
    sum += r;
  }
  std::printf("wrote %zu users x %zu articles to %s\n", m.n_users(), m.n_articles(),
              out_path.c_str());
  std::printf("per-article missing ratio: min %.3f, max %.3f, mean %.3f\n", lo, hi,
              sum / static_cast<double>(m.n_articles()));
  return kExitOk;
}

struct BenchArgs {
  std::string input;
  std::string out;
  std::string strategy;
  bool all = false;
  std::size_t iterations = reclab::kDefaultIterations;
  std::uint64_t seed = reclab::kDefaultBenchSeed;
  std::size_t txn_len = reclab::Transaction::kDefaultLength;
  std::string edges = "2,5,24";
  std::string scheme;
  double qd_low = 0.2;
  double qd_high = 0.6;
  StrategyParams params;
};

int cmd_bench(const BenchArgs& args) {
  check_strategy_params(args.params);
  if (args.iterations < 1) throw UsageError("--iterations must be at least 1");
  if (args.txn_len < 1) throw UsageError("--txn-len must be at least 1");
  const reclab::QdCutoffs cutoffs{args.qd_low, args.qd_high};
  std::vector<std::size_t> edges;
  std::optional<reclab::BinScheme> forced_scheme;
  try {
    cutoffs.validate();
    edges = parse_index_list(args.edges, "--edges");
    (void)reclab::BinScheme::labeled(edges);
    if (!args.scheme.empty()) forced_scheme = reclab::BinScheme::parse(args.scheme, edges);
  } catch (const reclab::Error& e) {
    throw UsageError(e.what());
  }

  const std::vector<std::string> names =
      args.all ? std::vector<std::string>{"content", "threshold", "kmeans"}
               : std::vector<std::string>{args.strategy};

  reclab::RatingsMatrix m;
  try {
    m = load_dataset(args.input);
  } catch (const reclab::Error& e) {
    std::fprintf(stderr, "error: cannot load dataset: %s\n", e.what());
    return kExitRuntime;
  }
  for (const auto& name : names) check_against_matrix(name, args.params, m, args.txn_len);

  std::vector<reclab::BenchmarkSummary> summaries;
  for (const auto& name : names) {
    auto strategy = make_strategy(name, args.params, args.seed);
    const auto scheme = forced_scheme ? *forced_scheme
                        : name == "threshold" ? reclab::BinScheme::labeled(edges)
                                              : reclab::BinScheme::content();
    summaries.push_back(
        reclab::benchmark(m, *strategy, args.iterations, args.seed, scheme, args.txn_len, cutoffs));
  }
  const auto report =
      reclab::compare_report(std::move(summaries), {args.input, m.n_users(), m.n_articles()});
  std::fputs(report.to_text().c_str(), stdout);
  if (!args.out.empty()) {
    std::ofstream out(args.out, std::ios::binary | std::ios::trunc);
    out << report.to_json();
    out.close();
    if (!out) {
      std::fprintf(stderr, "error: cannot write report to %s\n", args.out.c_str());
      return kExitRuntime;
    }
  }
  return kExitOk;
}

struct RecommendArgs {
  std::string input;
  std::string strategy;
  std::string txn;
  std::size_t txn_len = reclab::Transaction::kDefaultLength;
  std::uint64_t seed = reclab::kDefaultBenchSeed;
  StrategyParams params;
};

int cmd_recommend(const RecommendArgs& args) {
  check_strategy_params(args.params);
  auto ids = parse_index_list(args.txn, "--txn");
  if (ids.size() != args.txn_len) {
    throw UsageError("--txn has " + std::to_string(ids.size()) + " articles, expected " +
                     std::to_string(args.txn_len) + " (see --txn-len)");
  }

  reclab::RatingsMatrix m;
  try {
    m = load_dataset(args.input);
  } catch (const reclab::Error& e) {
    std::fprintf(stderr, "error: cannot load dataset: %s\n", e.what());
    return kExitRuntime;
  }
  check_against_matrix(args.strategy, args.params, m, args.txn_len);

  std::optional<reclab::Transaction> txn;
  try {
    txn = reclab::make_transaction(std::move(ids), m);
  } catch (const reclab::Error& e) {
    throw UsageError(std::string("--txn: ") + e.what());
  }

  auto strategy = make_strategy(args.strategy, args.params, args.seed);
  strategy->prepare(m);
  const auto list = strategy->recommend(m, *txn);
  if (list.empty()) {
    std::printf("empty result: the %s strategy recommends nothing for this transaction\n",
                args.strategy.c_str());
    return kExitOk;
  }
  std::printf("article\tscore\n");
  for (const auto& r : list) std::printf("a%zu\t%.6g\n", r.article, r.score);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recommendation strategy lab: data generation, benchmarks, queries"};
  app.require_subcommand(1);

  reclab::GeneratorConfig gen_cfg;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic rating matrix as CSV");
  gen->add_option("--users", gen_cfg.n_users, "Number of users")->capture_default_str();
  gen->add_option("--articles", gen_cfg.n_articles, "Number of articles")->capture_default_str();
  gen->add_option("--archetypes", gen_cfg.n_archetypes, "Latent user archetypes")
      ->capture_default_str();
  gen->add_option("--noise", gen_cfg.noise_sigma, "Rating noise standard deviation")
      ->capture_default_str();
  gen->add_option("--missing-low", gen_cfg.missing_low, "Lowest per-article missing probability")
      ->capture_default_str();
  gen->add_option("--missing-high", gen_cfg.missing_high,
                  "Highest per-article missing probability")
      ->capture_default_str();
  gen->add_option("--seed", gen_cfg.seed, "Generator seed")->capture_default_str();
  gen->add_option("-o,--out", gen_out, "Output CSV path")->required();

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "Benchmark strategies over random transactions");
  bench->add_option("-i,--input", bench_args.input, "Dataset CSV")->required();
  bench->add_option("-o,--out", bench_args.out, "Write the JSON report here");
  auto* bench_strategy = bench->add_option("--strategy", bench_args.strategy, "Strategy to run")
                             ->check(CLI::IsMember({"threshold", "kmeans", "content"}));
  auto* bench_all = bench->add_flag("--all", bench_args.all, "Run all three strategies");
  bench_strategy->excludes(bench_all);
  bench->add_option("--iterations", bench_args.iterations, "Queries per strategy")
      ->capture_default_str();
  bench->add_option("--seed", bench_args.seed, "Seed for transactions and clustering")
      ->capture_default_str();
  bench->add_option("--txn-len", bench_args.txn_len, "Articles per transaction")
      ->capture_default_str();
  bench->add_option("--edges", bench_args.edges,
                    "Labeled-scheme upper edges for very short, short, normal")
      ->capture_default_str();
  bench->add_option("--scheme", bench_args.scheme, "Force a bin scheme (content|labeled)");
  bench->add_option("--qd-low", bench_args.qd_low, "Query dependency Low/Medium cutoff")
      ->capture_default_str();
  bench->add_option("--qd-high", bench_args.qd_high, "Query dependency Medium/High cutoff")
      ->capture_default_str();
  add_strategy_options(bench, bench_args.params);

  RecommendArgs rec_args;
  auto* rec = app.add_subcommand("recommend", "Recommend articles for one transaction");
  rec->add_option("-i,--input", rec_args.input, "Dataset CSV")->required();
  rec->add_option("--strategy", rec_args.strategy, "Strategy to use")
      ->required()
      ->check(CLI::IsMember({"threshold", "kmeans", "content"}));
  rec->add_option("--txn", rec_args.txn, "Comma-separated article indices")->required();
  rec->add_option("--txn-len", rec_args.txn_len, "Expected transaction length")
      ->capture_default_str();
  rec->add_option("--seed", rec_args.seed, "Clustering seed")->capture_default_str();
  add_strategy_options(rec, rec_args.params);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(gen_cfg, gen_out);
    if (bench->parsed()) {
      if (!bench_args.all && bench_args.strategy.empty()) {
        throw UsageError("bench needs --strategy or --all");
      }
      return cmd_bench(bench_args);
    }
    return cmd_recommend(rec_args);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const reclab::Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", std::string(reclab::errc_name(e.code())).c_str(),
                 e.what());
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
}
