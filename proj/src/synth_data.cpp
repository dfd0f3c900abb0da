#include "reclab/synth_data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "reclab/random.hpp"

namespace reclab {

namespace {

constexpr std::uint64_t kArticleStream = 0;
constexpr std::uint64_t kArchetypeStream = 1;
constexpr std::uint64_t kUserStreamBase = 1'000;

[[noreturn]] void invalid(const std::string& message) {
  throw Error(Errc::InvalidConfig, message);
}

}  // namespace

void GeneratorConfig::validate() const {
  if (n_users == 0) invalid("n_users must be at least 1");
  if (n_articles == 0) invalid("n_articles must be at least 1");
  if (n_archetypes == 0) invalid("n_archetypes must be at least 1");
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    invalid("noise_sigma must be finite and non-negative");
  }
  if (!(missing_low >= 0.0 && missing_low <= missing_high && missing_high <= 1.0)) {
    invalid("missing range must satisfy 0 <= missing_low <= missing_high <= 1 (got " +
            std::to_string(missing_low) + ", " + std::to_string(missing_high) + ")");
  }
}

GeneratedData generate_with_labels(const GeneratorConfig& cfg) {
  cfg.validate();

  GeneratedData out;
  out.missing_probability.resize(cfg.n_articles);
  Rng article_rng(cfg.seed, kArticleStream);
  for (auto& p : out.missing_probability) {
    p = article_rng.uniform(cfg.missing_low, cfg.missing_high);
  }

  std::vector<double> preference(cfg.n_archetypes * cfg.n_articles);
  Rng archetype_rng(cfg.seed, kArchetypeStream);
  for (auto& p : preference) p = archetype_rng.uniform(-10.0, 10.0);

  std::vector<std::int32_t> cells(cfg.n_users * cfg.n_articles, RatingsMatrix::kMissing);
  out.archetype_of.resize(cfg.n_users);
  for (std::size_t u = 0; u < cfg.n_users; ++u) {
    Rng rng(cfg.seed, kUserStreamBase + u);
    const std::size_t archetype = rng.index(cfg.n_archetypes);
    out.archetype_of[u] = archetype;
    const double* pref = preference.data() + archetype * cfg.n_articles;
    std::int32_t* row = cells.data() + u * cfg.n_articles;
    for (std::size_t a = 0; a < cfg.n_articles; ++a) {
      // Always consume the missingness draw so the stream layout does not
      // depend on the outcome.
      const bool missing = rng.uniform01() < out.missing_probability[a];
      double value = pref[a];
      if (cfg.noise_sigma > 0.0) value += rng.normal(0.0, cfg.noise_sigma);
      if (missing) continue;
      row[a] = Rating::from_value(std::clamp(value, -10.0, 10.0)).tenths();
    }
  }
  out.matrix = RatingsMatrix(cfg.n_users, cfg.n_articles, std::move(cells));
  return out;
}

RatingsMatrix generate(const GeneratorConfig& cfg) { return generate_with_labels(cfg).matrix; }

void save_csv(const RatingsMatrix& m, std::ostream& out) {
  require_valid(m);
  std::string line = "user_id";
  for (std::size_t a = 0; a < m.n_articles(); ++a) {
    line += ",a";
    line += std::to_string(a);
  }
  line += '\n';
  out << line;
  for (std::size_t u = 0; u < m.n_users(); ++u) {
    line = "u" + std::to_string(u);
    for (const std::int32_t t : m.row(u)) {
      line += ',';
      if (t != RatingsMatrix::kMissing) line += Rating::from_tenths(t).to_string();
    }
    line += '\n';
    out << line;
  }
  if (!out) throw Error(Errc::IoFailure, "write failed");
}

void save_csv(const RatingsMatrix& m, const std::string& path) {
  if (path.empty()) throw Error(Errc::IoFailure, "empty output path");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoFailure, "cannot open '" + path + "' for writing");
  save_csv(m, out);
  out.close();
  if (!out) throw Error(Errc::IoFailure, "cannot finish writing '" + path + "'");
}

std::string to_csv(const RatingsMatrix& m) {
  std::ostringstream out;
  save_csv(m, out);
  return out.str();
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

[[noreturn]] void parse_error(std::size_t line, std::size_t column, const std::string& what) {
  throw Error(Errc::ParseError,
              "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what,
              line, column);
}

}  // namespace

RatingsMatrix load_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) parse_error(1, 1, "missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const auto header = split_fields(line);
  if (header.front() != "user_id") parse_error(1, 1, "header must start with 'user_id'");
  const std::size_t n_articles = header.size() - 1;
  for (std::size_t a = 0; a < n_articles; ++a) {
    if (header[a + 1] != "a" + std::to_string(a)) {
      parse_error(1, a + 2, "expected column name 'a" + std::to_string(a) + "'");
    }
  }

  std::vector<std::int32_t> cells;
  std::size_t n_users = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
    const auto fields = split_fields(line);
    if (fields.size() != n_articles + 1) {
      parse_error(line_no, std::min(fields.size(), n_articles + 1) + 1,
                  "expected " + std::to_string(n_articles + 1) + " fields, found " +
                      std::to_string(fields.size()));
    }
    if (fields[0] != "u" + std::to_string(n_users)) {
      parse_error(line_no, 1, "expected user id 'u" + std::to_string(n_users) + "'");
    }
    for (std::size_t a = 0; a < n_articles; ++a) {
      const std::string_view field = fields[a + 1];
      if (field.empty()) {
        cells.push_back(RatingsMatrix::kMissing);
        continue;
      }
      Rating rating;
      try {
        rating = Rating::parse(field);
      } catch (const Error& e) {
        parse_error(line_no, a + 2, e.what());
      }
      if (!rating.in_range()) {
        throw Error(Errc::ValueOutOfRange,
                    "line " + std::to_string(line_no) + ": rating " + rating.to_string() +
                        " for (u" + std::to_string(n_users) + ", a" + std::to_string(a) +
                        ") outside [-10.0, 10.0]",
                    n_users, a);
      }
      cells.push_back(rating.tenths());
    }
    ++n_users;
  }
  if (in.bad()) throw Error(Errc::IoFailure, "read failed");

  RatingsMatrix m(n_users, n_articles, std::move(cells));
  require_valid(m);
  return m;
}

RatingsMatrix load_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoFailure, "cannot open '" + path + "' for reading");
  return load_csv(in);
}

RatingsMatrix from_csv(const std::string& text) {
  std::istringstream in(text);
  return load_csv(in);
}

}  // namespace reclab
