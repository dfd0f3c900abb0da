#include "reclab/ratings.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace reclab {

namespace {

// Clamp keeps absurd inputs representable; validation rejects them anyway.
constexpr std::int64_t kTenthsSaturation = 1'000'000'000;

std::string position(std::size_t user, std::size_t article) {
  return "u" + std::to_string(user) + ", a" + std::to_string(article);
}

}  // namespace

Rating Rating::from_value(double value) {
  if (std::isnan(value)) {
    throw Error(Errc::ValueOutOfRange, "rating is NaN");
  }
  const double scaled = std::round(value * 10.0);
  const double clamped = std::clamp(scaled, static_cast<double>(-kTenthsSaturation),
                                    static_cast<double>(kTenthsSaturation));
  return Rating(static_cast<std::int32_t>(clamped));
}

Rating Rating::parse(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  std::int64_t whole = 0;
  std::size_t digits = 0;
  while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
    whole = std::min<std::int64_t>(whole * 10 + (text[pos] - '0'), kTenthsSaturation);
    ++pos;
    ++digits;
  }
  if (digits == 0) {
    throw Error(Errc::ParseError, "invalid rating '" + std::string(text) + "'");
  }
  std::int64_t tenth = 0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    if (pos + 1 != text.size() || text[pos] < '0' || text[pos] > '9') {
      throw Error(Errc::ParseError,
                  "rating '" + std::string(text) + "' must have exactly one decimal digit");
    }
    tenth = text[pos] - '0';
    ++pos;
  }
  if (pos != text.size()) {
    throw Error(Errc::ParseError, "invalid rating '" + std::string(text) + "'");
  }
  std::int64_t tenths = std::min(whole * 10 + tenth, kTenthsSaturation);
  return Rating(static_cast<std::int32_t>(negative ? -tenths : tenths));
}

std::string Rating::to_string() const {
  const std::int64_t magnitude = std::llabs(static_cast<std::int64_t>(tenths_));
  std::string out = tenths_ < 0 ? "-" : "";
  out += std::to_string(magnitude / 10);
  out += '.';
  out += static_cast<char>('0' + magnitude % 10);
  return out;
}

RatingsMatrix::RatingsMatrix(std::size_t n_users, std::size_t n_articles,
                             std::vector<std::int32_t> tenths)
    : n_users_(n_users), n_articles_(n_articles), tenths_(std::move(tenths)) {
  if (tenths_.size() != n_users_ * n_articles_) {
    throw Error(Errc::DimensionMismatch,
                "cell buffer holds " + std::to_string(tenths_.size()) + " cells, expected " +
                    std::to_string(n_users_ * n_articles_));
  }
}

RatingsMatrix RatingsMatrix::from_rows(
    const std::vector<std::vector<std::optional<double>>>& rows) {
  const std::size_t n_articles = rows.empty() ? 0 : rows.front().size();
  std::vector<std::int32_t> tenths;
  tenths.reserve(rows.size() * n_articles);
  for (std::size_t u = 0; u < rows.size(); ++u) {
    if (rows[u].size() != n_articles) {
      throw Error(Errc::DimensionMismatch, "row " + std::to_string(u) + " has " +
                                               std::to_string(rows[u].size()) +
                                               " cells, expected " + std::to_string(n_articles));
    }
    for (const auto& cell : rows[u]) {
      tenths.push_back(cell ? Rating::from_value(*cell).tenths() : kMissing);
    }
  }
  return RatingsMatrix(rows.size(), n_articles, std::move(tenths));
}

Cell RatingsMatrix::at(std::size_t user, std::size_t article) const {
  if (user >= n_users_ || article >= n_articles_) {
    throw Error(Errc::IndexOutOfBounds, "cell (" + position(user, article) + ") outside " +
                                            std::to_string(n_users_) + "x" +
                                            std::to_string(n_articles_) + " matrix",
                user, article);
  }
  const std::int32_t t = raw(user, article);
  if (t == kMissing) return std::nullopt;
  return Rating::from_tenths(t);
}

std::vector<double> RatingsMatrix::row_values(std::size_t user) const {
  std::vector<double> out(n_articles_);
  const auto r = row(user);
  for (std::size_t a = 0; a < n_articles_; ++a) {
    out[a] = r[a] == kMissing ? std::nan("") : r[a] / 10.0;
  }
  return out;
}

std::vector<std::optional<double>> RatingsMatrix::row_optional(std::size_t user) const {
  std::vector<std::optional<double>> out(n_articles_);
  const auto r = row(user);
  for (std::size_t a = 0; a < n_articles_; ++a) {
    if (r[a] != kMissing) out[a] = r[a] / 10.0;
  }
  return out;
}

MatrixBuilder::MatrixBuilder(std::size_t n_users, std::size_t n_articles)
    : n_users_(n_users),
      n_articles_(n_articles),
      tenths_(n_users * n_articles, RatingsMatrix::kMissing) {}

MatrixBuilder& MatrixBuilder::set(std::size_t user, std::size_t article, Cell cell) {
  if (user >= n_users_ || article >= n_articles_) {
    throw Error(Errc::IndexOutOfBounds, "cell (" + position(user, article) + ") out of bounds",
                user, article);
  }
  tenths_[user * n_articles_ + article] = cell ? cell->tenths() : RatingsMatrix::kMissing;
  return *this;
}

RatingsMatrix MatrixBuilder::build() && {
  return RatingsMatrix(n_users_, n_articles_, std::move(tenths_));
}

ValidationVerdict validate_matrix(const RatingsMatrix& m) {
  ValidationVerdict verdict;
  if (m.n_users() == 0 || m.n_articles() == 0) {
    verdict.accepted = false;
    verdict.code = Errc::EmptyMatrix;
    verdict.message = "matrix has " + std::to_string(m.n_users()) + " users and " +
                      std::to_string(m.n_articles()) + " articles";
    return verdict;
  }
  for (std::size_t u = 0; u < m.n_users(); ++u) {
    const auto r = m.row(u);
    for (std::size_t a = 0; a < r.size(); ++a) {
      if (r[a] == RatingsMatrix::kMissing) continue;
      const Rating rating = Rating::from_tenths(r[a]);
      if (!rating.in_range()) {
        verdict.accepted = false;
        verdict.code = Errc::ValueOutOfRange;
        verdict.user = u;
        verdict.article = a;
        verdict.message = "rating " + rating.to_string() + " at (" + position(u, a) +
                          ") outside [-10.0, 10.0]";
        return verdict;
      }
    }
  }
  return verdict;
}

void require_valid(const RatingsMatrix& m) {
  const auto verdict = validate_matrix(m);
  if (!verdict) throw Error(verdict.code, verdict.message, verdict.user, verdict.article);
}

namespace {

void check_article(const RatingsMatrix& m, std::size_t article) {
  if (article >= m.n_articles()) {
    throw Error(Errc::IndexOutOfBounds, "article " + std::to_string(article) +
                                            " not below " + std::to_string(m.n_articles()),
                kNoPosition, article);
  }
}

}  // namespace

std::optional<double> article_mean(const RatingsMatrix& m, std::size_t article) {
  check_article(m, article);
  std::int64_t sum = 0;
  std::size_t count = 0;
  for (std::size_t u = 0; u < m.n_users(); ++u) {
    const std::int32_t t = m.raw(u, article);
    if (t == RatingsMatrix::kMissing) continue;
    sum += t;
    ++count;
  }
  if (count == 0) return std::nullopt;
  return static_cast<double>(sum) / (10.0 * static_cast<double>(count));
}

std::vector<std::optional<double>> article_means(const RatingsMatrix& m) {
  std::vector<std::int64_t> sums(m.n_articles(), 0);
  std::vector<std::size_t> counts(m.n_articles(), 0);
  for (std::size_t u = 0; u < m.n_users(); ++u) {
    const auto r = m.row(u);
    for (std::size_t a = 0; a < r.size(); ++a) {
      if (r[a] == RatingsMatrix::kMissing) continue;
      sums[a] += r[a];
      ++counts[a];
    }
  }
  std::vector<std::optional<double>> means(m.n_articles());
  for (std::size_t a = 0; a < means.size(); ++a) {
    if (counts[a] > 0) {
      means[a] = static_cast<double>(sums[a]) / (10.0 * static_cast<double>(counts[a]));
    }
  }
  return means;
}

double missing_ratio(const RatingsMatrix& m, std::size_t article) {
  check_article(m, article);
  if (m.n_users() == 0) return 1.0;
  std::size_t missing = 0;
  for (std::size_t u = 0; u < m.n_users(); ++u) {
    if (m.raw(u, article) == RatingsMatrix::kMissing) ++missing;
  }
  return static_cast<double>(missing) / static_cast<double>(m.n_users());
}

Transaction Transaction::make(std::vector<std::size_t> ids, std::size_t n_articles) {
  if (ids.empty()) {
    throw Error(Errc::EmptyTransaction, "transaction needs at least one article");
  }
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] >= n_articles) {
      throw Error(Errc::IndexOutOfBounds, "article " + std::to_string(ids[i]) +
                                              " not below " + std::to_string(n_articles),
                  kNoPosition, ids[i]);
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (ids[j] == ids[i]) {
        throw Error(Errc::DuplicateArticle,
                    "article " + std::to_string(ids[i]) + " appears more than once", kNoPosition,
                    ids[i]);
      }
    }
  }
  return Transaction(std::move(ids));
}

bool Transaction::contains(std::size_t article) const {
  return std::find(articles_.begin(), articles_.end(), article) != articles_.end();
}

void Transaction::check_against(std::size_t n_articles) const {
  for (const std::size_t a : articles_) {
    if (a >= n_articles) {
      throw Error(Errc::IndexOutOfBounds, "transaction article " + std::to_string(a) +
                                              " not below " + std::to_string(n_articles),
                  kNoPosition, a);
    }
  }
}

Transaction make_transaction(std::vector<std::size_t> ids, const RatingsMatrix& m) {
  return Transaction::make(std::move(ids), m.n_articles());
}

void sort_recommendations(RecommendationList& list) {
  std::sort(list.begin(), list.end(), [](const Recommendation& a, const Recommendation& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.article < b.article;
  });
}

}  // namespace reclab
