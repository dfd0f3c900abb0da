#pragma once

// Core data model: ratings, the users x articles matrix, transactions and
// recommendation lists.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "reclab/error.hpp"

namespace reclab {

/// A rating stored as an integer count of tenths, so 9.3 is exactly 93.
/// The valid domain is [-10.0, +10.0]; a Rating may hold an out-of-range
/// value so that validate_matrix() can report it.
class Rating {
 public:
  static constexpr std::int32_t kMinTenths = -100;
  static constexpr std::int32_t kMaxTenths = 100;

  constexpr Rating() = default;

  static constexpr Rating from_tenths(std::int32_t tenths) { return Rating(tenths); }
  /// Rounds to the nearest tenth (half away from zero).
  static Rating from_value(double value);
  /// Parses `[+-]digits[.digit]`. Throws Errc::ParseError on bad syntax;
  /// the range is not checked here.
  static Rating parse(std::string_view text);

  constexpr std::int32_t tenths() const { return tenths_; }
  constexpr double value() const { return tenths_ / 10.0; }
  constexpr bool in_range() const { return tenths_ >= kMinTenths && tenths_ <= kMaxTenths; }

  /// One-decimal rendering, e.g. "9.5", "-10.0", "-0.3".
  std::string to_string() const;

  friend constexpr auto operator<=>(Rating, Rating) = default;

 private:
  constexpr explicit Rating(std::int32_t tenths) : tenths_(tenths) {}
  std::int32_t tenths_ = 0;
};

using Cell = std::optional<Rating>;

/// Dense users x articles grid of optional ratings. Immutable once built;
/// use MatrixBuilder to fill one incrementally.
class RatingsMatrix {
 public:
  static constexpr std::int32_t kMissing = std::numeric_limits<std::int32_t>::min();

  RatingsMatrix() = default;
  /// `tenths` is row-major with kMissing marking absent cells.
  RatingsMatrix(std::size_t n_users, std::size_t n_articles, std::vector<std::int32_t> tenths);

  /// Builds from nested rows of optional values (rounded to tenths). All rows
  /// must have the same length.
  static RatingsMatrix from_rows(const std::vector<std::vector<std::optional<double>>>& rows);

  std::size_t n_users() const { return n_users_; }
  std::size_t n_articles() const { return n_articles_; }

  /// Bounds-checked cell access.
  Cell at(std::size_t user, std::size_t article) const;

  /// Unchecked raw access; kMissing when absent.
  std::int32_t raw(std::size_t user, std::size_t article) const {
    return tenths_[user * n_articles_ + article];
  }
  std::span<const std::int32_t> row(std::size_t user) const {
    return {tenths_.data() + user * n_articles_, n_articles_};
  }
  /// Row as reals with absent cells as NaN.
  std::vector<double> row_values(std::size_t user) const;
  std::vector<std::optional<double>> row_optional(std::size_t user) const;

  friend bool operator==(const RatingsMatrix&, const RatingsMatrix&) = default;

 private:
  std::size_t n_users_ = 0;
  std::size_t n_articles_ = 0;
  std::vector<std::int32_t> tenths_;
};

class MatrixBuilder {
 public:
  MatrixBuilder(std::size_t n_users, std::size_t n_articles);

  MatrixBuilder& set(std::size_t user, std::size_t article, Cell cell);
  RatingsMatrix build() &&;

 private:
  std::size_t n_users_;
  std::size_t n_articles_;
  std::vector<std::int32_t> tenths_;
};

struct ValidationVerdict {
  bool accepted = true;
  Errc code = Errc::EmptyMatrix;
  std::size_t user = kNoPosition;
  std::size_t article = kNoPosition;
  std::string message;

  explicit operator bool() const { return accepted; }
};

/// Checks dimensions and rating bounds in row-major order, reporting the
/// first offence.
ValidationVerdict validate_matrix(const RatingsMatrix& m);
/// Throws the verdict's error when validation fails.
void require_valid(const RatingsMatrix& m);

std::optional<double> article_mean(const RatingsMatrix& m, std::size_t article);
std::vector<std::optional<double>> article_means(const RatingsMatrix& m);
double missing_ratio(const RatingsMatrix& m, std::size_t article);

/// Distinct article indices in the order the customer picked them.
class Transaction {
 public:
  static constexpr std::size_t kDefaultLength = 4;

  /// Validates ids against `n_articles`: non-empty, distinct, in range.
  static Transaction make(std::vector<std::size_t> ids, std::size_t n_articles);

  std::span<const std::size_t> articles() const { return articles_; }
  std::size_t size() const { return articles_.size(); }
  bool contains(std::size_t article) const;
  /// Throws IndexOutOfBounds if any index is not below `n_articles`.
  void check_against(std::size_t n_articles) const;

  friend bool operator==(const Transaction&, const Transaction&) = default;

 private:
  explicit Transaction(std::vector<std::size_t> ids) : articles_(std::move(ids)) {}
  std::vector<std::size_t> articles_;
};

Transaction make_transaction(std::vector<std::size_t> ids, const RatingsMatrix& m);

struct Recommendation {
  std::size_t article = 0;
  double score = 0.0;

  friend bool operator==(const Recommendation&, const Recommendation&) = default;
};

using RecommendationList = std::vector<Recommendation>;

/// Score descending, article ascending on ties.
void sort_recommendations(RecommendationList& list);

}  // namespace reclab
