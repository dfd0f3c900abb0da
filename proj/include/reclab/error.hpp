#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace reclab {

enum class Errc {
  ValueOutOfRange,
  EmptyMatrix,
  IndexOutOfBounds,
  DuplicateArticle,
  EmptyTransaction,
  InvalidConfig,
  IoFailure,
  ParseError,
  DimensionMismatch,
  InvalidK,
  NonPositiveX,
  AllColumnsEmpty,
  ModelMatrixMismatch,
  GroupsMatrixMismatch,
  LengthExceedsArticles,
  UnknownScheme,
  EmptyHistogram,
  EmptyInput,
  StrategyFailure,
};

std::string_view errc_name(Errc code);

inline constexpr std::size_t kNoPosition = std::numeric_limits<std::size_t>::max();

/// Every failure raised by the library. `row`/`col` carry the offending
/// (user, article) cell or the (line, column) of a parse error when known.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message, std::size_t row = kNoPosition,
        std::size_t col = kNoPosition)
      : std::runtime_error(message), code_(code), row_(row), col_(col) {}

  Errc code() const noexcept { return code_; }
  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  Errc code_;
  std::size_t row_;
  std::size_t col_;
};

}  // namespace reclab
