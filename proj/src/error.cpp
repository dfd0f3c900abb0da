#include "reclab/error.hpp"

namespace reclab {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::ValueOutOfRange: return "ValueOutOfRange";
    case Errc::EmptyMatrix: return "EmptyMatrix";
    case Errc::IndexOutOfBounds: return "IndexOutOfBounds";
    case Errc::DuplicateArticle: return "DuplicateArticle";
    case Errc::EmptyTransaction: return "EmptyTransaction";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::IoFailure: return "IoFailure";
    case Errc::ParseError: return "ParseError";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::InvalidK: return "InvalidK";
    case Errc::NonPositiveX: return "NonPositiveX";
    case Errc::AllColumnsEmpty: return "AllColumnsEmpty";
    case Errc::ModelMatrixMismatch: return "ModelMatrixMismatch";
    case Errc::GroupsMatrixMismatch: return "GroupsMatrixMismatch";
    case Errc::LengthExceedsArticles: return "LengthExceedsArticles";
    case Errc::UnknownScheme: return "UnknownScheme";
    case Errc::EmptyHistogram: return "EmptyHistogram";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::StrategyFailure: return "StrategyFailure";
  }
  return "Unknown";
}

}  // namespace reclab
