#pragma once

#include <cstddef>
#include <string>

#include "cssel/errors.hpp"
#include "cssel/types.hpp"

namespace cssel::cli {

/// Largest matrix (in entries) the CLI accepts.
inline constexpr std::size_t kMaxEntries = 10'000'000;

enum class MatrixFormat { csv, matrix_market };

enum class ParseErrorKind {
  io,             // unreadable file
  empty,          // no data
  ragged_rows,    // CSV rows of different lengths
  bad_token,      // unparsable or non-finite number
  bad_header,     // missing or malformed Matrix Market banner / size line
  unsupported,    // Matrix Market qualifier we do not read
  bad_entry,      // coordinate entry out of range, or wrong entry count
  too_large,      // more than kMaxEntries entries
};

const char* to_string(ParseErrorKind kind);

class ParseError : public DomainError {
 public:
  ParseError(ParseErrorKind kind, const std::string& message, std::size_t line = 0, std::size_t column = 0);

  ParseErrorKind kind() const { return kind_; }
  std::size_t line() const { return line_; }      // 1-based; 0 when not applicable
  std::size_t column() const { return column_; }  // 1-based field or token index; 0 when not applicable

 private:
  ParseErrorKind kind_;
  std::size_t line_;
  std::size_t column_;
};

/// `.mtx` and `.mm` select Matrix Market, anything else CSV.
MatrixFormat format_from_path(const std::string& path);

Matrix parse_csv(const std::string& text);

/// Supports "matrix array real general" (column-major entries) and
/// "matrix coordinate real general|symmetric" (symmetric entries mirrored).
Matrix parse_matrix_market(const std::string& text);

Matrix load_matrix(const std::string& path, MatrixFormat format);

}  // namespace cssel::cli
