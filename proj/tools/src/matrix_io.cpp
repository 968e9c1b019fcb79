#include "matrix_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>
#include <vector>

namespace cssel::cli {

namespace {

std::string located(const std::string& message, std::size_t line, std::size_t column) {
  std::string out = message;
  if (line > 0) out += " (line " + std::to_string(line);
  if (line > 0 && column > 0) out += ", column " + std::to_string(column);
  if (line > 0) out += ")";
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view token, std::size_t line, std::size_t column) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc() || end != token.data() + token.size() || !std::isfinite(value)) {
    throw ParseError(ParseErrorKind::bad_token, "cannot parse '" + std::string(token) + "' as a finite number", line,
                     column);
  }
  return value;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find('\n', start);
    std::string_view line = text.substr(start, end == std::string_view::npos ? text.size() - start : end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) words.push_back(line.substr(start, i - start));
  }
  return words;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

void check_size(std::size_t rows, std::size_t cols, std::size_t line) {
  if (cols != 0 && rows > kMaxEntries / cols) {
    throw ParseError(ParseErrorKind::too_large,
                     std::to_string(rows) + " x " + std::to_string(cols) + " exceeds the limit of " +
                         std::to_string(kMaxEntries) + " entries",
                     line);
  }
}

Index parse_count(std::string_view token, std::size_t line, std::size_t column) {
  long long value = 0;
  const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || end != token.data() + token.size() || value < 0) {
    throw ParseError(ParseErrorKind::bad_header, "expected a nonnegative integer, got '" + std::string(token) + "'",
                     line, column);
  }
  return static_cast<Index>(value);
}

}  // namespace

const char* to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::io: return "io";
    case ParseErrorKind::empty: return "empty";
    case ParseErrorKind::ragged_rows: return "ragged_rows";
    case ParseErrorKind::bad_token: return "bad_token";
    case ParseErrorKind::bad_header: return "bad_header";
    case ParseErrorKind::unsupported: return "unsupported";
    case ParseErrorKind::bad_entry: return "bad_entry";
    case ParseErrorKind::too_large: return "too_large";
  }
  return "unknown";
}

ParseError::ParseError(ParseErrorKind kind, const std::string& message, std::size_t line, std::size_t column)
    : DomainError(located(message, line, column)), kind_(kind), line_(line), column_(column) {}

MatrixFormat format_from_path(const std::string& path) {
  const auto dot = path.rfind('.');
  if (dot == std::string::npos) return MatrixFormat::csv;
  const std::string ext = lower(std::string_view(path).substr(dot));
  return ext == ".mtx" || ext == ".mm" ? MatrixFormat::matrix_market : MatrixFormat::csv;
}

Matrix parse_csv(const std::string& text) {
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  const auto lines = split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string_view line = lines[ln];
    if (trim(line).empty()) continue;
    std::size_t fields = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::string_view field =
          line.substr(start, comma == std::string_view::npos ? line.size() - start : comma - start);
      values.push_back(parse_number(field, ln + 1, fields + 1));
      ++fields;
      if (values.size() > kMaxEntries) {
        throw ParseError(ParseErrorKind::too_large, "input exceeds the limit of " + std::to_string(kMaxEntries) + " entries",
                         ln + 1);
      }
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (rows == 0) {
      cols = fields;
    } else if (fields != cols) {
      throw ParseError(ParseErrorKind::ragged_rows,
                       "row has " + std::to_string(fields) + " fields, expected " + std::to_string(cols), ln + 1);
    }
    ++rows;
    check_size(rows, cols, ln + 1);
  }
  if (rows == 0) throw ParseError(ParseErrorKind::empty, "no matrix rows found");

  Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      m(static_cast<Index>(i), static_cast<Index>(j)) = values[i * cols + j];
    }
  }
  return m;
}

Matrix parse_matrix_market(const std::string& text) {
  const auto lines = split_lines(text);
  if (lines.empty() || trim(lines[0]).empty()) throw ParseError(ParseErrorKind::empty, "empty Matrix Market file");

  const auto banner = split_words(lines[0]);
  if (banner.size() != 5 || lower(banner[0]) != "%%matrixmarket") {
    throw ParseError(ParseErrorKind::bad_header, "expected '%%MatrixMarket matrix <layout> <field> <symmetry>'", 1);
  }
  const std::string object = lower(banner[1]);
  const std::string layout = lower(banner[2]);
  const std::string field = lower(banner[3]);
  const std::string symmetry = lower(banner[4]);
  if (object != "matrix") throw ParseError(ParseErrorKind::unsupported, "object '" + object + "' is not supported", 1, 2);
  if (layout != "array" && layout != "coordinate") {
    throw ParseError(ParseErrorKind::unsupported, "layout '" + layout + "' is not supported", 1, 3);
  }
  if (field != "real") throw ParseError(ParseErrorKind::unsupported, "field '" + field + "' is not supported", 1, 4);
  const bool symmetric = symmetry == "symmetric";
  if (symmetry != "general" && !(symmetric && layout == "coordinate")) {
    throw ParseError(ParseErrorKind::unsupported,
                     "symmetry '" + symmetry + "' is not supported for " + layout + " layout", 1, 5);
  }

  std::size_t ln = 1;
  while (ln < lines.size() && (trim(lines[ln]).empty() || trim(lines[ln]).front() == '%')) ++ln;
  if (ln == lines.size()) throw ParseError(ParseErrorKind::bad_header, "missing size line");
  const auto size = split_words(lines[ln]);
  const std::size_t size_line = ln + 1;
  const std::size_t expected_words = layout == "array" ? 2 : 3;
  if (size.size() != expected_words) {
    throw ParseError(ParseErrorKind::bad_header,
                     "size line needs " + std::to_string(expected_words) + " integers", size_line);
  }
  const Index rows = parse_count(size[0], size_line, 1);
  const Index cols = parse_count(size[1], size_line, 2);
  check_size(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols), size_line);
  if (symmetric && rows != cols) throw ParseError(ParseErrorKind::bad_header, "symmetric matrix must be square", size_line);
  const Index count = layout == "array" ? rows * cols : parse_count(size[2], size_line, 3);

  Matrix m = Matrix::Zero(rows, cols);
  Index seen = 0;
  for (++ln; ln < lines.size(); ++ln) {
    const std::string_view line = trim(lines[ln]);
    if (line.empty() || line.front() == '%') continue;
    const auto words = split_words(line);
    if (seen >= count) throw ParseError(ParseErrorKind::bad_entry, "more entries than declared", ln + 1);
    if (layout == "array") {
      if (words.size() != 1) throw ParseError(ParseErrorKind::bad_entry, "array entries hold one value per line", ln + 1);
      // Column-major order.
      m(seen % rows, seen / rows) = parse_number(words[0], ln + 1, 1);
    } else {
      if (words.size() != 3) throw ParseError(ParseErrorKind::bad_entry, "coordinate entries need 'row col value'", ln + 1);
      const Index i = parse_count(words[0], ln + 1, 1);
      const Index j = parse_count(words[1], ln + 1, 2);
      if (i < 1 || i > rows || j < 1 || j > cols) {
        throw ParseError(ParseErrorKind::bad_entry, "entry index out of range", ln + 1);
      }
      if (symmetric && j > i) {
        throw ParseError(ParseErrorKind::bad_entry, "symmetric entries must lie on or below the diagonal", ln + 1);
      }
      const double v = parse_number(words[2], ln + 1, 3);
      m(i - 1, j - 1) = v;
      if (symmetric) m(j - 1, i - 1) = v;
    }
    ++seen;
  }
  if (seen != count) {
    throw ParseError(ParseErrorKind::bad_entry,
                     "declared " + std::to_string(count) + " entries, found " + std::to_string(seen));
  }
  if (rows == 0 || cols == 0) throw ParseError(ParseErrorKind::empty, "matrix has no entries");
  return m;
}

Matrix load_matrix(const std::string& path, MatrixFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(ParseErrorKind::io, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw ParseError(ParseErrorKind::io, "error reading '" + path + "'");
  return format == MatrixFormat::csv ? parse_csv(buffer.str()) : parse_matrix_market(buffer.str());
}

}  // namespace cssel::cli
