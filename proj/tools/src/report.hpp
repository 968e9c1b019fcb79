#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace cssel::cli {

using Json = nlohmann::json;

/// Serializes with keys in sorted order, two-space indentation, floating
/// values at 17 significant digits (non-finite values become null) and a
/// final newline.
std::string render_json(const Json& value);

/// Writes render_json(value) to `path`, or to standard output when `path` is
/// empty or "-". Throws cssel::Error naming the path on I/O failure.
void write_report(const Json& value, const std::string& path);

}  // namespace cssel::cli
