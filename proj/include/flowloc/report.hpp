#pragma once

#include <string>

#include "flowloc/explorer.hpp"

namespace flowloc {

inline constexpr int kReportSchemaVersion = 1;

/// Line-oriented rendering, stable for golden files.
std::string render_text(const Report& r);
/// JSON document described by docs/report-schema.json, two-space indented,
/// with a trailing newline.
std::string render_json(const Report& r);
/// Inverse of render_json. Throws Error on malformed documents.
Report report_from_json(const std::string& text);

}  // namespace flowloc
