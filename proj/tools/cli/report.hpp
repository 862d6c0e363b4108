#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace welsh::cli {

using Json = nlohmann::ordered_json;

enum class Format { json, csv };

/// A command result: the JSON document, and the flat table written for CSV.
/// Table rows are objects keyed by the column names; missing keys are empty cells.
struct Report {
    Json document;
    std::vector<std::string> columns;
    std::vector<Json> rows;
};

/// Shortest round-trip decimal form of x ("nan", "inf", "-inf" for non-finite).
std::string format_double(double x);

/// RFC 4180 quoting: fields with a comma, quote, CR or LF are quoted and
/// inner quotes doubled.
std::string csv_field(const std::string& text);

void write_json(std::ostream& out, const Report& report);
void write_csv(std::ostream& out, const Report& report);
void write_report(std::ostream& out, const Report& report, Format format);

} // namespace welsh::cli
