#include "report.hpp"

#include <charconv>
#include <cmath>

namespace welsh::cli {

std::string format_double(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& text)
{
    if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
    std::string quoted = "\"";
    for (char ch : text) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    quoted += '"';
    return quoted;
}

namespace {

std::string cell_text(const Json& value)
{
    switch (value.type()) {
    case Json::value_t::null:
    case Json::value_t::discarded:
        return "";
    case Json::value_t::string:
        return value.get<std::string>();
    case Json::value_t::boolean:
        return value.get<bool>() ? "true" : "false";
    case Json::value_t::number_float:
        return format_double(value.get<double>());
    case Json::value_t::number_integer:
        return std::to_string(value.get<long long>());
    case Json::value_t::number_unsigned:
        return std::to_string(value.get<unsigned long long>());
    default:
        return value.dump();
    }
}

} // namespace

void write_json(std::ostream& out, const Report& report)
{
    out << report.document.dump(2) << '\n';
}

void write_csv(std::ostream& out, const Report& report)
{
    for (std::size_t i = 0; i < report.columns.size(); ++i) out << (i ? "," : "") << csv_field(report.columns[i]);
    out << "\r\n";
    for (const Json& row : report.rows) {
        for (std::size_t i = 0; i < report.columns.size(); ++i) {
            const auto it = row.find(report.columns[i]);
            out << (i ? "," : "") << csv_field(it == row.end() ? std::string() : cell_text(*it));
        }
        out << "\r\n";
    }
}

void write_report(std::ostream& out, const Report& report, Format format)
{
    if (format == Format::csv)
        write_csv(out, report);
    else
        write_json(out, report);
}

} // namespace welsh::cli
