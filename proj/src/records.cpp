#include "percolab/records.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "json.hpp"

namespace percolab {

std::string Record::kind() const
{
    return std::get<std::string>(fields_.front().second.data);
}

std::string format_double(double d)
{
    if (!std::isfinite(d)) {
        return "null";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    return buf;
}

std::string to_json(const Value& v)
{
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, std::nullptr_t>) {
                return "null";
            } else if constexpr (std::is_same_v<T, bool>) {
                return x ? "true" : "false";
            } else if constexpr (std::is_same_v<T, std::int64_t> || std::is_same_v<T, std::uint64_t>) {
                return std::to_string(x);
            } else if constexpr (std::is_same_v<T, double>) {
                return format_double(x);
            } else if constexpr (std::is_same_v<T, std::string>) {
                return nlohmann::json(x).dump();
            } else {
                std::string s = "[";
                for (std::size_t i = 0; i < x.size(); ++i) {
                    if (i) {
                        s += ",";
                    }
                    s += to_json(x[i]);
                }
                return s + "]";
            }
        },
        v.data);
}

std::string to_json_line(const Record& r)
{
    std::string s = "{";
    bool first = true;
    for (const auto& [key, value] : r.fields()) {
        if (!first) {
            s += ",";
        }
        first = false;
        s += nlohmann::json(key).dump() + ":" + to_json(value);
    }
    return s + "}";
}

void write_json_lines(std::ostream& out, const Record& config, const std::vector<Record>& records)
{
    out << to_json_line(config) << '\n';
    for (const auto& r : records) {
        out << to_json_line(r) << '\n';
    }
}

namespace {

std::string csv_cell(const Value& v)
{
    std::string text;
    if (const auto* s = std::get_if<std::string>(&v.data)) {
        text = *s;
    } else if (std::holds_alternative<std::nullptr_t>(v.data)) {
        return "";
    } else {
        text = to_json(v);
    }
    if (text.find_first_of(",\"\n") == std::string::npos) {
        return text;
    }
    std::string quoted = "\"";
    for (char c : text) {
        if (c == '"') {
            quoted += '"';
        }
        quoted += c;
    }
    return quoted + "\"";
}

}  // namespace

void write_csv(std::ostream& out, const Record& config, const std::vector<Record>& records)
{
    for (const auto& [key, value] : config.fields()) {
        out << "# " << key << "=" << csv_cell(value) << '\n';
    }
    std::vector<std::string> columns;
    for (const auto& r : records) {
        for (const auto& [key, value] : r.fields()) {
            if (std::find(columns.begin(), columns.end(), key) == columns.end()) {
                columns.push_back(key);
            }
        }
    }
    for (std::size_t i = 0; i < columns.size(); ++i) {
        out << (i ? "," : "") << columns[i];
    }
    out << '\n';
    for (const auto& r : records) {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (i) {
                out << ',';
            }
            for (const auto& [key, value] : r.fields()) {
                if (key == columns[i]) {
                    out << csv_cell(value);
                    break;
                }
            }
        }
        out << '\n';
    }
}

}  // namespace percolab
