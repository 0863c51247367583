#pragma once

// Output records: ordered key/value rows written as JSON lines or CSV.
// Exact values travel as "num/den" strings, floats as %.17g.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "percolab/polynomial.hpp"

namespace percolab {

struct Value;
using ValueList = std::vector<Value>;

struct Value {
    std::variant<std::nullptr_t, bool, std::int64_t, std::uint64_t, double, std::string, ValueList> data;

    Value() : data(nullptr) {}
    Value(std::nullptr_t) : data(nullptr) {}
    Value(bool b) : data(b) {}
    Value(int i) : data(static_cast<std::int64_t>(i)) {}
    Value(std::int64_t i) : data(i) {}
    Value(std::uint64_t u) : data(u) {}
    Value(double d) : data(d) {}
    Value(const char* s) : data(std::string(s)) {}
    Value(std::string s) : data(std::move(s)) {}
    Value(const Rational& q) : data(fraction_string(q)) {}
    Value(ValueList l) : data(std::move(l)) {}
};

class Record {
public:
    explicit Record(std::string kind) { fields_.emplace_back("kind", Value(std::move(kind))); }

    Record& add(std::string key, Value value)
    {
        fields_.emplace_back(std::move(key), std::move(value));
        return *this;
    }

    const std::vector<std::pair<std::string, Value>>& fields() const { return fields_; }
    std::string kind() const;

private:
    std::vector<std::pair<std::string, Value>> fields_;
};

std::string format_double(double d);
std::string to_json(const Value& v);
std::string to_json_line(const Record& r);

/// One JSON object per line, config record first.
void write_json_lines(std::ostream& out, const Record& config, const std::vector<Record>& records);

/// The config record as leading "# key=value" lines, then a header row with
/// the union of record keys in first-seen order, then one row per record.
/// List values are written as their JSON text.
void write_csv(std::ostream& out, const Record& config, const std::vector<Record>& records);

}  // namespace percolab
