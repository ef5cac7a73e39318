#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sfac {

/// Ordered `key = value` text records. Lines starting with '#' and blank
/// lines are ignored; duplicate keys are rejected.
class KeyValue {
public:
    static KeyValue parse(const std::string& text);
    static KeyValue read(const std::string& path);

    void write(const std::string& path) const;
    std::string to_string() const;

    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, double value);
    void set(const std::string& key, const std::vector<double>& values);
    void set_int(const std::string& key, long long value);

    bool has(const std::string& key) const { return entries_.count(key) != 0; }
    std::optional<std::string> get(const std::string& key) const;
    std::string require(const std::string& key) const;
    double require_double(const std::string& key) const;
    std::vector<double> require_doubles(const std::string& key) const;

    const std::map<std::string, std::string>& entries() const { return entries_; }

    friend bool operator==(const KeyValue&, const KeyValue&) = default;

private:
    std::map<std::string, std::string> entries_;
};

/// Shortest text that reads back to the same double.
std::string format_double(double v);
double parse_double(const std::string& text, const std::string& what);
std::vector<double> parse_double_list(const std::string& text, const std::string& what);

}  // namespace sfac
