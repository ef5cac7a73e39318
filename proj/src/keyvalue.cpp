#include "sfac/keyvalue.hpp"

#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sfac/error.hpp"

namespace sfac {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    if (t.empty()) throw ValidationError(what + ": empty number");
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || errno == ERANGE) {
        throw ValidationError(what + ": cannot parse '" + t + "' as a number");
    }
    return v;
}

std::vector<double> parse_double_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(item, what));
    if (out.empty()) throw ValidationError(what + ": empty list");
    return out;
}

KeyValue KeyValue::parse(const std::string& text) {
    KeyValue kv;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        const std::string key = trim(t.substr(0, eq));
        if (key.empty()) throw ValidationError("line " + std::to_string(lineno) + ": empty key");
        if (kv.has(key)) throw ValidationError("duplicate key '" + key + "'");
        kv.entries_[key] = trim(t.substr(eq + 1));
    }
    return kv;
}

KeyValue KeyValue::read(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::string KeyValue::to_string() const {
    std::string out;
    for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
    return out;
}

void KeyValue::write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path);
    out << to_string();
}

void KeyValue::set(const std::string& key, const std::string& value) { entries_[key] = value; }

void KeyValue::set(const std::string& key, double value) { entries_[key] = format_double(value); }

void KeyValue::set(const std::string& key, const std::vector<double>& values) {
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + format_double(values[i]);
    entries_[key] = s;
}

void KeyValue::set_int(const std::string& key, long long value) { entries_[key] = std::to_string(value); }

std::optional<std::string> KeyValue::get(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

std::string KeyValue::require(const std::string& key) const {
    auto v = get(key);
    if (!v) throw ValidationError("missing key '" + key + "'");
    return *v;
}

double KeyValue::require_double(const std::string& key) const { return parse_double(require(key), key); }

std::vector<double> KeyValue::require_doubles(const std::string& key) const {
    return parse_double_list(require(key), key);
}

}  // namespace sfac
