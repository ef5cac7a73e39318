#pragma once

#include <string>
#include <vector>

#include "sfac/keyvalue.hpp"

namespace sfac::cli {

struct OptionSpec {
    std::string key;
    std::string default_value;  ///< empty with required = false means "unset"
    std::string help;
    bool required = false;
};

/// Names of all subcommands.
const std::vector<std::string>& command_names();

/// Option schema of a subcommand; throws ValidationError for unknown names.
const std::vector<OptionSpec>& options_for(const std::string& command);

/// Resolved parameters of one subcommand run. Starts from the schema
/// defaults; unknown keys are rejected.
class RunConfig {
public:
    explicit RunConfig(std::string command);

    /// Reads `key = value` pairs; an optional `command` key must match.
    static RunConfig from_keyvalue(const std::string& command, const KeyValue& kv);
    static RunConfig from_file(const std::string& command, const std::string& path);

    void set(const std::string& key, const std::string& value);
    bool is_set(const std::string& key) const;

    std::string get(const std::string& key) const;
    double get_double(const std::string& key) const;
    long long get_int(const std::string& key) const;
    bool get_bool(const std::string& key) const;
    std::vector<double> get_doubles(const std::string& key) const;

    /// Throws when a required key is still unset.
    void check_required() const;

    KeyValue to_keyvalue() const;
    const std::string& command() const { return command_; }

    friend bool operator==(const RunConfig&, const RunConfig&) = default;

private:
    std::string command_;
    KeyValue values_;
};

}  // namespace sfac::cli
