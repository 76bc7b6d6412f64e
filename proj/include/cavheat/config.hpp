// config.hpp: Flat key = value parameter files with command-line overrides

#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cavheat::cli {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Keys are case-sensitive; '#' starts a comment; blank lines are ignored.
/// Unknown keys and malformed values raise ValidationError.
class Config {
public:
    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;

    std::optional<std::string> raw(const std::string& key) const;
    double number(const std::string& key, double fallback) const;
    int integer(const std::string& key, int fallback) const;
    bool flag(const std::string& key, bool fallback) const;
    std::vector<double> numbers(const std::string& key, std::vector<double> fallback) const;

    const std::map<std::string, std::string>& entries() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

/// Every key a parameter file may set.
const std::vector<std::string>& known_keys();

Config parse_config(std::string_view text);
Config load_config(const std::string& path);

/// Applies "key=value"; the key must be known.
void apply_override(Config& config, std::string_view assignment);

} // namespace cavheat::cli
