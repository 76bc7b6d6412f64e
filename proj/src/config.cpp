// config.cpp: Parameter file parsing

#include "cavheat/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cavheat/model.hpp"

namespace cavheat::cli {

namespace {

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

double parse_number(const std::string& key, const std::string& text)
{
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v)) {
        throw ValidationError({key + ": expected a finite number, got '" + text + "'"});
    }
    return v;
}

void require_known(const std::string& key)
{
    const auto& keys = known_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        throw ValidationError({key + ": unknown parameter"});
    }
}

} // namespace

const std::vector<std::string>& known_keys()
{
    static const std::vector<std::string> keys{
        "omega_r",     "coupling",   "atom",        "chi",         "sigma_z",
        "omega_0",     "gamma_l",    "gamma_r",     "nbar_l",      "nbar_r",
        "temp_l",      "temp_r",     "sites",       "atom_site",   "sweep_min",
        "sweep_max",   "sweep_step", "sweep_param", "alpha_values", "n_max",      "fock_tail_bound",
        "crosscheck_tol_analytic",   "crosscheck_tol_oracle",      "crosscheck_floor",
    };
    return keys;
}

void Config::set(const std::string& key, const std::string& value)
{
    require_known(key);
    values_[key] = value;
}

bool Config::has(const std::string& key) const
{
    return values_.count(key) != 0;
}

std::optional<std::string> Config::raw(const std::string& key) const
{
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

double Config::number(const std::string& key, double fallback) const
{
    const auto v = raw(key);
    return v ? parse_number(key, *v) : fallback;
}

int Config::integer(const std::string& key, int fallback) const
{
    const auto v = raw(key);
    if (!v) return fallback;
    const double d = parse_number(key, *v);
    if (d != std::floor(d) || std::abs(d) > 1e9) {
        throw ValidationError({key + ": expected an integer, got '" + *v + "'"});
    }
    return static_cast<int>(d);
}

bool Config::flag(const std::string& key, bool fallback) const
{
    const auto v = raw(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "yes" || *v == "1") return true;
    if (*v == "false" || *v == "no" || *v == "0") return false;
    throw ValidationError({key + ": expected true/false, got '" + *v + "'"});
}

std::vector<double> Config::numbers(const std::string& key, std::vector<double> fallback) const
{
    const auto v = raw(key);
    if (!v) return fallback;
    std::vector<double> out;
    std::stringstream ss(*v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number(key, trim(item)));
    if (out.empty()) throw ValidationError({key + ": expected a comma-separated list"});
    return out;
}

Config parse_config(std::string_view text)
{
    Config config;
    std::vector<std::string> problems;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const std::string body = trim(line);
        if (body.empty()) continue;

        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            problems.push_back("line " + std::to_string(line_no) + ": expected key = value");
            continue;
        }
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string value = trim(std::string_view(body).substr(eq + 1));
        try {
            config.set(key, value);
        } catch (const ValidationError&) {
            problems.push_back("line " + std::to_string(line_no) + ": " + key + ": unknown parameter");
        }
    }
    if (!problems.empty()) throw ValidationError(std::move(problems));
    return config;
}

Config load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError("cannot read config file '" + path + "'");
    return parse_config(buffer.str());
}

void apply_override(Config& config, std::string_view assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        throw ValidationError({"--set: expected key=value, got '" + std::string(assignment) + "'"});
    }
    config.set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

} // namespace cavheat::cli
