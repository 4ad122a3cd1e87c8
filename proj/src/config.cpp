#include "levyratio/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "levyratio/errors.hpp"

namespace levyratio
{
namespace
{
std::string trim(std::string const& s)
{
    auto const begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos)
    {
        return {};
    }
    auto const end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

bool parse_number(std::string const& text, double& out)
{
    auto const s = trim(text);
    if (s.empty())
    {
        return false;
    }
    auto const* first = s.data();
    auto const* last = s.data() + s.size();
    if (*first == '+')
    {
        ++first;
    }
    auto const [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}
}  // namespace

Config Config::from_file(std::string const& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    auto cfg = from_string(buffer.str(), path);
    cfg.base_dir_ = std::filesystem::path(path).parent_path().string();
    return cfg;
}

Config Config::from_string(std::string const& text, std::string origin)
{
    Config cfg;
    cfg.origin_ = std::move(origin);
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        auto const comment = line.find_first_of("#;");
        if (comment != std::string::npos)
        {
            line.erase(comment);
        }
        line = trim(line);
        if (line.empty())
        {
            continue;
        }
        auto where = [&] { return cfg.origin_ + ":" + std::to_string(lineno) + ": "; };
        if (line.front() == '[')
        {
            if (line.back() != ']')
            {
                throw ConfigError(where() + "unterminated section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
            {
                throw ConfigError(where() + "empty section name");
            }
            continue;
        }
        auto const eq = line.find('=');
        if (eq == std::string::npos)
        {
            throw ConfigError(where() + "expected 'key = value'");
        }
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        if (key.empty())
        {
            throw ConfigError(where() + "missing key");
        }
        if (cfg.values_[section].count(key))
        {
            throw ConfigError(where() + "duplicate key '" + key + "'");
        }
        cfg.values_[section][key] = value;
    }
    return cfg;
}

std::string const* Config::find(std::string const& section, std::string const& key) const
{
    auto const s = values_.find(section);
    if (s == values_.end())
    {
        return nullptr;
    }
    auto const k = s->second.find(key);
    if (k == s->second.end())
    {
        return nullptr;
    }
    used_.insert({section, key});
    return &k->second;
}

void Config::fail(std::string const& section, std::string const& key,
                  std::string const& what) const
{
    throw ConfigError(origin_ + ": [" + section + "] " + key + ": " + what);
}

bool Config::has(std::string const& section, std::string const& key) const
{
    auto const s = values_.find(section);
    return s != values_.end() && s->second.count(key) > 0;
}

std::string Config::get_string(std::string const& section, std::string const& key) const
{
    auto const* v = find(section, key);
    if (!v)
    {
        fail(section, key, "required key is missing");
    }
    return *v;
}

std::string Config::get_string(std::string const& section, std::string const& key,
                               std::string const& fallback) const
{
    auto const* v = find(section, key);
    return v ? *v : fallback;
}

double Config::get_double(std::string const& section, std::string const& key) const
{
    auto const text = get_string(section, key);
    double out = 0;
    if (!parse_number(text, out))
    {
        fail(section, key, "'" + text + "' is not a number");
    }
    return out;
}

double Config::get_double(std::string const& section, std::string const& key,
                          double fallback) const
{
    return has(section, key) ? get_double(section, key) : fallback;
}

long long Config::get_int(std::string const& section, std::string const& key,
                          long long fallback) const
{
    if (!has(section, key))
    {
        return fallback;
    }
    double const v = get_double(section, key);
    if (v != std::floor(v) || std::fabs(v) > 9e15)
    {
        fail(section, key, "expected an integer");
    }
    return static_cast<long long>(v);
}

bool Config::get_bool(std::string const& section, std::string const& key, bool fallback) const
{
    if (!has(section, key))
    {
        return fallback;
    }
    auto const v = get_string(section, key);
    if (v == "true" || v == "yes" || v == "1")
    {
        return true;
    }
    if (v == "false" || v == "no" || v == "0")
    {
        return false;
    }
    fail(section, key, "expected true/false");
}

std::vector<double> Config::get_list(std::string const& section, std::string const& key) const
{
    auto const text = get_string(section, key);
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        double v = 0;
        if (!parse_number(item, v))
        {
            fail(section, key, "'" + trim(item) + "' is not a number");
        }
        out.push_back(v);
    }
    if (out.empty())
    {
        fail(section, key, "empty list");
    }
    return out;
}

void Config::set(std::string const& section, std::string const& key, std::string value)
{
    values_[section][key] = std::move(value);
}

std::string Config::resolve_path(std::string const& path) const
{
    std::filesystem::path p(path);
    if (p.is_absolute() || base_dir_.empty())
    {
        return p.string();
    }
    return (std::filesystem::path(base_dir_) / p).string();
}

void Config::check_all_used() const
{
    check_all_used({});
}

void Config::check_all_used(std::vector<std::string> const& sections) const
{
    for (auto const& [section, keys] : values_)
    {
        if (!sections.empty()
            && std::find(sections.begin(), sections.end(), section) == sections.end())
        {
            continue;
        }
        for (auto const& [key, value] : keys)
        {
            if (!used_.count({section, key}))
            {
                throw ConfigError(origin_ + ": [" + section + "] " + key
                                  + ": unknown key");
            }
        }
    }
}

std::string Config::echo(std::vector<std::string> const& skip) const
{
    std::ostringstream os;
    bool first = true;
    for (auto const& [section, keys] : values_)
    {
        if (std::find(skip.begin(), skip.end(), section) != skip.end())
        {
            continue;
        }
        if (!first)
        {
            os << '\n';
        }
        first = false;
        if (!section.empty())
        {
            os << '[' << section << "]\n";
        }
        for (auto const& [key, value] : keys)
        {
            os << key << " = " << value << '\n';
        }
    }
    return os.str();
}

std::vector<std::string> Config::sections() const
{
    std::vector<std::string> out;
    for (auto const& entry : values_)
    {
        out.push_back(entry.first);
    }
    return out;
}

}  // namespace levyratio
