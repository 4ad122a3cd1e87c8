#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace levyratio
{
/*!
 * Line-oriented "key = value" text with [section] headers.
 *
 * '#' and ';' start comments. Keys are looked up as (section, key); every
 * key that is never read is reported by check_all_used so typos fail loudly.
 */
class Config
{
  public:
    static Config from_file(std::string const& path);
    static Config from_string(std::string const& text, std::string origin = "<string>");

    bool has(std::string const& section, std::string const& key) const;
    std::string get_string(std::string const& section, std::string const& key) const;
    std::string get_string(std::string const& section, std::string const& key,
                           std::string const& fallback) const;
    double get_double(std::string const& section, std::string const& key) const;
    double get_double(std::string const& section, std::string const& key,
                      double fallback) const;
    long long get_int(std::string const& section, std::string const& key,
                      long long fallback) const;
    bool get_bool(std::string const& section, std::string const& key, bool fallback) const;
    //! Comma-separated list of numbers
    std::vector<double> get_list(std::string const& section, std::string const& key) const;

    void set(std::string const& section, std::string const& key, std::string value);

    //! Directory of the file the config came from ("" for strings)
    std::string const& base_dir() const { return base_dir_; }
    //! Resolve a path relative to base_dir
    std::string resolve_path(std::string const& path) const;

    //! Throws ConfigError naming any key that was never read.
    void check_all_used() const;
    //! Same, restricted to the listed sections.
    void check_all_used(std::vector<std::string> const& sections) const;
    std::vector<std::string> sections() const;

    //! Canonical text form (sorted sections and keys), minus `skip` sections
    std::string echo(std::vector<std::string> const& skip = {}) const;
    std::map<std::string, std::map<std::string, std::string>> const& entries() const
    {
        return values_;
    }

  private:
    std::map<std::string, std::map<std::string, std::string>> values_;
    mutable std::set<std::pair<std::string, std::string>> used_;
    std::string origin_;
    std::string base_dir_;

    std::string const* find(std::string const& section, std::string const& key) const;
    [[noreturn]] void fail(std::string const& section, std::string const& key,
                           std::string const& what) const;
};

}  // namespace levyratio
