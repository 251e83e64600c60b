#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace decoy {

struct ConfigEntry
{
    std::string value;
    std::string origin;  //!< "file:line" for diagnostics
};

/*!
 * Flat key=value configuration with optional [section] headers.
 *
 * Keys are stored as "section.key" (or just "key" before any header).
 * '#' and ';' start comments; blank lines are ignored.
 */
class Config
{
  public:
    static Config parse(std::string_view text, std::string const& source = "<config>");
    static Config load(std::string const& path);

    bool contains(std::string const& key) const { return entries_.count(key) != 0; }
    std::map<std::string, ConfigEntry> const& entries() const noexcept { return entries_; }

    std::string const* find(std::string const& key) const;

    // Typed accessors raise ConfigError naming the key and origin
    double get_double(std::string const& key, double fallback) const;
    std::uint64_t get_uint(std::string const& key, std::uint64_t fallback) const;
    std::string get_string(std::string const& key, std::string const& fallback) const;

    void set(std::string const& key, std::string value, std::string origin = "<set>");

  private:
    std::map<std::string, ConfigEntry> entries_;
};

//! Strict numeric parsing; the whole token must be consumed.
double parse_double(std::string_view text, std::string const& what);
std::uint64_t parse_uint(std::string_view text, std::string const& what);

}  // namespace decoy
