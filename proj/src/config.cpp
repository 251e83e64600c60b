#include "decoy/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "decoy/errors.hpp"

namespace decoy {

namespace {
std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}
}  // namespace

Config Config::parse(std::string_view text, std::string const& source)
{
    Config cfg;
    std::string section;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size())
    {
        std::size_t const eol = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;

        if (auto const c = line.find_first_of("#;"); c != std::string_view::npos)
            line = line.substr(0, c);
        line = trim(line);
        if (line.empty())
        {
            if (eol == text.size())
                break;
            continue;
        }

        std::string const where = source + ":" + std::to_string(line_no);
        if (line.front() == '[')
        {
            if (line.back() != ']' || line.size() < 3)
                throw ConfigError(where + ": malformed section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        auto const eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(where + ": expected key = value");
        auto const key = trim(line.substr(0, eq));
        auto const value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(where + ": empty key");
        std::string const full = section.empty() ? std::string(key)
                                                 : section + "." + std::string(key);
        if (cfg.contains(full))
            throw ConfigError(where + ": duplicate key '" + full + "'");
        cfg.entries_[full] = {std::string(value), where};
        if (eol == text.size())
            break;
    }
    return cfg;
}

Config Config::load(std::string const& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
}

std::string const* Config::find(std::string const& key) const
{
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second.value;
}

void Config::set(std::string const& key, std::string value, std::string origin)
{
    entries_[key] = {std::move(value), std::move(origin)};
}

double parse_double(std::string_view text, std::string const& what)
{
    text = trim(text);
    std::string const s(text);
    char* end = nullptr;
    double const v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
        throw ConfigError(what + ": expected a finite number, got '" + s + "'");
    return v;
}

std::uint64_t parse_uint(std::string_view text, std::string const& what)
{
    text = trim(text);
    std::uint64_t v = 0;
    auto const [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
    {
        // accept integral scientific notation such as 1e7
        double const d = parse_double(text, what);
        if (d < 0 || d != std::floor(d) || d > 1.8e19)
            throw ConfigError(what + ": expected a non-negative integer, got '"
                              + std::string(text) + "'");
        return static_cast<std::uint64_t>(d);
    }
    return v;
}

double Config::get_double(std::string const& key, double fallback) const
{
    auto it = entries_.find(key);
    if (it == entries_.end())
        return fallback;
    return parse_double(it->second.value, it->second.origin + ": " + key);
}

std::uint64_t Config::get_uint(std::string const& key, std::uint64_t fallback) const
{
    auto it = entries_.find(key);
    if (it == entries_.end())
        return fallback;
    return parse_uint(it->second.value, it->second.origin + ": " + key);
}

std::string Config::get_string(std::string const& key, std::string const& fallback) const
{
    auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second.value;
}

}  // namespace decoy
