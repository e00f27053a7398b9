#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rinv/cli.hpp"

namespace rinv::cli {

namespace {

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool valid_key(const std::string& k)
{
    if (k.empty() || k.front() == '.' || k.back() == '.') return false;
    for (char ch : k)
        if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '.')) return false;
    return k.find("..") == std::string::npos;
}

double to_double(const std::string& text, const std::string& what)
{
    std::string s = trim(text);
    const char* b = s.c_str();
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(b, &end);
    if (s.empty() || end != b + s.size() || errno == ERANGE) throw ConfigError(what + ": '" + text + "' is not a number");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(trim(cur));
    if (!s.empty() && s.back() == sep) out.push_back({});
    return out;
}

} // namespace

Config Config::parse(std::istream& in, const std::string& origin)
{
    Config c;
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        std::string where = origin + ":" + std::to_string(n);
        if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (!valid_key(key)) throw ConfigError(where + ": bad key '" + key + "'");
        if (c.entries_.count(key)) throw ConfigError(where + ": key '" + key + "' set twice");
        c.entries_[key] = {value, where, {}};
    }
    return c;
}

Config Config::load(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    Config c = parse(in, path);
    std::string dir = std::filesystem::path(path).parent_path().string();
    for (auto& kv : c.entries_) kv.second.dir = dir;
    return c;
}

void Config::set(const std::string& key, const std::string& value)
{
    if (!valid_key(key)) throw ConfigError("bad key '" + key + "'");
    entries_[key] = {trim(value), "command line", {}};
}

bool Config::has(const std::string& key) const { return entries_.count(key) != 0; }

const Config::Entry& Config::entry(const std::string& key) const
{
    auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError("missing required key '" + key + "'");
    it->second.used = true;
    return it->second;
}

const std::string& Config::str(const std::string& key) const { return entry(key).value; }

std::string Config::str_or(const std::string& key, const std::string& fallback) const
{
    return has(key) ? str(key) : fallback;
}

double Config::num(const std::string& key) const
{
    const auto& e = entry(key);
    return to_double(e.value, e.origin + ": " + key);
}

double Config::num_or(const std::string& key, double fallback) const { return has(key) ? num(key) : fallback; }

long Config::integer_or(const std::string& key, long fallback) const
{
    if (!has(key)) return fallback;
    double v = num(key);
    if (v != std::floor(v) || std::abs(v) > 1e15) throw ConfigError(key + ": expected an integer");
    return static_cast<long>(v);
}

bool Config::flag_or(const std::string& key, bool fallback) const
{
    if (!has(key)) return fallback;
    const std::string& v = str(key);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

Sign Config::sign_or(const std::string& key, Sign fallback) const
{
    if (!has(key)) return fallback;
    const std::string& v = str(key);
    if (v == "+" || v == "+1" || v == "1" || v == "plus") return Sign::plus;
    if (v == "-" || v == "-1" || v == "minus") return Sign::minus;
    throw ConfigError(key + ": expected +1 or -1, got '" + v + "'");
}

std::vector<double> Config::list(const std::string& key) const
{
    const auto& e = entry(key);
    std::vector<double> out;
    for (const auto& part : split(e.value, ',')) out.push_back(to_double(part, e.origin + ": " + key));
    return out;
}

Vec3 Config::vec3(const std::string& key) const
{
    auto v = list(key);
    if (v.size() != 3) throw ConfigError(key + ": expected three comma separated numbers");
    return {v[0], v[1], v[2]};
}

Vec3 Config::vec3_or(const std::string& key, Vec3 fallback) const { return has(key) ? vec3(key) : fallback; }

Interval Config::interval_or(const std::string& key, Interval fallback) const
{
    if (!has(key)) return fallback;
    auto v = list(key);
    if (v.size() != 2 || !(v[1] > v[0])) throw ConfigError(key + ": expected lo, hi with lo < hi");
    return {v[0], v[1]};
}

std::string Config::path(const std::string& key) const
{
    const auto& e = entry(key);
    if (e.value.empty()) throw ConfigError(key + ": empty file name");
    std::filesystem::path p(e.value);
    if (p.is_relative() && !e.dir.empty()) p = std::filesystem::path(e.dir) / p;
    return p.string();
}

void Config::touch_prefix(const std::string& prefix) const
{
    for (const auto& [k, e] : entries_)
        if (k.rfind(prefix, 0) == 0) e.used = true;
}

void Config::reject_unused() const
{
    std::string bad;
    for (const auto& [k, e] : entries_)
        if (!e.used) bad += (bad.empty() ? "" : ", ") + k + " (" + e.origin + ")";
    if (!bad.empty()) throw ConfigError("unknown keys: " + bad);
}

std::vector<std::string> Config::keys() const
{
    std::vector<std::string> out;
    for (const auto& kv : entries_) out.push_back(kv.first);
    return out;
}

Grid4 grid_from(const Config& c, const std::string& prefix)
{
    static const char* names[4] = {"t", "x", "y", "z"};
    std::array<Interval, 4> r;
    std::array<std::size_t, 4> n;
    for (int a = 0; a < 4; ++a) {
        std::string k = prefix + "." + names[a];
        double lo = c.num_or(k + ".lo", 0);
        double hi = c.num_or(k + ".hi", lo);
        long cnt = c.integer_or(k + ".n", 1);
        if (cnt < 1) throw ConfigError(k + ".n must be at least 1");
        if (cnt > 1 && !(hi > lo)) throw ConfigError(k + ": hi must exceed lo when n > 1");
        if (cnt == 1 && hi != lo) throw ConfigError(k + ": a range needs n > 1");
        r[a] = {lo, hi};
        n[a] = static_cast<std::size_t>(cnt);
    }
    return make_grid(r, n);
}

} // namespace rinv::cli
