#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "rinv/cli.hpp"
#include "rinv/parallel.hpp"

namespace rinv::cli {

std::string format_number(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v == 0 ? 0.0 : v); // no "-0"
    return buf;
}

namespace {

std::array<double, 11> columns(const FieldRow& r)
{
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    if (!r.ok) return {r.pt.t, r.pt.x.x, r.pt.x.y, r.pt.x.z, nan, nan, nan, nan, nan, nan, nan};
    return {r.pt.t, r.pt.x.x, r.pt.x.y, r.pt.x.z, r.u[0], r.u[1], r.u[2], r.u[3], r.u[4], r.r.r0, r.r.r1};
}

} // namespace

void write_field_csv(std::ostream& out, const std::vector<FieldRow>& rows)
{
    out << field_header << '\n';
    for (const auto& r : rows) {
        auto c = columns(r);
        for (std::size_t i = 0; i < c.size(); ++i) out << (i ? "," : "") << format_number(c[i]);
        out << '\n';
    }
}

void write_field_dat(std::ostream& out, const std::vector<FieldRow>& rows, const Grid4& grid)
{
    out << "# t x y z rho p v1 v2 v3 r0 r1\n";
    std::size_t block = 0;
    int live = 0;
    for (int a = 3; a >= 0; --a) {
        if (grid.axes[a].count < 2) continue;
        if (live++ == 0) block = grid.axes[a].count;
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (live >= 2 && i > 0 && i % block == 0) out << '\n';
        auto c = columns(rows[i]);
        for (std::size_t k = 0; k < c.size(); ++k) out << (k ? " " : "") << format_number(c[k]);
        out << '\n';
    }
}

std::vector<FieldRow> sample_field(const std::function<WaveSample(const SpacetimePoint&)>& eval, const Grid4& grid)
{
    std::vector<FieldRow> rows(grid.size());
    parallel_for(rows.size(), 64, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            FieldRow& row = rows[i];
            row.pt = grid.point(i);
            try {
                WaveSample s = eval(row.pt);
                row.u = s.u.as_array();
                row.r = s.r;
                row.ok = true;
                for (double v : row.u) row.ok = row.ok && std::isfinite(v);
            } catch (const std::exception&) {
                row.ok = false;
            }
        }
    });
    return rows;
}

namespace {

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> cells(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(line);
    while (std::getline(in, cur, ',')) out.push_back(trim(cur));
    if (!line.empty() && line.back() == ',') out.push_back({});
    return out;
}

} // namespace

std::vector<CurveSample> read_curve_csv(std::istream& in)
{
    static const std::array<std::string, 7> known{"s", "t", "x", "y", "z", "r0", "r1"};
    std::string line;
    std::vector<int> where(known.size(), -1);
    std::vector<CurveSample> rows;
    bool header = false;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        if (trim(line).empty()) continue;
        auto c = cells(line);
        if (!header) {
            for (std::size_t i = 0; i < c.size(); ++i) {
                std::size_t k = 0;
                while (k < known.size() && known[k] != c[i]) ++k;
                if (k == known.size()) throw ConfigError("curve csv: unknown column '" + c[i] + "'");
                if (where[k] >= 0) throw ConfigError("curve csv: column '" + c[i] + "' repeated");
                where[k] = static_cast<int>(i);
            }
            for (int k = 0; k < 5; ++k)
                if (where[k] < 0) throw ConfigError("curve csv: missing column '" + known[k] + "'");
            header = true;
            continue;
        }
        std::string at = "curve csv line " + std::to_string(n);
        auto value = [&](int k, bool optional) -> std::optional<double> {
            if (where[k] < 0) return std::nullopt;
            std::size_t i = static_cast<std::size_t>(where[k]);
            if (i >= c.size() || c[i].empty()) {
                if (optional) return std::nullopt;
                throw ConfigError(at + ": empty " + known[k]);
            }
            char* end = nullptr;
            double v = std::strtod(c[i].c_str(), &end);
            if (end != c[i].c_str() + c[i].size() || !std::isfinite(v))
                throw ConfigError(at + ": bad " + known[k] + " '" + c[i] + "'");
            return v;
        };
        CurveSample r;
        r.s = *value(0, false);
        r.t = *value(1, false);
        r.x = *value(2, false);
        r.y = *value(3, false);
        r.z = *value(4, false);
        r.r0 = value(5, true);
        r.r1 = value(6, true);
        rows.push_back(r);
    }
    if (!header) throw ConfigError("curve csv: no header");
    return rows;
}

std::vector<CurveSample> read_curve_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read curve file '" + path + "'");
    return read_curve_csv(in);
}

} // namespace rinv::cli
