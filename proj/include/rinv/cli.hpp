#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rinv/cauchy.hpp"
#include "rinv/solver.hpp"
#include "rinv/types.hpp"
#include "rinv/verify.hpp"
#include "rinv/waves.hpp"

namespace rinv::cli {

// Exit codes of every command.
enum Exit : int { ok = 0, bad_config = 1, precondition = 2, verification = 3 };

// Flat key=value settings with '#' comments. Keys are dotted paths (grid.x.lo).
// Every key that is set must be read by the command, otherwise reject_unused throws.
class Config {
public:
    static Config parse(std::istream& in, const std::string& origin = "<config>");
    static Config load(const std::string& path);

    // Later settings win; used for command line overrides.
    void set(const std::string& key, const std::string& value);

    bool has(const std::string& key) const;
    const std::string& str(const std::string& key) const;
    std::string str_or(const std::string& key, const std::string& fallback) const;
    double num(const std::string& key) const;
    double num_or(const std::string& key, double fallback) const;
    long integer_or(const std::string& key, long fallback) const;
    bool flag_or(const std::string& key, bool fallback) const;
    Sign sign_or(const std::string& key, Sign fallback) const;
    Vec3 vec3(const std::string& key) const;
    Vec3 vec3_or(const std::string& key, Vec3 fallback) const;
    Interval interval_or(const std::string& key, Interval fallback) const;
    std::vector<double> list(const std::string& key) const;
    // A file name; relative names from a config file are taken relative to that file.
    std::string path(const std::string& key) const;

    // Marks a whole prefix as read (for sections a command deliberately ignores).
    void touch_prefix(const std::string& prefix) const;
    void reject_unused() const;
    std::vector<std::string> keys() const;

private:
    struct Entry {
        std::string value;
        std::string origin;
        std::string dir; // directory of the config file, empty for overrides
        mutable bool used = false;
    };
    const Entry& entry(const std::string& key) const;
    std::map<std::string, Entry> entries_;
};

// ---- built-in functions ----
// Text forms:
//   2.5                            constant
//   polynomial(c0, c1, ...)        c0 + c1 r + ...
//   exponential(a, b[, c])         a exp(b r) + c
//   sine(a, w[, phase])            a sin(w r + phase)
//   tabulated(x0:y0, x1:y1, ...)   monotone cubic through the nodes (at least 4)
// The derivative comes with the function.
struct ScalarFunction {
    Fn1 f, df;
    std::string text;
};
ScalarFunction parse_function(const std::string& text);

//   polynomial2(c:i:j, ...)        sum c r0^i r1^j
struct BivariateFunction {
    Fn2 f, d0, d1;
    std::string text;
};
BivariateFunction parse_function2(const std::string& text);

ScalarFunction function(const Config& c, const std::string& key);
ScalarFunction function_or(const Config& c, const std::string& key, const std::string& fallback);

// ---- grids and output ----

// grid.<axis>.lo / .hi / .n for t, x, y, z; n defaults to 1 and hi to lo.
Grid4 grid_from(const Config& c, const std::string& prefix = "grid");

struct FieldRow {
    SpacetimePoint pt;
    State5 u{};
    RiemannPair r;
    bool ok = true;
};

inline constexpr const char* field_header = "t,x,y,z,rho,p,v1,v2,v3,r0,r1";

// 17 significant digits; nan and inf spelled in lower case.
std::string format_number(double v);
void write_field_csv(std::ostream& out, const std::vector<FieldRow>& rows);
// Space separated, '#' header, a blank line whenever the second fastest non-trivial
// axis advances (gnuplot block format).
void write_field_dat(std::ostream& out, const std::vector<FieldRow>& rows, const Grid4& grid);

// Curve CSV with columns s,t,x,y,z,r0,r1 (r0 or r1 may be missing or empty).
std::vector<CurveSample> read_curve_csv(std::istream& in);
std::vector<CurveSample> read_curve_csv(const std::string& path);

// ---- solution families ----

struct FamilyModel {
    std::string name;
    PhysParams params;
    int rank = 1;
    std::function<WaveSample(const SpacetimePoint&)> eval;
    Field field;
    std::function<RankTwoFrame(const SpacetimePoint&)> frame; // rank-2 families with known elements
    CovectorField lam0, lam1;                                 // directions of dr0, dr1 where known
    std::optional<double> t_star;                             // predicted catastrophe time
};

// family = state | e0e | e0a | h0e | h0a, with the family's keys.
FamilyModel build_family(const Config& c);

// Evaluates every grid point (in parallel), failures become nan rows.
std::vector<FieldRow> sample_field(const std::function<WaveSample(const SpacetimePoint&)>& eval, const Grid4& grid);

// Command line entry point: rinv <command> [--config FILE] [--key value ...].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace rinv::cli
