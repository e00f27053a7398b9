#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "doctest.h"
#include "json.hpp"
#include "rinv/cli.hpp"

using namespace rinv;
using namespace rinv::cli;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result call(std::vector<std::string> args)
{
    std::ostringstream out, err;
    int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

// Scratch directory per test run.
fs::path scratch()
{
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("rinv_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string write_file(const std::string& name, const std::string& text)
{
    fs::path p = scratch() / name;
    std::ofstream(p) << text;
    return p.string();
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<double>> csv_rows(const std::string& text, std::string* header = nullptr)
{
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    if (header) *header = line;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> r;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) r.push_back(std::strtod(cell.c_str(), nullptr));
        rows.push_back(r);
    }
    return rows;
}

const std::string e0a_ref = R"(family = e0a
A = 1.6666666666666667
K = -1.2909944487358056
kappa = 1
g = 0, 0, 9.81
omega = 0, -1, 0
)";

const std::string forms = R"(lam.t = polynomial(-0.5, -0.3)
lam.x = 1
lam.y = sine(0.2, 1)
lam.z = polynomial(0.1, 0, 0.05)
phi = polynomial2(0.3:1:0, 0.2:1:1)
)";

std::string sampled_curve(int n = 41)
{
    std::ostringstream os;
    os << "s,t,x,y,z,r0,r1\n";
    for (int i = 0; i < n; ++i) {
        double s = static_cast<double>(i) / (n - 1);
        os << format_number(s) << ',' << format_number(0.05 * s * s) << ',' << format_number(s) << ','
           << format_number(0.1 * s) << ',' << format_number(0.2 * s) << ',' << format_number(1 + s + 0.2 * s * s * s)
           << ',' << format_number(0.3 + 0.4 * s + 0.1 * s * s) << '\n';
    }
    return os.str();
}

} // namespace

TEST_CASE("config: comments, dotted keys, overrides")
{
    std::istringstream in("# header\n grid.x.lo = -1   # trailing\n\nname = e0a\nv = 1, 2,3\n");
    Config c = Config::parse(in);
    CHECK(c.num("grid.x.lo") == -1);
    CHECK(c.str("name") == "e0a");
    Vec3 v = c.vec3("v");
    CHECK(v.z == 3);
    c.set("grid.x.lo", "2");
    CHECK(c.num("grid.x.lo") == 2);
    CHECK(c.num_or("missing", 7) == 7);
    CHECK_NOTHROW(c.reject_unused());

    std::istringstream dup("a = 1\na = 2\n");
    CHECK_THROWS_AS(Config::parse(dup), ConfigError);
    std::istringstream bad("just text\n");
    CHECK_THROWS_AS(Config::parse(bad), ConfigError);
    std::istringstream unused("a = 1\nb = 2\n");
    Config u = Config::parse(unused);
    u.num("a");
    CHECK_THROWS_WITH_AS(u.reject_unused(), doctest::Contains("b"), ConfigError);
    CHECK_THROWS_WITH_AS(u.num("zzz"), doctest::Contains("zzz"), ConfigError);
    std::istringstream nan_text("x = 1.5abc\n");
    CHECK_THROWS_AS(Config::parse(nan_text).num("x"), ConfigError);
}

TEST_CASE("functions: registry values and derivatives")
{
    auto p = parse_function("polynomial(1, -2, 3)");
    CHECK(p.f(2) == doctest::Approx(1 - 4 + 12));
    CHECK(p.df(2) == doctest::Approx(-2 + 12));
    auto e = parse_function("exponential(2, 0.5, 1)");
    CHECK(e.f(1) == doctest::Approx(2 * std::exp(0.5) + 1));
    CHECK(e.df(1) == doctest::Approx(std::exp(0.5)));
    auto s = parse_function("sine(0.2, 3, 0.1)");
    CHECK(s.df(0.4) == doctest::Approx(0.6 * std::cos(1.3)));
    auto k = parse_function("-2.5");
    CHECK(k.f(10) == -2.5);
    CHECK(k.df(10) == 0);

    // monotone cubic: reproduces nodes, keeps monotone data monotone, derivative consistent
    auto t = parse_function("tabulated(0:0, 1:1, 2:8, 3:27, 4:64)");
    for (int i = 0; i <= 4; ++i) CHECK(t.f(i) == doctest::Approx(i * i * i));
    double prev = -1;
    for (double r = 0; r <= 4; r += 0.05) {
        CHECK(t.f(r) >= prev);
        prev = t.f(r);
    }
    double h = 1e-6;
    CHECK(t.df(2.3) == doctest::Approx((t.f(2.3 + h) - t.f(2.3 - h)) / (2 * h)).epsilon(1e-6));
    CHECK_THROWS_AS(t.f(5), PreconditionError);

    auto b = parse_function2("polynomial2(2:1:0, 3:1:2, -1:0:0)");
    CHECK(b.f(2, 3) == doctest::Approx(4 + 54 - 1));
    CHECK(b.d0(2, 3) == doctest::Approx(2 + 27));
    CHECK(b.d1(2, 3) == doctest::Approx(3 * 2 * 2 * 3));

    CHECK_THROWS_AS(parse_function("cosh(1)"), ConfigError);
    CHECK_THROWS_AS(parse_function("exponential(1)"), ConfigError);
    CHECK_THROWS_AS(parse_function("tabulated(0:0, 1:1, 2:2)"), ConfigError);
    CHECK_THROWS_AS(parse_function("tabulated(0:0, 2:1, 1:2, 3:3)"), ConfigError);
    CHECK_THROWS_AS(parse_function2("polynomial2(1:0.5:0)"), ConfigError);
}

TEST_CASE("numbers print with 17 significant digits and round trip")
{
    for (double v : {0.1, 1.0 / 3.0, -9.81, 1e-300, 6.02214076e23}) CHECK(std::strtod(format_number(v).c_str(), nullptr) == v);
    CHECK(format_number(9.81) == "9.8100000000000005");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(format_number(-0.0) == "0");
}

TEST_CASE("field: header, reference point, single point grid")
{
    auto r = call({"field", "--config", write_file("ref.cfg", e0a_ref)});
    REQUIRE(r.code == 0);
    std::string header;
    auto rows = csv_rows(r.out, &header);
    CHECK(header == "t,x,y,z,rho,p,v1,v2,v3,r0,r1");
    REQUIRE(rows.size() == 1);
    CHECK(std::abs(rows[0][4] - 1.0) <= 1e-12);
    CHECK(rows[0][6] == 9.81);
}

TEST_CASE("field: stationary wave gives identical rows for every time")
{
    std::string cfg = R"(family = e0e
m = 0.3
p0 = 10
rho0 = 1.2
b = 0.5
c = 0.7
r01 = 2
k = 0.6
a = polynomial(1, 0.3)
Omega2 = 0.5
grid.t.lo = 0
grid.t.hi = 2
grid.t.n = 3
grid.x.lo = 0
grid.x.hi = 1
grid.x.n = 4
grid.z.lo = 0
grid.z.hi = 0.5
grid.z.n = 3
)";
    auto r = call({"field", "-c", write_file("e0e.cfg", cfg)});
    REQUIRE(r.code == 0);
    auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 36);
    for (std::size_t i = 12; i < 36; ++i)
        for (int k = 1; k < 11; ++k) CHECK(rows[i][k] == rows[i % 12][k]);
}

TEST_CASE("field: output is byte identical across runs, dat variant has blocks")
{
    std::string cfg = e0a_ref + "grid.x.lo = -5\ngrid.x.hi = 5\ngrid.x.n = 41\ngrid.z.hi = 0.5\ngrid.z.n = 6\n";
    std::string c = write_file("fig.cfg", cfg);
    std::string a = (scratch() / "a.csv").string(), b = (scratch() / "b.csv").string(),
                d = (scratch() / "a.dat").string();
    REQUIRE(call({"field", "-c", c, "--output", a, "--dat=" + d}).code == 0);
    REQUIRE(call({"field", "-c", c, "--output", b}).code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(csv_rows(slurp(a)).size() == 41 * 6);

    std::istringstream dat(slurp(d));
    std::string line;
    int blanks = 0, data = 0;
    while (std::getline(dat, line)) {
        if (line.empty()) ++blanks;
        else if (line[0] != '#') ++data;
    }
    CHECK(data == 41 * 6);
    CHECK(blanks == 40);
}

TEST_CASE("field: failed points become nan rows and a nonzero exit")
{
    // past the pole of the acoustic wave: K = sqrt(A) t at t = 1
    std::string cfg = e0a_ref + "grid.t.lo = 0\ngrid.t.hi = 1\ngrid.t.n = 2\n";
    auto r = call({"field", "-c", write_file("pole.cfg", cfg), "--K", "1", "--A", "1"});
    CHECK(r.code == Exit::precondition);
    CHECK(r.out.find("nan") != std::string::npos);
    CHECK(r.err.find("1 of 2") != std::string::npos);
}

TEST_CASE("config errors exit 1 and name the key")
{
    auto r = call({"field", "-c", write_file("typo.cfg", e0a_ref + "Kk = 1\n")});
    CHECK(r.code == Exit::bad_config);
    CHECK(r.err.find("Kk") != std::string::npos);
    CHECK(call({"field", "--family", "nope"}).code == Exit::bad_config);
    CHECK(call({"field", "-c", (scratch() / "absent.cfg").string()}).code == Exit::bad_config);
    CHECK(call({"frobnicate"}).code == Exit::bad_config);
    CHECK(call({"field", "stray"}).code == Exit::bad_config);
    CHECK(call({"--help"}).code == 0);
}

TEST_CASE("elements: acoustic delta and residuals")
{
    std::vector<std::string> base{"elements", "--family", "A_hom", "--kappa", "1.4", "--rho", "1.2", "--p", "2",
                                  "--v", "0.1,0,0", "--lam", "1,2,0", "--json"};
    for (const char* eps : {"+1", "-1"}) {
        auto args = base;
        args.insert(args.end(), {"--eps", eps});
        auto r = call(args);
        REQUIRE(r.code == 0);
        auto j = nlohmann::json::parse(r.out);
        double s = eps[0] == '+' ? 1 : -1;
        double expect = s * std::sqrt(5.0) * std::sqrt(1.4 * 2 / 1.2);
        CHECK(j["delta"].get<double>() == doctest::Approx(expect).epsilon(1e-14));
        CHECK(j["residual"]["relative"].get<double>() < 1e-10);
    }
    auto r = call({"elements", "--family", "A_hom", "--rho", "1", "--p", "1", "--lam", "1,0,0"});
    CHECK(r.code == Exit::bad_config);
    CHECK(r.err.find("kappa") != std::string::npos);

    auto e0 = call({"elements", "--family", "E0", "--kappa", "1.4", "--rho", "1", "--p", "1", "--omega", "0,0,1",
                    "--h", "0.2,0.1,0", "--json"});
    REQUIRE(e0.code == 0);
    CHECK(nlohmann::json::parse(e0.out)["residual"]["relative"].get<double>() < 1e-10);

    // nonpositive density violates the state constraint
    auto bad = call({"elements", "--family", "A_hom", "--kappa", "1.4", "--rho", "-1", "--p", "1", "--lam", "1,0,0"});
    CHECK(bad.code == Exit::precondition);
}

TEST_CASE("verify: reference acoustic wave passes, wrong kappa fails")
{
    std::string cfg = e0a_ref + "grid.x.lo = -5\ngrid.x.hi = 5\ngrid.x.n = 21\ngrid.z.hi = 0.5\ngrid.z.n = 6\n";
    std::string c = write_file("verify.cfg", cfg);
    auto r = call({"verify", "-c", c, "--json"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["pass"].get<bool>());
    for (const auto& ch : j["checks"]) {
        if (ch["name"] == "euler_residual") CHECK(ch["data"]["min_order"].get<double>() == doctest::Approx(2).epsilon(0.05));
        if (ch["name"] == "jacobian_rank") CHECK(ch["data"]["max_sigma3_over_sigma1"].get<double>() < 1e-6);
    }

    auto text = call({"verify", "-c", c});
    CHECK(text.out.find("sigma3/sigma1") != std::string::npos);

    auto w = call({"verify", "-c", c, "--kappa", "1.4", "--json"});
    CHECK(w.code == Exit::verification);
    auto jw = nlohmann::json::parse(w.out);
    for (const auto& ch : jw["checks"])
        if (ch["name"] == "euler_residual") {
            CHECK_FALSE(ch["pass"].get<bool>());
            // the O(1) residual does not shrink with h
            auto eq = ch["data"]["equations"]["entropy"];
            CHECK(eq["max_abs_half"].get<double>() > 0.5 * eq["max_abs"].get<double>());
        }
}

TEST_CASE("verify: simple state is rank one")
{
    std::string cfg = R"(family = state
row = E0_gdotO_nonzero
kappa = 1.4
g = 0.3, -0.2, -9.81
omega = 0.3, 0.2, 1
v0 = 0.5, -0.2, 0.1
p = exponential(10, 0.1)
grid.t.lo = 0.1
grid.x.hi = 1
grid.x.n = 5
grid.y.hi = 1
grid.y.n = 5
grid.z.hi = 1
grid.z.n = 5
)";
    auto r = call({"verify", "-c", write_file("state.cfg", cfg), "--json"});
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    for (const auto& ch : j["checks"])
        if (ch["name"] == "jacobian_rank") CHECK(ch["data"]["max_rank"].get<int>() == 1);
}

TEST_CASE("catastrophe: fitted time, none for negative K, K required")
{
    std::string cfg = "family = e0a\ngrid.x.lo = -20.5\ngrid.x.hi = -19.5\ngrid.x.n = 3\ngrid.z.hi = 0.5\ngrid.z.n = 2\n";
    std::string c = write_file("cat.cfg", cfg);
    auto r = call({"catastrophe", "-c", c, "--K", "1", "--A", "1", "--json"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["predicted"].get<double>() == 1.0);
    CHECK(j["fit"]["t_star"].get<double>() == doctest::Approx(1).epsilon(0.02));

    auto neg = call({"catastrophe", "-c", c, "--K", "-1.2909944487358056"});
    CHECK(neg.code == 0);
    CHECK(neg.out.find("none detected") != std::string::npos);

    auto missing = call({"catastrophe", "-c", c});
    CHECK(missing.code == Exit::bad_config);
    CHECK(missing.err.find("'K'") != std::string::npos);
}

TEST_CASE("cauchy: transversal curve solves and round trips")
{
    std::string curve = write_file("curve.csv", sampled_curve());
    std::string cfg = "curve = " + curve + "\n" + forms +
                      "grid.t.lo = 0.02\ngrid.x.lo = 0.2\ngrid.x.hi = 0.8\ngrid.x.n = 4\ngrid.y.lo = 0.05\n"
                      "grid.z.lo = 0.1\nbox.discover = false\n";
    std::string on = (scratch() / "on_curve.csv").string();
    auto r = call({"cauchy", "-c", write_file("cauchy.cfg", cfg), "--curve_output", on, "--json"});
    REQUIRE(r.code == 0);
    // report on stderr because the field went to stdout
    auto j = nlohmann::json::parse(r.err);
    CHECK(j["min_margin0"].get<double>() > 0);
    CHECK(j["min_margin1"].get<double>() > 0);
    CHECK(j["roundtrip_max_error"].get<double>() <= 1e-9);
    CHECK(csv_rows(r.out).size() == 4);

    auto data = csv_rows(sampled_curve()), solved = csv_rows(slurp(on));
    REQUIRE(data.size() == solved.size());
    for (std::size_t i = 0; i < data.size(); ++i)
        for (int k = 0; k < 7; ++k) CHECK(std::abs(solved[i][k] - data[i][k]) <= 1e-9);

    // deterministic output
    auto again = call({"cauchy", "-c", write_file("cauchy.cfg", cfg)});
    CHECK(again.out == r.out);
}

TEST_CASE("cauchy: tangential curve exits 2 naming condition 2")
{
    std::ostringstream os;
    os << "s,t,x,y,z,r0,r1\n";
    for (int i = 0; i <= 20; ++i) {
        double s = i / 20.0;
        os << s << ',' << s << ',' << 0.5 * s << ",0,0," << 1 + s << ',' << s << '\n';
    }
    std::string cfg = "curve = " + write_file("tangent.csv", os.str()) +
                      "\nlam.t = -0.5\nlam.x = 1\nphi = polynomial2(0.3:1:0, 0.2:1:1)\n";
    auto r = call({"cauchy", "-c", write_file("tangent.cfg", cfg)});
    CHECK(r.code == Exit::precondition);
    CHECK(r.err.find("condition 2") != std::string::npos);
    CHECK(r.err.find("sample") != std::string::npos);
}

TEST_CASE("cauchy: non-monotone data exits 2 with the sample index")
{
    std::ostringstream os;
    os << "s,t,x,y,z,r0,r1\n";
    for (int i = 0; i <= 10; ++i) {
        double s = i / 10.0;
        double r1 = i == 6 ? 0.5 : s; // tie with sample 5
        os << s << ",0," << s << ",0,0," << 1 + s << ',' << r1 << '\n';
    }
    std::string cfg = "curve = " + write_file("tie.csv", os.str()) + "\n" + forms;
    auto r = call({"cauchy", "-c", write_file("tie.cfg", cfg)});
    CHECK(r.code == Exit::precondition);
    CHECK(r.err.find("condition 1") != std::string::npos);
    CHECK(r.err.find("sample 6") != std::string::npos);
}

TEST_CASE("cauchy: alpha = 0 regime from r1 data")
{
    // curve (0.1 r, r, 2 r, 0), phi = 0, C = (0.2, 1, 0, 0): r0 = C.x + a0 on the curve
    std::ostringstream os;
    os << "s,t,x,y,z,r0,r1\n";
    for (int i = 0; i <= 20; ++i) {
        double r = -1 + i / 10.0;
        os << format_number(r) << ',' << format_number(0.1 * r) << ',' << format_number(r) << ','
           << format_number(2 * r) << ",0," << format_number(1.02 * r + 0.4) << ',' << format_number(r) << '\n';
    }
    std::string cfg = "curve = " + write_file("az.csv", os.str()) + R"(
regime = alpha_zero
C = 0.2, 1, 0, 0
phi = 0
A.t = polynomial(0, 1)
A.y = 1
chi = polynomial2(0.1:1:1)
anchor.r1 = 0
anchor.r0 = 0.4
grid.t.lo = 0.01
grid.x.lo = 0.1
grid.y.lo = 0.25
)";
    auto r = call({"cauchy", "-c", write_file("az.cfg", cfg), "--json"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.err);
    CHECK(j["a0"].get<double>() == doctest::Approx(0.4));
    CHECK(j["roundtrip_max_error"].get<double>() <= 1e-9);
    auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0][9] == doctest::Approx(0.2 * 0.01 + 0.1 + 0.4).epsilon(1e-12));
}

TEST_CASE("curve csv: column order, missing columns, empty cells")
{
    std::istringstream ok("x,s,t,y,z,r1\n1,0,0,0,0,0.5\n2,1,0,0,0,\n");
    auto rows = read_curve_csv(ok);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].x == 2);
    CHECK(rows[1].s == 1);
    CHECK_FALSE(rows[0].r0.has_value());
    CHECK(rows[0].r1.value() == 0.5);
    CHECK_FALSE(rows[1].r1.has_value());
    std::istringstream miss("s,t,x,y\n0,0,0,0\n");
    CHECK_THROWS_AS(read_curve_csv(miss), ConfigError);
    std::istringstream extra("s,t,x,y,z,w\n");
    CHECK_THROWS_AS(read_curve_csv(extra), ConfigError);
    std::istringstream junk("s,t,x,y,z\n0,0,a,0,0\n");
    CHECK_THROWS_AS(read_curve_csv(junk), ConfigError);
}
