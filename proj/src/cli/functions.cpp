#include <cmath>
#include <cstdlib>
#include <memory>
#include <sstream>

// pchip.hpp calls isnan unqualified
namespace boost::math::interpolators {
using std::isnan;
}
#include <boost/math/interpolators/pchip.hpp>

#include "rinv/cli.hpp"

namespace rinv::cli {

namespace {

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

bool parse_number(const std::string& text, double& v)
{
    std::string s = trim(text);
    if (s.empty()) return false;
    char* end = nullptr;
    v = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

struct Call {
    std::string name;
    std::vector<std::string> args;
};

Call split_call(const std::string& text)
{
    std::string s = trim(text);
    auto open = s.find('(');
    if (open == std::string::npos || s.back() != ')') throw ConfigError("function '" + text + "': expected name(args)");
    Call c{trim(s.substr(0, open)), {}};
    std::istringstream in(s.substr(open + 1, s.size() - open - 2));
    std::string part;
    while (std::getline(in, part, ',')) c.args.push_back(trim(part));
    return c;
}

std::vector<double> numbers(const Call& c, const std::string& text)
{
    std::vector<double> v;
    for (const auto& a : c.args) {
        double x;
        if (!parse_number(a, x)) throw ConfigError("function '" + text + "': '" + a + "' is not a number");
        v.push_back(x);
    }
    return v;
}

void arity(const std::string& text, std::size_t n, std::size_t lo, std::size_t hi)
{
    if (n < lo || n > hi) {
        std::ostringstream os;
        os << "function '" << text << "': expected " << lo;
        if (hi > lo) os << " to " << hi;
        os << " arguments";
        throw ConfigError(os.str());
    }
}

} // namespace

ScalarFunction parse_function(const std::string& text)
{
    double k;
    if (parse_number(text, k)) return {[k](double) { return k; }, [](double) { return 0.0; }, text};
    Call c = split_call(text);
    if (c.name == "polynomial") {
        auto a = numbers(c, text);
        arity(text, a.size(), 1, 64);
        auto f = [a](double r) {
            double s = 0;
            for (auto it = a.rbegin(); it != a.rend(); ++it) s = s * r + *it;
            return s;
        };
        auto df = [a](double r) {
            double s = 0;
            for (std::size_t i = a.size(); i-- > 1;) s = s * r + static_cast<double>(i) * a[i];
            return s;
        };
        return {f, df, text};
    }
    if (c.name == "exponential") {
        auto a = numbers(c, text);
        arity(text, a.size(), 2, 3);
        double A = a[0], b = a[1], off = a.size() > 2 ? a[2] : 0;
        return {[=](double r) { return A * std::exp(b * r) + off; }, [=](double r) { return A * b * std::exp(b * r); },
                text};
    }
    if (c.name == "sine") {
        auto a = numbers(c, text);
        arity(text, a.size(), 2, 3);
        double A = a[0], w = a[1], ph = a.size() > 2 ? a[2] : 0;
        return {[=](double r) { return A * std::sin(w * r + ph); }, [=](double r) { return A * w * std::cos(w * r + ph); },
                text};
    }
    if (c.name == "tabulated") {
        std::vector<double> xs, ys;
        for (const auto& a : c.args) {
            auto colon = a.find(':');
            double x, y;
            if (colon == std::string::npos || !parse_number(a.substr(0, colon), x) || !parse_number(a.substr(colon + 1), y))
                throw ConfigError("function '" + text + "': nodes are written x:y");
            if (!xs.empty() && !(x > xs.back())) throw ConfigError("function '" + text + "': nodes must increase in x");
            xs.push_back(x);
            ys.push_back(y);
        }
        if (xs.size() < 4) throw ConfigError("function '" + text + "': at least 4 nodes");
        double lo = xs.front(), hi = xs.back();
        using Pchip = boost::math::interpolators::pchip<std::vector<double>>;
        auto p = std::make_shared<const Pchip>(std::move(xs), std::move(ys));
        auto inside = [lo, hi, text](double r) {
            if (!(r >= lo && r <= hi))
                throw PreconditionError("function '" + text + "' evaluated outside its table at " + std::to_string(r));
        };
        return {[p, inside](double r) { return inside(r), (*p)(r); }, [p, inside](double r) { return inside(r), p->prime(r); },
                text};
    }
    throw ConfigError("unknown function '" + c.name + "' (polynomial, exponential, sine, tabulated)");
}

BivariateFunction parse_function2(const std::string& text)
{
    double k;
    if (parse_number(text, k))
        return {[k](double, double) { return k; }, [](double, double) { return 0.0; }, [](double, double) { return 0.0; },
                text};
    Call c = split_call(text);
    if (c.name != "polynomial2") throw ConfigError("unknown function '" + c.name + "' of two variables (polynomial2)");
    struct Term {
        double c;
        int i, j;
    };
    std::vector<Term> terms;
    for (const auto& a : c.args) {
        std::istringstream in(a);
        std::string sc, si, sj;
        double cv, iv, jv;
        if (!std::getline(in, sc, ':') || !std::getline(in, si, ':') || !std::getline(in, sj) || !parse_number(sc, cv) ||
            !parse_number(si, iv) || !parse_number(sj, jv) || iv < 0 || jv < 0 || iv != std::floor(iv) ||
            jv != std::floor(jv))
            throw ConfigError("function '" + text + "': terms are written c:i:j with integer powers");
        terms.push_back({cv, static_cast<int>(iv), static_cast<int>(jv)});
    }
    if (terms.empty()) throw ConfigError("function '" + text + "': no terms");
    auto mono = [](double x, int n) { return n == 0 ? 1.0 : std::pow(x, n); };
    Fn2 f = [=](double a, double b) {
        double s = 0;
        for (const auto& t : terms) s += t.c * mono(a, t.i) * mono(b, t.j);
        return s;
    };
    Fn2 d0 = [=](double a, double b) {
        double s = 0;
        for (const auto& t : terms)
            if (t.i > 0) s += t.c * t.i * mono(a, t.i - 1) * mono(b, t.j);
        return s;
    };
    Fn2 d1 = [=](double a, double b) {
        double s = 0;
        for (const auto& t : terms)
            if (t.j > 0) s += t.c * t.j * mono(a, t.i) * mono(b, t.j - 1);
        return s;
    };
    return {f, d0, d1, text};
}

ScalarFunction function(const Config& c, const std::string& key)
{
    try {
        return parse_function(c.str(key));
    } catch (const ConfigError& e) {
        throw ConfigError(key + ": " + e.what());
    }
}

ScalarFunction function_or(const Config& c, const std::string& key, const std::string& fallback)
{
    return c.has(key) ? function(c, key) : parse_function(fallback);
}

} // namespace rinv::cli
