#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

// pchip.hpp calls isnan unqualified
namespace boost::math::interpolators {
using std::isnan;
}
#include <boost/math/interpolators/pchip.hpp>

#include "rinv/cauchy.hpp"

namespace rinv {

CauchyConditionError::CauchyConditionError(int condition, std::ptrdiff_t index, const std::string& what)
    : PreconditionError(what), condition_(condition), index_(index)
{
}

namespace {

// Fourth-order differences kept inside [lo, hi]: central where the stencil fits, one-sided at the ends.
double curve_diff(const Fn1& f, double s, Interval range)
{
    double h = std::min(1e-3 * std::max(1.0, std::abs(s)), range.width() / 8);
    if (s - 2 * h >= range.lo && s + 2 * h <= range.hi)
        return (f(s - 2 * h) - 8 * f(s - h) + 8 * f(s + h) - f(s + 2 * h)) / (12 * h);
    double d = s - range.lo < range.hi - s ? h : -h;
    return (-25 * f(s) + 48 * f(s + d) - 36 * f(s + 2 * d) + 16 * f(s + 3 * d) - 3 * f(s + 4 * d)) / (12 * d);
}

void need(const Fn1& f, const char* what)
{
    if (!f) throw PreconditionError(std::string("cauchy: curve has no ") + what + " data");
}

} // namespace

double CauchyCurve::r0_at(double v) const
{
    if (param == Param::by_r0) return v;
    need(r0, "r0");
    return r0(v);
}

double CauchyCurve::r1_at(double v) const
{
    if (param == Param::by_r1) return v;
    need(r1, "r1");
    return r1(v);
}

double CauchyCurve::r0_dot(double v) const
{
    if (param == Param::by_r0) return 1;
    if (r0_prime) return r0_prime(v);
    need(r0, "r0");
    return curve_diff(r0, v, s);
}

double CauchyCurve::r1_dot(double v) const
{
    if (param == Param::by_r1) return 1;
    if (r1_prime) return r1_prime(v);
    need(r1, "r1");
    return curve_diff(r1, v, s);
}

Vec4 CauchyCurve::tangent(double v) const
{
    if (eta_dot) return eta_dot(v);
    Vec4 out;
    for (int mu = 0; mu < 4; ++mu) out[mu] = curve_diff([&](double q) { return eta(q)[mu]; }, v, s);
    return out;
}

std::vector<double> CauchyCurve::sample_params() const
{
    std::size_t n = std::max<std::size_t>(samples, 2);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = s.lo + s.width() * static_cast<double>(i) / static_cast<double>(n - 1);
    return out;
}

namespace {

void monotone_or_throw(const std::vector<double>& v, const char* name)
{
    double scale = 1;
    for (double x : v) scale = std::max(scale, std::abs(x));
    double tol = 1e-12 * scale;
    int dir = 0;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        double d = v[i + 1] - v[i];
        int sd = d > tol ? 1 : d < -tol ? -1 : 0;
        if (sd == 0 || (dir != 0 && sd != dir)) {
            std::ostringstream os;
            os << "cauchy: monotonicity condition violated (condition 1): " << name << " is not strictly monotone at sample "
               << i + 1;
            throw CauchyConditionError(1, static_cast<std::ptrdiff_t>(i + 1), os.str());
        }
        dir = sd;
    }
}

} // namespace

void check_monotone(const CauchyCurve& c)
{
    auto ps = c.sample_params();
    if (c.r0 || c.param == CauchyCurve::Param::by_r0) {
        std::vector<double> v;
        for (double s : ps) v.push_back(c.r0_at(s));
        monotone_or_throw(v, "r0");
    }
    if (c.r1 || c.param == CauchyCurve::Param::by_r1) {
        std::vector<double> v;
        for (double s : ps) v.push_back(c.r1_at(s));
        monotone_or_throw(v, "r1");
    }
}

CauchyCurve curve_from_samples(const std::vector<CurveSample>& rows)
{
    using Pchip = boost::math::interpolators::pchip<std::vector<double>>;
    if (rows.size() < 4) throw ConfigError("cauchy: a curve needs at least 4 samples");
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        if (!(rows[i + 1].s > rows[i].s)) {
            std::ostringstream os;
            os << "cauchy: curve parameter s must increase strictly (sample " << i + 1 << ")";
            throw ConfigError(os.str());
        }
    }
    bool has0 = rows[0].r0.has_value(), has1 = rows[0].r1.has_value();
    for (const auto& r : rows) {
        if (r.r0.has_value() != has0 || r.r1.has_value() != has1)
            throw ConfigError("cauchy: r0 and r1 must be given on every sample or on none");
    }
    if (!has0 && !has1) throw ConfigError("cauchy: curve samples carry no r0 or r1 data");

    auto column = [&](auto get) {
        std::vector<double> v;
        v.reserve(rows.size());
        for (const auto& r : rows) v.push_back(get(r));
        return v;
    };
    auto make = [&](std::vector<double> y) {
        return std::make_shared<const Pchip>(column([](const CurveSample& r) { return r.s; }), std::move(y));
    };
    if (has0) monotone_or_throw(column([](const CurveSample& r) { return *r.r0; }), "r0");
    if (has1) monotone_or_throw(column([](const CurveSample& r) { return *r.r1; }), "r1");

    std::array<std::shared_ptr<const Pchip>, 4> e{
        make(column([](const CurveSample& r) { return r.t; })), make(column([](const CurveSample& r) { return r.x; })),
        make(column([](const CurveSample& r) { return r.y; })), make(column([](const CurveSample& r) { return r.z; }))};

    CauchyCurve c;
    c.s = {rows.front().s, rows.back().s};
    c.eta = [e](double s) { return SpacetimePoint{(*e[0])(s), {(*e[1])(s), (*e[2])(s), (*e[3])(s)}}; };
    c.eta_dot = [e](double s) { return Vec4{e[0]->prime(s), e[1]->prime(s), e[2]->prime(s), e[3]->prime(s)}; };
    if (has0) {
        auto p = make(column([](const CurveSample& r) { return *r.r0; }));
        c.r0 = [p](double s) { return (*p)(s); };
        c.r0_prime = [p](double s) { return p->prime(s); };
    }
    if (has1) {
        auto p = make(column([](const CurveSample& r) { return *r.r1; }));
        c.r1 = [p](double s) { return (*p)(s); };
        c.r1_prime = [p](double s) { return p->prime(s); };
    }
    c.samples = std::max<std::size_t>(201, 4 * rows.size());
    return c;
}

TransversalityReport transversality_check(const CauchyCurve& c, const FormFn& lam0, const FormFn& lam1)
{
    TransversalityReport rep;
    rep.params = c.sample_params();
    rep.min0 = rep.min1 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rep.params.size(); ++i) {
        double s = rep.params[i];
        RiemannPair r{c.r0_at(s), c.r1_at(s)};
        Vec4 v = c.tangent(s);
        double vn = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]);
        auto margin = [&](const WaveCovector& l) {
            double d = l.norm4() * vn;
            return d > 0 ? std::abs(pair(l, v)) / d : 0.0;
        };
        double m0 = margin(lam0(r)), m1 = margin(lam1(r));
        rep.margin0.push_back(m0);
        rep.margin1.push_back(m1);
        if (m0 < rep.min0) rep.min0 = m0, rep.worst0 = i;
        if (m1 < rep.min1) rep.min1 = m1, rep.worst1 = i;
    }
    return rep;
}

} // namespace rinv
