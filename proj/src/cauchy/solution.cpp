#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rinv/cauchy.hpp"
#include "rinv/parallel.hpp"

namespace rinv {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();
constexpr double inf = std::numeric_limits<double>::infinity();

Vec4 minus(const SpacetimePoint& a, const SpacetimePoint& b) { return {a.t - b.t, a.x.x - b.x.x, a.x.y - b.x.y, a.x.z - b.x.z}; }

} // namespace

WaveCovector CauchyForms::lam0(RiemannPair r) const
{
    WaveCovector l = lam(r.r1);
    double e = std::exp(phi(r.r0, r.r1));
    return {l.lam0 * e, l.lam * e};
}

double CauchyForms::dphi(double r0, double r1) const
{
    if (phi_r1) return phi_r1(r0, r1);
    double h = 1e-6 * std::max(1.0, std::abs(r1));
    return (phi(r0, r1 + h) - phi(r0, r1 - h)) / (2 * h);
}

WaveCovector CauchyForms::lam1(RiemannPair r) const
{
    WaveCovector l = lam(r.r1), d = lam_dot(r.r1);
    double f = dphi(r.r0, r.r1);
    return {l.lam0 * f + d.lam0, l.lam * f + d.lam};
}

struct CauchySolution::Impl {
    CauchyCurve curve;
    CauchyForms forms;
    CauchyOptions opt;
    TransversalityReport margins;
    std::vector<double> params;
    std::vector<SpacetimePoint> pts;
    std::vector<RiemannPair> data;
    Interval r0_range, r1_range;
    std::array<Interval, 4> box{Interval{-inf, inf}, Interval{-inf, inf}, Interval{-inf, inf}, Interval{-inf, inf}};
    double base = 0;
    double defect = 0;

    // Parameter where the data column equals v; NaN outside the data range.
    template <class Get>
    double invert(Get get, double v, Interval range) const
    {
        double tol = 1e-14 * std::max(1.0, std::abs(v));
        if (v < range.lo - tol || v > range.hi - 0 + tol) return nan;
        // The data are strictly monotone: bisect the sample table, then refine.
        bool inc = get(data.front()) < get(data.back());
        std::size_t lo = 0, hi = data.size() - 1;
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            if ((get(data[mid]) < v) == inc) lo = mid;
            else hi = mid;
        }
        double flo = get(data[lo]) - v, fhi = get(data[hi]) - v;
        if (flo == 0) return params[lo];
        if (fhi == 0) return params[hi];
        if (flo * fhi > 0) return std::abs(flo) < std::abs(fhi) ? params[lo] : params[hi]; // clipped end
        return solve_scalar({[&](double s) { return value(get, s) - v; }, {params[lo], params[hi]}, 1e-15, 4e-16});
    }
    template <class Get>
    double value(Get get, double s) const
    {
        RiemannPair r{curve.r0_at(s), curve.r1_at(s)};
        return get(r);
    }
    double S0(double r0) const { return invert([](RiemannPair r) { return r.r0; }, r0, r0_range); }
    double S1(double r1) const { return invert([](RiemannPair r) { return r.r1; }, r1, r1_range); }

    // lam(r1(s)).eta'(s) exp(phi(r0(s), r1(s)) - phi(r0(s), r1))
    double kernel(double s, double r1) const
    {
        double q0 = curve.r0_at(s), q1 = curve.r1_at(s);
        return pair(forms.lam(q1), curve.tangent(s)) * std::exp(forms.phi(q0, q1) - forms.phi(q0, r1));
    }
    double integral(double from, double to, double r1, bool weighted) const
    {
        if (from == to) return 0;
        auto f = [&](double s) {
            double k = kernel(s, r1);
            return weighted ? k * forms.dphi(curve.r0_at(s), r1) : k;
        };
        return quad_gk(f, from, to, opt.quad).value;
    }

    std::array<double, 2> residual(RiemannPair r, const SpacetimePoint& pt) const
    {
        double s0 = S0(r.r0), s1 = S1(r.r1);
        if (std::isnan(s0) || std::isnan(s1)) return {nan, nan};
        Vec4 d = minus(pt, curve.eta(s1));
        return {pair(forms.lam(r.r1), d) - integral(s1, s0, r.r1, false),
                pair(forms.lam_dot(r.r1), d) + integral(s1, s0, r.r1, true)};
    }

    std::array<double, 4> jacobian(RiemannPair r, const SpacetimePoint& pt) const
    {
        double s0 = S0(r.r0);
        auto f = residual(r, pt);
        double k = kernel(s0, r.r1) / curve.r0_dot(s0);
        double h = 1e-6 * std::max(1.0, std::abs(r.r1));
        double up = std::min(r.r1 + h, r1_range.hi), dn = std::max(r.r1 - h, r1_range.lo);
        double d11 = (residual({r.r0, up}, pt)[1] - residual({r.r0, dn}, pt)[1]) / (up - dn);
        // dF0/dr1 = F1 because dG0/dr1 = G1
        return {-k, f[1], k * forms.dphi(r.r0, r.r1), d11};
    }

    ImplicitPair system() const
    {
        return {[this](RiemannPair r, const SpacetimePoint& p) { return residual(r, p); },
                [this](RiemannPair r, const SpacetimePoint& p) { return jacobian(r, p); }};
    }

    std::size_t nearest(const SpacetimePoint& pt) const
    {
        std::size_t best = 0;
        double bd = inf;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            Vec4 d = minus(pt, pts[i]);
            double dd = d[0] * d[0] + d[1] * d[1] + d[2] * d[2] + d[3] * d[3];
            if (dd < bd) bd = dd, best = i;
        }
        return best;
    }

    PairResult solve(const SpacetimePoint& pt) const
    {
        auto sys = system();
        std::size_t k = nearest(pt);
        try {
            return solve_pair_ex(sys, pt, data[k], opt.pair);
        } catch (const SolverError&) {
        }
        // continuation along the segment from the curve point
        RiemannPair seed = data[k];
        PairResult res;
        int m = std::max(2, opt.continuation_steps);
        for (int j = 1; j <= m; ++j) {
            double w = static_cast<double>(j) / m;
            SpacetimePoint q{pts[k].t + w * (pt.t - pts[k].t), pts[k].x + w * (pt.x - pts[k].x)};
            res = solve_pair_ex(sys, q, seed, opt.pair);
            seed = res.root;
        }
        return res;
    }
};

double CauchySolution::a(double r0) const
{
    double s = p_->S0(r0);
    if (std::isnan(s)) throw PreconditionError("cauchy: r0 outside the data range of the curve");
    const auto& c = p_->curve;
    double r1 = c.r1_at(s);
    return pair(p_->forms.lam(r1), c.tangent(s)) / c.r0_dot(s) * std::exp(p_->forms.phi(r0, r1));
}

double CauchySolution::Phi(double r1) const
{
    double s = p_->S1(r1);
    if (std::isnan(s)) throw PreconditionError("cauchy: r1 outside the data range of the curve");
    return pair(p_->forms.lam(r1), p_->curve.eta(s)) - p_->integral(p_->curve.s.lo, s, r1, false);
}

double CauchySolution::Phi_dot(double r1) const
{
    double s = p_->S1(r1);
    if (std::isnan(s)) throw PreconditionError("cauchy: r1 outside the data range of the curve");
    return pair(p_->forms.lam_dot(r1), p_->curve.eta(s)) + p_->integral(p_->curve.s.lo, s, r1, true);
}

std::array<double, 2> CauchySolution::G(RiemannPair r) const
{
    double s0 = p_->S0(r.r0), s1 = p_->S1(r.r1);
    if (std::isnan(s0) || std::isnan(s1)) throw PreconditionError("cauchy: (r0, r1) outside the data range of the curve");
    SpacetimePoint e = p_->curve.eta(s1);
    return {pair(p_->forms.lam(r.r1), e) + p_->integral(s1, s0, r.r1, false),
            pair(p_->forms.lam_dot(r.r1), e) - p_->integral(s1, s0, r.r1, true)};
}

std::array<double, 2> CauchySolution::residual(RiemannPair r, const SpacetimePoint& pt) const { return p_->residual(r, pt); }
const CauchyCurve& CauchySolution::curve() const { return p_->curve; }
const CauchyForms& CauchySolution::forms() const { return p_->forms; }
const TransversalityReport& CauchySolution::margins() const { return p_->margins; }
Interval CauchySolution::r0_range() const { return p_->r0_range; }
Interval CauchySolution::r1_range() const { return p_->r1_range; }
double CauchySolution::base() const { return p_->base; }
double CauchySolution::on_curve_defect() const { return p_->defect; }
const std::array<Interval, 4>& CauchySolution::box() const { return p_->box; }

bool CauchySolution::in_box(const SpacetimePoint& pt) const
{
    for (int mu = 0; mu < 4; ++mu)
        if (!p_->box[mu].contains(pt[mu])) return false;
    return true;
}

PairResult solve_cauchy_ex(const CauchySolution& sol, const SpacetimePoint& pt)
{
    if (!sol.in_box(pt)) throw PreconditionError("cauchy: point outside the validity box");
    return sol.p_->solve(pt);
}

RiemannPair solve_cauchy(const CauchySolution& sol, const SpacetimePoint& pt) { return solve_cauchy_ex(sol, pt).root; }

namespace {

// The on-curve relations with a and Phi, integrating a(xi) exp(-phi(xi, r1)) in r0.
double defect_of(const CauchySolution& sol)
{
    const auto& c = sol.curve();
    const auto& f = sol.forms();
    QuadOptions q{1e-11, 1e-11, 1L << 18};
    double worst = 0;
    for (int j = 0; j <= 10; ++j) {
        double s = c.s.lo + c.s.width() * j / 10.0;
        double r0 = c.r0_at(s), r1 = c.r1_at(s);
        SpacetimePoint e = c.eta(s);
        double i0 = quad_gk([&](double xi) { return sol.a(xi) * std::exp(-f.phi(xi, r1)); }, sol.base(), r0, q).value;
        double i1 = quad_gk([&](double xi) { return sol.a(xi) * f.dphi(xi, r1) * std::exp(-f.phi(xi, r1)); },
                                 sol.base(), r0, q)
                        .value;
        double ra = pair(f.lam(r1), e) - sol.Phi(r1) - i0;
        double rb = pair(f.lam_dot(r1), e) - sol.Phi_dot(r1) + i1;
        double scale = std::max({1.0, std::abs(sol.Phi(r1)), std::abs(i0)});
        worst = std::max({worst, std::abs(ra) / scale, std::abs(rb) / scale});
    }
    return worst;
}

} // namespace

CauchySolution build_from_curve(const CauchyCurve& curve, const CauchyForms& forms, const CauchyOptions& opt)
{
    if (!curve.eta) throw ConfigError("cauchy: curve has no eta");
    if (!forms.lam || !forms.lam_dot || !forms.phi) throw ConfigError("cauchy: lam, lam_dot and phi are required");
    if (!(curve.s.hi > curve.s.lo)) throw ConfigError("cauchy: empty curve parameter range");
    check_monotone(curve);

    auto impl = std::make_shared<CauchySolution::Impl>();
    impl->curve = curve;
    impl->forms = forms;
    impl->opt = opt;
    impl->margins = transversality_check(
        curve, [&](RiemannPair r) { return forms.lam0(r); }, [&](RiemannPair r) { return forms.lam1(r); });
    const auto& m = impl->margins;
    if (m.min() < opt.min_margin) {
        bool first = m.min0 <= m.min1;
        std::size_t i = first ? m.worst0 : m.worst1;
        std::ostringstream os;
        os << "cauchy: transversality condition violated (condition 2): the curve tangent lies in the annihilator of "
           << (first ? "lam0" : "lam1") << " at sample " << i << " (margin " << m.min() << ")";
        throw CauchyConditionError(2, static_cast<std::ptrdiff_t>(i), os.str());
    }

    impl->params = curve.sample_params();
    for (double s : impl->params) {
        impl->pts.push_back(curve.eta(s));
        impl->data.push_back({curve.r0_at(s), curve.r1_at(s)});
    }
    auto range = [&](auto get) {
        double a = get(impl->data.front()), b = get(impl->data.back());
        return Interval{std::min(a, b), std::max(a, b)};
    };
    impl->r0_range = range([](RiemannPair r) { return r.r0; });
    impl->r1_range = range([](RiemannPair r) { return r.r1; });
    impl->base = impl->data.front().r0;
    impl->defect = defect_of(CauchySolution(impl));

    if (opt.discover_box) {
        std::array<Interval, 4> bb;
        for (int mu = 0; mu < 4; ++mu) {
            bb[mu] = {inf, -inf};
            for (const auto& p : impl->pts) bb[mu] = {std::min(bb[mu].lo, p[mu]), std::max(bb[mu].hi, p[mu])};
        }
        double extent = 1;
        for (int mu = 0; mu < 4; ++mu) extent = std::max(extent, bb[mu].width());
        CauchySolution probe(impl);
        std::array<double, 8> reach{};
        parallel_for(8, 1, [&](std::size_t b, std::size_t e) {
            for (std::size_t face = b; face < e; ++face) {
                int mu = static_cast<int>(face / 2);
                double dir = face % 2 ? 1 : -1;
                double ok = 0;
                for (int d = 0; d < opt.box_doublings; ++d) {
                    double off = opt.box_step * extent * std::ldexp(1.0, d);
                    bool all = true;
                    for (int k = 1; k <= opt.box_probes && all; ++k) {
                        double s = curve.s.lo + curve.s.width() * k / (opt.box_probes + 1.0);
                        SpacetimePoint q = curve.eta(s);
                        q[mu] += dir * off;
                        try {
                            impl->solve(q);
                        } catch (const PreconditionError&) {
                            all = false;
                        }
                    }
                    if (!all) break;
                    ok = off;
                }
                reach[face] = ok;
            }
        });
        for (int mu = 0; mu < 4; ++mu) impl->box[mu] = {bb[mu].lo - reach[2 * mu], bb[mu].hi + reach[2 * mu + 1]};
    }
    return CauchySolution(impl);
}

} // namespace rinv
