#include <algorithm>
#include <cmath>

#include "rinv/verify.hpp"

namespace rinv {

namespace {

using V4 = std::array<double, 4>;

V4 as4(const WaveCovector& l) { return {l.lam0, l.lam.x, l.lam.y, l.lam.z}; }
double dot4(const V4& a, const V4& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]; }
double n4(const V4& a) { return std::sqrt(dot4(a, a)); }

double axis(const Interval& r, std::size_t n, std::size_t i)
{
    return n <= 1 ? r.lo : r.lo + (r.hi - r.lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

V4 diff(const CovectorField& f, double r0, double r1, int which, double h)
{
    V4 a = which == 0 ? as4(f(r0 + h, r1)) : as4(f(r0, r1 + h));
    V4 b = which == 0 ? as4(f(r0 - h, r1)) : as4(f(r0, r1 - h));
    V4 d;
    for (int i = 0; i < 4; ++i) d[i] = (a[i] - b[i]) / (2 * h);
    return d;
}

double rel(const V4& resid, double scale) { return scale > 0 ? n4(resid) / scale : n4(resid); }

double norm5(const State5& a)
{
    double s = 0;
    for (double c : a) s += c * c;
    return std::sqrt(s);
}

// D field . dir at u.
State5 directional(const UField& field, const State5& u, const State5& dir, double h)
{
    double nd = norm5(dir);
    if (nd == 0) return {};
    double t = h * std::max(1.0, norm5(u)) / nd;
    State5 a = u, b = u;
    for (int i = 0; i < 5; ++i) {
        a[i] += t * dir[i];
        b[i] -= t * dir[i];
    }
    State5 fa = field(a), fb = field(b), d;
    for (int i = 0; i < 5; ++i) d[i] = (fa[i] - fb[i]) / (2 * t);
    return d;
}

} // namespace

InvolutivityReport involutivity_check(const CovectorField& lam0, const CovectorField& lam1, const RGrid& g, double h)
{
    InvolutivityReport rep;
    rep.alpha1_min = INFINITY;
    for (std::size_t i = 0; i < std::max<std::size_t>(g.n0, 1); ++i)
        for (std::size_t j = 0; j < std::max<std::size_t>(g.n1, 1); ++j) {
            double r0 = axis(g.r0, g.n0, i), r1 = axis(g.r1, g.n1, j);
            V4 l0 = as4(lam0(r0, r1)), l1 = as4(lam1(r0, r1));
            V4 d00 = diff(lam0, r0, r1, 0, h), d01 = diff(lam0, r0, r1, 1, h), d10 = diff(lam1, r0, r1, 0, h);
            double s = std::max(n4(l0), n4(l1));

            double a0 = dot4(d00, l0) / dot4(l0, l0);
            V4 ra;
            for (int k = 0; k < 4; ++k) ra[k] = d00[k] - a0 * l0[k];
            rep.res_a = std::max(rep.res_a, rel(ra, std::max(s, n4(d00))));

            double a1 = dot4(d01, l1) / dot4(l1, l1);
            V4 rb;
            for (int k = 0; k < 4; ++k) rb[k] = d01[k] - a1 * l1[k];
            rep.res_b = std::max(rep.res_b, rel(rb, std::max(s, n4(d01))));
            rep.alpha1_min = std::min(rep.alpha1_min, std::abs(a1));
            rep.alpha1_max = std::max(rep.alpha1_max, std::abs(a1));

            double g00 = dot4(l0, l0), g01 = dot4(l0, l1), g11 = dot4(l1, l1);
            double det = g00 * g11 - g01 * g01;
            double c0 = dot4(d10, l0), c1 = dot4(d10, l1);
            double b0 = det > 0 ? (g11 * c0 - g01 * c1) / det : 0;
            double b1 = det > 0 ? (g00 * c1 - g01 * c0) / det : 0;
            V4 rc;
            for (int k = 0; k < 4; ++k) rc[k] = d10[k] - b0 * l0[k] - b1 * l1[k];
            rep.res_c = std::max(rep.res_c, rel(rc, std::max(s, n4(d10))));
            ++rep.points;
        }
    if (rep.points == 0) rep.alpha1_min = 0;
    return rep;
}

CommutatorReport commutator_check(const UField& gamma0, const UField& gamma1, const Surface& f, const RGrid& g,
                                  double h)
{
    CommutatorReport rep;
    for (std::size_t i = 0; i < std::max<std::size_t>(g.n0, 1); ++i)
        for (std::size_t j = 0; j < std::max<std::size_t>(g.n1, 1); ++j) {
            State5 u = f(axis(g.r0, g.n0, i), axis(g.r1, g.n1, j));
            State5 a = gamma0(u), b = gamma1(u);
            State5 d1 = directional(gamma1, u, a, h), d0 = directional(gamma0, u, b, h);
            State5 br;
            for (int k = 0; k < 5; ++k) br[k] = d1[k] - d0[k];
            double m = norm5(br);
            double s = std::max({norm5(d1), norm5(d0), 1e-300});
            rep.max_abs = std::max(rep.max_abs, m);
            rep.max_relative = std::max(rep.max_relative, m / s);
        }
    return rep;
}

} // namespace rinv
