#include <cmath>
#include <limits>
#include <sstream>

#include "rinv/solver.hpp"

namespace rinv {

namespace {

constexpr double eps_m = std::numeric_limits<double>::epsilon();

double brent(const ScalarProblem& p, double a, double b, double fa, double fb)
{
    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 0; it < p.max_iter; ++it) {
        if ((fb > 0 && fc > 0) || (fb < 0 && fc < 0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        double tol1 = 2 * eps_m * std::abs(b) + 0.5 * (p.tol_abs + p.tol_rel * std::abs(b));
        double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double s = fb / fa, pp, q;
            if (a == c) {
                pp = 2 * xm * s;
                q = 1 - s;
            } else {
                double qq = fa / fc, r = fb / fc;
                pp = s * (2 * xm * qq * (qq - r) - (b - a) * (r - 1));
                q = (qq - 1) * (r - 1) * (s - 1);
            }
            if (pp > 0) q = -q;
            pp = std::abs(pp);
            if (2 * pp < std::min(3 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = pp / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol1 ? d : std::copysign(tol1, xm);
        fb = p.f(b);
        if (!std::isfinite(fb)) throw SolverError("solve_scalar: function not finite inside bracket");
    }
    throw SolverError("solve_scalar: iteration cap reached");
}

// Newton with bisection fallback on a bracket oriented so that f(lo) < 0.
double safe_newton(const ScalarProblem& p, double lo, double hi, double flo)
{
    double xl = lo, xh = hi;
    if (flo > 0) std::swap(xl, xh);
    double x = 0.5 * (lo + hi);
    double dxold = std::abs(hi - lo), dx = dxold;
    double f = p.f(x), df = p.df(x);
    for (int it = 0; it < p.max_iter; ++it) {
        if (f == 0) return x;
        bool newton_out = ((x - xh) * df - f) * ((x - xl) * df - f) > 0;
        bool slow = std::abs(2 * f) > std::abs(dxold * df);
        dxold = dx;
        if (newton_out || slow || !std::isfinite(df) || df == 0) {
            dx = 0.5 * (xh - xl);
            x = xl + dx;
        } else {
            dx = f / df;
            x -= dx;
        }
        double tol = p.tol_abs + p.tol_rel * std::abs(x) + 2 * eps_m * std::abs(x);
        if (std::abs(dx) < tol) return x;
        f = p.f(x);
        if (!std::isfinite(f)) throw SolverError("solve_scalar: function not finite inside bracket");
        df = p.df(x);
        if (f < 0)
            xl = x;
        else
            xh = x;
        if (std::abs(xh - xl) < tol) return x;
    }
    throw SolverError("solve_scalar: iteration cap reached");
}

} // namespace

double solve_scalar(const ScalarProblem& p)
{
    double a = p.bracket.lo, b = p.bracket.hi;
    if (!(a <= b)) throw PreconditionError("solve_scalar: bracket has lo > hi");
    double fa = p.f(a), fb = p.f(b);
    if (!std::isfinite(fa) || !std::isfinite(fb)) throw PreconditionError("solve_scalar: function not finite at bracket ends");
    if (fa == 0) return a;
    if (fb == 0) return b;
    if ((fa > 0) == (fb > 0)) {
        std::ostringstream os;
        os << "solve_scalar: no sign change on [" << a << ", " << b << "] (f = " << fa << ", " << fb << ")";
        throw PreconditionError(os.str());
    }
    if (p.df) return safe_newton(p, a, b, fa);
    return brent(p, a, b, fa, fb);
}

std::vector<Interval> find_sign_changes(const Fn1& f, Interval range, int n, bool geometric)
{
    if (n < 1) n = 1;
    if (geometric && !(range.lo > 0)) throw PreconditionError("find_sign_changes: geometric scan needs lo > 0");
    auto node = [&](int i) {
        if (i == 0) return range.lo;
        if (i == n) return range.hi;
        double s = static_cast<double>(i) / n;
        return geometric ? range.lo * std::pow(range.hi / range.lo, s) : range.lo + s * (range.hi - range.lo);
    };
    std::vector<Interval> out;
    double x0 = node(0), f0 = f(x0);
    for (int i = 1; i <= n; ++i) {
        double x1 = node(i), f1 = f(x1);
        if (std::isfinite(f0) && std::isfinite(f1)) {
            if (f0 == 0) {
                // a node zero belongs to the bracket on its left unless it is the first node
                if (out.empty() || out.back().hi != x0) out.push_back({x0, x0});
            } else if (f1 == 0 || (f0 > 0) != (f1 > 0)) {
                out.push_back({x0, x1});
            }
        }
        x0 = x1;
        f0 = f1;
    }
    if (std::isfinite(f0) && f0 == 0 && (out.empty() || out.back().hi != x0)) out.push_back({x0, x0});
    return out;
}

double solve_unique(const Fn1& f, Interval range, int n_scan, bool geometric, double tol_abs, const Fn1& df)
{
    auto br = find_sign_changes(f, range, n_scan, geometric);
    if (br.empty()) {
        std::ostringstream os;
        os << "no root bracketed in [" << range.lo << ", " << range.hi << "]";
        throw PreconditionError(os.str());
    }
    if (br.size() > 1) {
        std::ostringstream os;
        os << br.size() << " roots bracketed in [" << range.lo << ", " << range.hi << "]:";
        for (const auto& b : br) os << " [" << b.lo << ", " << b.hi << "]";
        throw PreconditionError(os.str());
    }
    if (br[0].lo == br[0].hi) return br[0].lo;
    ScalarProblem p{f, br[0], tol_abs, 1e-15, 200, df};
    return solve_scalar(p);
}

} // namespace rinv
