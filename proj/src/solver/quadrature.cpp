#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

#include "rinv/solver.hpp"

namespace rinv {

namespace {

struct SimpsonCtx {
    const Fn1& f;
    long max_intervals;
    long intervals = 1;
    long evals = 0;
    double err = 0;
};

double eval(SimpsonCtx& c, double x)
{
    ++c.evals;
    double y = c.f(x);
    if (!std::isfinite(y)) {
        std::ostringstream os;
        os << "quadrature: integrand not finite at " << x;
        throw SolverError(os.str());
    }
    return y;
}

double simpson_rec(SimpsonCtx& c, double a, double b, double fa, double fm, double fb, double whole, double tol,
                   int depth)
{
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = eval(c, lm), frm = eval(c, rm);
    double h = b - a;
    double left = h / 12 * (fa + 4 * flm + fm);
    double right = h / 12 * (fm + 4 * frm + fb);
    double delta = left + right - whole;
    if (std::abs(delta) <= 15 * tol || depth <= 0 || m == a || m == b) {
        if (std::abs(delta) > 15 * tol) throw SolverError("quadrature: recursion depth exhausted (non-integrable behavior?)");
        c.err += std::abs(delta) / 15;
        return left + right + delta / 15;
    }
    if (++c.intervals > c.max_intervals) throw SolverError("quadrature: subdivision cap reached");
    return simpson_rec(c, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(c, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

// 7-point Gauss / 15-point Kronrod nodes on [-1, 1]
const double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                       0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                       0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                       0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
const double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                       0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                       0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                       0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
const double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b, value, err;
    bool operator<(const Panel& o) const { return err < o.err; }
};

Panel gk15(const Fn1& f, double a, double b, long& evals)
{
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fc = f(c);
    double rk = fc * wgk[7], rg = fc * wg[3];
    for (int j = 0; j < 7; ++j) {
        double dx = h * xgk[j];
        double s = f(c - dx) + f(c + dx);
        rk += wgk[j] * s;
        if (j % 2 == 1) rg += wg[j / 2] * s;
    }
    evals += 15;
    if (!std::isfinite(rk)) throw SolverError("quadrature: integrand not finite");
    return {a, b, rk * h, std::abs((rk - rg) * h)};
}

} // namespace

QuadResult quad_simpson(const Fn1& f, double a, double b, const QuadOptions& opt)
{
    if (a == b) return {};
    if (a > b) {
        auto r = quad_simpson(f, b, a, opt);
        r.value = -r.value;
        return r;
    }
    SimpsonCtx c{f, opt.max_intervals};
    double fa = eval(c, a), fm = eval(c, 0.5 * (a + b)), fb = eval(c, b);
    double whole = (b - a) / 6 * (fa + 4 * fm + fb);
    double tol = std::max(opt.tol_abs, opt.tol_rel * std::abs(whole));
    double v = simpson_rec(c, a, b, fa, fm, fb, whole, tol, 60);
    // tighten once if the relative target moved a lot with the refined value
    double want = std::max(opt.tol_abs, opt.tol_rel * std::abs(v));
    if (c.err > want) {
        SimpsonCtx c2{f, opt.max_intervals};
        c2.evals = c.evals;
        v = simpson_rec(c2, a, b, fa, fm, fb, whole, want, 60);
        return {v, c2.err, c2.evals, c2.intervals};
    }
    return {v, c.err, c.evals, c.intervals};
}

double quad_adaptive(const Fn1& f, double a, double b, double tol)
{
    return quad_simpson(f, a, b, {tol, tol, 1L << 20}).value;
}

QuadResult quad_gk(const Fn1& f, double a, double b, const QuadOptions& opt)
{
    if (a == b) return {};
    if (a > b) {
        auto r = quad_gk(f, b, a, opt);
        r.value = -r.value;
        return r;
    }
    long evals = 0;
    std::priority_queue<Panel> q;
    Panel p0 = gk15(f, a, b, evals);
    q.push(p0);
    double total = p0.value, err = p0.err;
    long n = 1;
    while (err > std::max(opt.tol_abs, opt.tol_rel * std::abs(total))) {
        if (n >= opt.max_intervals) throw SolverError("quadrature: subdivision cap reached");
        Panel w = q.top();
        q.pop();
        double m = 0.5 * (w.a + w.b);
        if (m == w.a || m == w.b) throw SolverError("quadrature: panel width underflow (non-integrable behavior?)");
        Panel l = gk15(f, w.a, m, evals), r = gk15(f, m, w.b, evals);
        total += l.value + r.value - w.value;
        err += l.err + r.err - w.err;
        q.push(l);
        q.push(r);
        ++n;
        // running sums drift; resum occasionally
        if (n % 64 == 0) {
            auto copy = q;
            total = err = 0;
            while (!copy.empty()) {
                total += copy.top().value;
                err += copy.top().err;
                copy.pop();
            }
        }
    }
    return {total, err, evals, n};
}

} // namespace rinv
