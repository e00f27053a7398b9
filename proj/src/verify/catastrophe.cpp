#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include "rinv/parallel.hpp"
#include "rinv/verify.hpp"

namespace rinv {

namespace {

struct LineFit {
    double a = 0, b = 0, sse = 0, sst = 0;
};

// y = a + b x
LineFit line(const std::vector<double>& x, const std::vector<double>& y)
{
    double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LineFit f;
    f.b = sxx > 0 ? sxy / sxx : 0;
    f.a = my - f.b * mx;
    f.sst = syy;
    f.sse = std::max(0.0, syy - f.b * sxy);
    return f;
}

} // namespace

BlowupFit fit_blowup(const std::vector<double>& t, const std::vector<double>& g)
{
    BlowupFit out;
    std::size_t peak = t.size();
    for (std::size_t i = 0; i < t.size(); ++i)
        if (std::isfinite(g[i]) && g[i] > 0 && (peak == t.size() || g[i] > g[peak])) peak = i;
    if (peak == t.size()) {
        out.reason = "no finite gradient samples";
        return out;
    }
    std::vector<double> tw, lg;
    for (std::size_t i = peak + 1; i-- > 0 && tw.size() < 10;)
        if (std::isfinite(g[i]) && g[i] > 0) {
            tw.insert(tw.begin(), t[i]);
            lg.insert(lg.begin(), std::log(g[i]));
        }
    out.samples = tw.size();
    if (tw.size() < 5) {
        out.reason = "fewer than 5 samples before the largest gradient";
        return out;
    }
    if (lg.back() - lg.front() < std::log(1.5)) {
        out.reason = "gradient does not grow over the fit window";
        return out;
    }

    double tl = tw.back(), span = tl - tw.front();
    auto sse_at = [&](double logd) {
        double T = tl + std::exp(logd) * span;
        std::vector<double> x(tw.size());
        for (std::size_t i = 0; i < tw.size(); ++i) x[i] = std::log(T - tw[i]);
        return line(x, lg);
    };

    const int n = 400;
    double lo = std::log(1e-6), hi = std::log(10.0);
    int best = 0;
    double best_sse = INFINITY;
    for (int i = 0; i <= n; ++i) {
        double s = sse_at(lo + (hi - lo) * i / n).sse;
        if (s < best_sse) {
            best_sse = s;
            best = i;
        }
    }
    if (best == n) {
        out.reason = "best fit sits at the far end of the search range, no finite blow-up time";
        return out;
    }
    double a = lo + (hi - lo) * std::max(0, best - 1) / n, b = lo + (hi - lo) * std::min(n, best + 1) / n;
    const double gr = (std::sqrt(5.0) - 1) / 2;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = sse_at(c).sse, fd = sse_at(d).sse;
    for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = sse_at(c).sse;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = sse_at(d).sse;
        }
    }
    double ld = (a + b) / 2;
    LineFit lf = sse_at(ld);
    out.t_star = tl + std::exp(ld) * span;
    out.exponent = -lf.b;
    out.r2 = lf.sst > 0 ? 1 - lf.sse / lf.sst : 0;

    // Curvature of the residual sum of squares in T.
    double T = out.t_star, dT = 1e-4 * (T - tl);
    auto sse_T = [&](double TT) { return sse_at(std::log((TT - tl) / span)).sse; };
    double curv = (sse_T(T + dT) - 2 * sse_T(T) + sse_T(T - dT)) / (dT * dT);
    double dof = static_cast<double>(tw.size()) - 3;
    out.ci = curv > 0 ? 1.96 * std::sqrt(2 * (lf.sse / dof) / curv) : INFINITY;

    if (!(out.exponent > 0)) {
        out.reason = "fitted exponent is not positive";
        return out;
    }
    if (out.r2 < 0.98) {
        out.reason = "fit quality R^2 below 0.98";
        return out;
    }
    out.detected = true;
    return out;
}

CatastropheReport catastrophe_scan(const Field& f, const Grid4& spatial, const std::vector<double>& times, double h,
                                   GradientMonitor monitor)
{
    CatastropheReport rep;
    std::size_t nx = spatial.axes[1].count, ny = spatial.axes[2].count, nz = spatial.axes[3].count;
    std::size_t N = nx * ny * nz;
    int first = monitor == GradientMonitor::velocity ? 2 : 0;

    for (double t : times) {
        CatastropheSample s;
        s.t = t;
        double gmax = 0;
        std::mutex m;
        try {
            parallel_for(N, 256, [&](std::size_t b, std::size_t e) {
                double local = 0;
                for (std::size_t k = b; k < e; ++k) {
                    SpacetimePoint x = spatial.point(0, k / (ny * nz), (k / nz) % ny, k % nz);
                    x.t = t;
                    double fro = 0;
                    for (int mu = 1; mu < 4; ++mu) {
                        SpacetimePoint a = x, c = x;
                        a[mu] += h;
                        c[mu] -= h;
                        State5 ua = f(a), uc = f(c);
                        for (int j = first; j < 5; ++j) {
                            double d = (ua[j] - uc[j]) / (2 * h);
                            fro += d * d;
                        }
                    }
                    if (!std::isfinite(fro)) throw SolverError("non-finite gradient");
                    local = std::max(local, std::sqrt(fro));
                }
                std::lock_guard<std::mutex> lk(m);
                gmax = std::max(gmax, local);
            });
            s.gradient = gmax;
        } catch (const std::exception& e) {
            s.gradient = std::numeric_limits<double>::quiet_NaN();
            s.error = e.what();
        }
        rep.samples.push_back(s);
    }

    std::vector<double> tt, gg;
    for (const auto& s : rep.samples) {
        tt.push_back(s.t);
        gg.push_back(s.gradient);
    }
    rep.fit = fit_blowup(tt, gg);
    return rep;
}

} // namespace rinv
