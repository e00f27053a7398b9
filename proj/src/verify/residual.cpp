#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>

#include "rinv/kernels.hpp"
#include "rinv/parallel.hpp"
#include "rinv/verify.hpp"

namespace rinv {

namespace {

// Relative accuracy assumed for a single field evaluation, including implicit solves
// and rounding of the shifted coordinates.
constexpr double eval_accuracy = 1e-13;

struct Accum {
    std::array<double, 5> max_abs{}, sum_sq{}, scale{}, noise{};

    void merge(const Accum& o)
    {
        for (int i = 0; i < 5; ++i) {
            max_abs[i] = std::max(max_abs[i], o.max_abs[i]);
            sum_sq[i] += o.sum_sq[i];
            scale[i] = std::max(scale[i], o.scale[i]);
            noise[i] = std::max(noise[i], o.noise[i]);
        }
    }
};

State5 eval_checked(const Field& f, const SpacetimePoint& pt)
{
    State5 u;
    try {
        u = f(pt);
    } catch (const std::exception& e) {
        std::ostringstream os;
        os.precision(17);
        os << "field evaluation failed at (t, x, y, z) = (" << pt.t << ", " << pt.x.x << ", " << pt.x.y << ", "
           << pt.x.z << "): " << e.what();
        throw PreconditionError(os.str());
    }
    for (double c : u)
        if (!std::isfinite(c)) {
            std::ostringstream os;
            os.precision(17);
            os << "field is not finite at (t, x, y, z) = (" << pt.t << ", " << pt.x.x << ", " << pt.x.y << ", "
               << pt.x.z << ")";
            throw PreconditionError(os.str());
        }
    return u;
}

// Residuals of one chunk at step h. centre[k] holds u at point k.
Accum chunk_residual(const Field& f, const Grid4& grid, const PhysParams& pp, double h, std::size_t b, std::size_t e,
                     const std::vector<State5>& centre)
{
    std::size_t n = e - b;
    // rho p v0 v1 v2 | drho(4) dp(3) dv(12) ds(4) | r(5)
    std::vector<double> buf(n * 35);
    auto col = [&](int c) { return buf.data() + static_cast<std::size_t>(c) * n; };
    double kappa = pp.kappa;

    for (std::size_t k = 0; k < n; ++k) {
        SpacetimePoint x = grid.point(b + k);
        const State5& u = centre[k];
        for (int j = 0; j < 5; ++j) col(j)[k] = u[j];
        for (int mu = 0; mu < 4; ++mu) {
            SpacetimePoint xp = x, xm = x;
            xp[mu] += h;
            xm[mu] -= h;
            State5 up = eval_checked(f, xp), um = eval_checked(f, xm);
            double inv = 1 / (2 * h);
            col(5 + mu)[k] = (up[0] - um[0]) * inv;
            if (mu > 0) col(9 + mu - 1)[k] = (up[1] - um[1]) * inv;
            for (int i = 0; i < 3; ++i) col(12 + 4 * i + mu)[k] = (up[2 + i] - um[2 + i]) * inv;
            double sp = up[1] / std::pow(up[0], kappa), sm = um[1] / std::pow(um[0], kappa);
            col(24 + mu)[k] = (sp - sm) * inv;
        }
    }

    kernels::ResidualInputs in;
    in.n = n;
    in.rho = col(0);
    in.p = col(1);
    for (int i = 0; i < 3; ++i) in.v[i] = col(2 + i);
    for (int mu = 0; mu < 4; ++mu) in.drho[mu] = col(5 + mu);
    for (int i = 0; i < 3; ++i) in.dp[i] = col(9 + i);
    for (int i = 0; i < 3; ++i)
        for (int mu = 0; mu < 4; ++mu) in.dv[i][mu] = col(12 + 4 * i + mu);
    for (int mu = 0; mu < 4; ++mu) in.ds[mu] = col(24 + mu);
    kernels::ResidualOutputs out;
    for (int i = 0; i < 5; ++i) out.r[i] = col(28 + i);
    kernels::assemble(in, pp.g, pp.omega, out);

    Accum a;
    for (int i = 0; i < 5; ++i) {
        kernels::Norms nm = kernels::reduce(out.r[i], n);
        a.max_abs[i] = nm.max_abs;
        a.sum_sq[i] = nm.sum_sq;
    }

    // Term magnitudes and the rounding floor, scalar.
    const Vec3& g = pp.g;
    const Vec3& om = pp.omega;
    double tiny = eval_accuracy / h;
    for (std::size_t k = 0; k < n; ++k) {
        double rho = in.rho[k], p = in.p[k];
        Vec3 v{in.v[0][k], in.v[1][k], in.v[2][k]};
        double vs = std::abs(v.x) + std::abs(v.y) + std::abs(v.z);
        Vec3 cor = cross(om, v);
        for (int i = 0; i < 3; ++i) {
            double adv = v.x * in.dv[i][1][k] + v.y * in.dv[i][2][k] + v.z * in.dv[i][3][k];
            double t = std::max({std::abs(rho * in.dv[i][0][k]), std::abs(rho * adv), std::abs(in.dp[i][k]),
                                 std::abs(rho * g[i]), std::abs(rho * cor[i])});
            a.scale[i] = std::max(a.scale[i], t);
            a.noise[i] = std::max(a.noise[i], tiny * (std::abs(rho * v[i]) * (1 + vs) + std::abs(p)));
        }
        double div = in.dv[0][1][k] + in.dv[1][2][k] + in.dv[2][3][k];
        double adv_r = v.x * in.drho[1][k] + v.y * in.drho[2][k] + v.z * in.drho[3][k];
        a.scale[3] = std::max({a.scale[3], std::abs(in.drho[0][k]), std::abs(adv_r), std::abs(rho * div)});
        a.noise[3] = std::max(a.noise[3], tiny * std::abs(rho) * (1 + 2 * vs));
        double adv_s = v.x * in.ds[1][k] + v.y * in.ds[2][k] + v.z * in.ds[3][k];
        double s = p / std::pow(rho, kappa);
        a.scale[4] = std::max({a.scale[4], std::abs(in.ds[0][k]), std::abs(adv_s)});
        a.noise[4] = std::max(a.noise[4], tiny * std::abs(s) * (1 + vs));
    }
    return a;
}

ResidualReport run(const Field& f, const Grid4& grid, const PhysParams& pp, double h, bool two)
{
    pp.validate();
    if (!(h > 0) || !std::isfinite(h)) throw PreconditionError("euler_residual: step must be positive");
    std::size_t N = grid.size();
    Accum total, total_half;
    std::mutex m;

    parallel_for(N, 512, [&](std::size_t b, std::size_t e) {
        std::vector<State5> centre(e - b);
        for (std::size_t k = b; k < e; ++k) centre[k - b] = eval_checked(f, grid.point(k));
        Accum a = chunk_residual(f, grid, pp, h, b, e, centre);
        Accum ah;
        if (two) ah = chunk_residual(f, grid, pp, h / 2, b, e, centre);
        std::lock_guard<std::mutex> lk(m);
        total.merge(a);
        if (two) total_half.merge(ah);
    });

    ResidualReport r;
    r.h = h;
    r.points = N;
    r.grid = grid;
    for (int i = 0; i < 5; ++i) {
        r.max_abs[i] = total.max_abs[i];
        r.rms[i] = std::sqrt(total.sum_sq[i] / static_cast<double>(N));
        r.scale[i] = std::max(total.scale[i], total_half.scale[i]);
        r.noise[i] = total.noise[i];
    }
    if (two) {
        r.has_order = true;
        for (int i = 0; i < 5; ++i) {
            r.max_abs_half[i] = total_half.max_abs[i];
            r.at_roundoff[i] = r.max_abs[i] <= r.noise[i];
            r.order[i] = r.at_roundoff[i] ? std::numeric_limits<double>::quiet_NaN()
                                          : std::log2(r.max_abs[i] / r.max_abs_half[i]);
        }
    }
    return r;
}

} // namespace

double ResidualReport::min_order() const
{
    double m = std::numeric_limits<double>::quiet_NaN();
    for (int i = 0; i < 5; ++i)
        if (has_order && !at_roundoff[i]) m = std::isnan(m) ? order[i] : std::min(m, order[i]);
    return m;
}

double ResidualReport::max_relative() const
{
    double m = 0;
    for (int i = 0; i < 5; ++i)
        if (max_abs[i] > noise[i]) m = std::max(m, max_abs[i] / std::max(scale[i], noise[i]));
    return m;
}

bool ResidualReport::converges(double required) const
{
    if (!has_order) return false;
    for (int i = 0; i < 5; ++i)
        if (!at_roundoff[i] && !(order[i] >= required)) return false;
    return true;
}

double coordinate_scale(const Grid4& grid)
{
    double s = 1;
    for (int a = 1; a < 4; ++a) s = std::max(s, grid.axes[a].hi - grid.axes[a].lo);
    return s;
}

ResidualReport euler_residual(const Field& f, const Grid4& grid, const PhysParams& params, double h)
{
    if (h <= 0) h = 1e-5 * coordinate_scale(grid);
    return run(f, grid, params, h, false);
}

ResidualReport euler_residual_order(const Field& f, const Grid4& grid, const PhysParams& params, double h)
{
    if (h <= 0) h = 1e-3 * coordinate_scale(grid);
    return run(f, grid, params, h, true);
}

} // namespace rinv
